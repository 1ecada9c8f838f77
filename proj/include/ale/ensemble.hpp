#pragma once
// Ensemble harness: run N independent jobs with seeds split deterministically
// from a master seed, on up to `jobs` worker threads. Results land in a
// vector indexed by run id, so any later reduction is a deterministic fold
// regardless of completion order. Worker exceptions are captured and
// reported per run id rather than crashing the whole ensemble.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "ale/rng.hpp"

namespace ale {

struct EnsembleFailure {
    std::size_t run_id = 0;
    std::string what;
};

template <typename Result>
struct EnsembleOutcome {
    std::vector<Result> results;           // indexed by run id; default for failed runs
    std::vector<bool> ok;
    std::vector<EnsembleFailure> failures; // sorted by run id
};

// fn(run_id, seed) -> Result; seed = derive_seed(master_seed, run_id)
template <typename Result>
EnsembleOutcome<Result> run_ensemble(std::size_t n_runs, std::uint64_t master_seed,
                                     unsigned jobs,
                                     const std::function<Result(std::size_t, std::uint64_t)>& fn) {
    EnsembleOutcome<Result> out;
    out.results.resize(n_runs);
    out.ok.assign(n_runs, false);
    std::vector<std::string> errors(n_runs);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_runs) return;
            try {
                out.results[i] = fn(i, derive_seed(master_seed, i));
                out.ok[i] = true;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            } catch (...) {
                errors[i] = "unknown error";
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < n_runs; ++i)
        if (!out.ok[i]) out.failures.push_back({i, errors[i]});
    return out;
}

} // namespace ale
