// alesim: simulate / ensemble / analyze / verify-particle / render
//
// Exit codes: 0 success, 1 runtime abort (run-health), 2 validation failure.
// All outputs are deterministic functions of (config, seed): no timestamps,
// no hostnames, no iteration-order dependence, so replaying a manifest
// reproduces every artifact byte-for-byte.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ale/certify.hpp"
#include "ale/diagnostics.hpp"
#include "ale/ensemble.hpp"
#include "ale/growth.hpp"
#include "ale/io/config.hpp"
#include "ale/io/csv.hpp"
#include "ale/io/manifest.hpp"
#include "ale/io/svg.hpp"
#include "ale/ou.hpp"
#include "ale/spectral.hpp"
#include "ale/version.hpp"

namespace fs = std::filesystem;
using namespace ale;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;  // 0 = keep the config's seed
    unsigned jobs = 0;       // 0 = keep the config's parallelism
};

RunConfig load_and_override(const CliOptions& opt) {
    RunConfig cfg = load_config(opt.config_path);
    if (opt.seed != 0) {
        cfg.seed = opt.seed;
        cfg.resolved["run"]["seed"] = opt.seed;
    }
    if (opt.jobs != 0) {
        cfg.parallelism = opt.jobs;
        cfg.resolved["ensemble"]["parallelism"] = opt.jobs;
    }
    return cfg;
}

json grid_choices_json(const RunConfig& cfg, const GrowthEngine& engine,
                       const std::vector<double>& radii) {
    return {{"M_density", engine.density_grid()},
            {"M_dft", 4096},
            {"K", cfg.K},
            {"radii", radii},
            {"deriv_tracker",
             {{"enabled", engine.tracking()},
              {"max_nodes", engine.tracker().max_nodes_used()},
              {"refit_interval", 256}}}};
}

// evolve one chain, write its artifacts into `dir`, and return the manifest;
// run-health aborts are recorded in the manifest and rethrown
RunManifest simulate_into(const RunConfig& cfg, std::uint64_t chain_seed, const fs::path& dir,
                          bool render_svg) {
    fs::create_directories(dir);
    RunManifest manifest = make_manifest(cfg);
    manifest.master_seed = chain_seed;
    manifest.run_id = manifest.config_hash_hex + "-s" + std::to_string(chain_seed);

    GrowthEngine engine(cfg.params, chain_seed);
    const long n_total = steps_for_time(cfg.params.T, cfg.params.c);
    try {
        engine.run_steps(n_total);
    } catch (const run_health_error& e) {
        write_angles_csv((dir / "angles.csv").string(), engine.state());
        manifest.outputs = {"angles.csv"};
        manifest.health = {{"aborted", true},
                           {"failing_step", engine.state().n() + 1},
                           {"message", e.what()}};
        manifest.grid_choices = grid_choices_json(cfg, engine, {});
        manifest.write((dir / "manifest.json").string());
        throw;
    }
    const ClusterState& state = engine.state();

    const double r_extract =
        cfg.radii.empty() ? default_extraction_radius(state) : cfg.radii.front();
    const double r_dev = cfg.radii.size() > 1 ? cfg.radii[1] : 1.5;
    const std::vector<double> schedule = snapshot_times(cfg.params.T, cfg.snapshots);
    const std::vector<double> coeff_times = cfg.times.empty() ? schedule : cfg.times;

    write_angles_csv((dir / "angles.csv").string(), state);

    std::vector<DeviationRecord> devs;
    for (double t : schedule) devs.push_back(disk_deviation(state, t, r_dev));
    write_deviation_csv((dir / "deviation.csv").string(), devs);

    const CoefficientProcess cp = coefficient_process(state, coeff_times, cfg.K, r_extract);
    write_coeffs_csv((dir / "coeffs.csv").string(), cp);

    manifest.outputs = {"angles.csv", "deviation.csv", "coeffs.csv", "manifest.json"};
    if (render_svg) {
        const double rho = 1.0 + std::sqrt(cfg.params.c) / 4.0;
        std::vector<std::vector<cplx>> curves;
        for (int i = 1; i <= 4; ++i) {
            const std::size_t n_t = static_cast<std::size_t>(
                steps_for_time(cfg.params.T * i / 4.0, cfg.params.c));
            curves.push_back(level_line(state, n_t, rho, 2048));
        }
        write_boundary_svg((dir / "boundary.svg").string(), curves);
        manifest.outputs.insert(manifest.outputs.begin() + 3, "boundary.svg");
    }
    manifest.grid_choices = grid_choices_json(cfg, engine, {r_extract, r_dev});
    manifest.write((dir / "manifest.json").string());
    return manifest;
}

int cmd_simulate(const CliOptions& opt) {
    const RunConfig cfg = load_and_override(opt);
    try {
        const RunManifest m = simulate_into(cfg, cfg.seed, opt.out_dir, /*render_svg=*/true);
        std::cout << "run " << m.run_id << ": " << "wrote " << m.outputs.size()
                  << " artifacts to " << opt.out_dir << "\n";
        return 0;
    } catch (const run_health_error& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return 1;
    }
}

std::string run_dir_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run_%04zu", i);
    return buf;
}

// deterministic reduction over the per-run CSVs in `root`; used both right
// after an ensemble and by `analyze` on an existing directory
json aggregate_ensemble(const fs::path& root, const RunConfig& cfg,
                        const std::vector<EnsembleFailure>& failures) {
    std::vector<CoefficientProcess> ensemble;
    std::vector<double> sup_devs;
    std::vector<std::size_t> used_runs;
    for (std::size_t i = 0; i < cfg.ensemble_size; ++i) {
        const fs::path dir = root / run_dir_name(i);
        if (!fs::exists(dir / "coeffs.csv")) continue;  // aborted run
        ensemble.push_back(read_coeffs_csv((dir / "coeffs.csv").string()));
        used_runs.push_back(i);
        std::ifstream dev(dir / "deviation.csv");
        std::string line, last;
        std::getline(dev, line);  // header
        while (std::getline(dev, line))
            if (!line.empty()) last = line;
        if (!last.empty()) {
            const auto f = last.find_last_of(',');
            const auto f2 = last.find_last_of(',', f - 1);
            sup_devs.push_back(std::stod(last.substr(f2 + 1, f - f2 - 1)));
        }
    }

    json report;
    report["software_version"] = kVersion;
    report["ensemble_size"] = cfg.ensemble_size;
    report["runs_used"] = used_runs;
    report["eta"] = cfg.params.eta;
    report["c"] = cfg.params.c;
    json fail_list = json::array();
    for (const auto& f : failures) fail_list.push_back({{"run_id", f.run_id}, {"what", f.what}});
    report["failures"] = fail_list;

    const double t_final = ensemble.empty() || ensemble.front().times.empty()
                               ? cfg.params.T
                               : ensemble.front().times.back();
    json cov = json::array();
    json cross = json::array();
    if (ensemble.size() >= 50) {
        const int k_max = std::min(3, cfg.K - 1);
        for (int k = 0; k <= k_max; ++k) {
            const CovarianceEstimate est = covariance_estimator(ensemble, t_final, t_final, k);
            json cell = {{"s", t_final}, {"t", t_final},     {"k", k},
                         {"eta", cfg.params.eta},            {"estimate", est.estimate},
                         {"stderr", est.stderr_jack}};
            if (cfg.ou_reference) {
                const double ref = ou_covariance(t_final, t_final, ou_params(cfg.params.eta, k));
                cell["reference"] = ref;
                cell["z_score"] = est.stderr_jack > 0.0 ? (est.estimate - ref) / est.stderr_jack : 0.0;
            }
            cov.push_back(cell);
        }
        for (int k1 = 1; k1 <= k_max; ++k1)
            for (int k2 = k1 + 1; k2 <= k_max; ++k2) {
                const CovarianceEstimate est = cross_mode_estimator(ensemble, t_final, k1, k2);
                cross.push_back({{"t", t_final},
                                 {"k1", k1},
                                 {"k2", k2},
                                 {"estimate", est.estimate},
                                 {"stderr", est.stderr_jack},
                                 {"z_score", est.stderr_jack > 0.0
                                                 ? est.estimate / est.stderr_jack
                                                 : 0.0}});
            }
    }
    report["covariance"] = cov;
    report["cross_mode"] = cross;

    if (!sup_devs.empty()) {
        std::vector<double> sorted = sup_devs;
        std::sort(sorted.begin(), sorted.end());
        report["deviation"] = {{"t", t_final},
                               {"median_sup_dev", sorted[sorted.size() / 2]},
                               {"values", sup_devs}};
    }
    return report;
}

int cmd_ensemble(const CliOptions& opt) {
    const RunConfig cfg = load_and_override(opt);
    const fs::path root = opt.out_dir;
    fs::create_directories(root);

    // ensemble runs skip per-run SVG and restrict coefficient extraction to
    // the final time unless the config asks for more
    RunConfig run_cfg = cfg;
    if (run_cfg.times.empty()) run_cfg.times = {cfg.params.T};

    const auto outcome = run_ensemble<int>(
        cfg.ensemble_size, cfg.seed, cfg.parallelism,
        [&](std::size_t i, std::uint64_t seed) {
            simulate_into(run_cfg, seed, root / run_dir_name(i), /*render_svg=*/false);
            return 0;
        });

    RunManifest manifest = make_manifest(cfg);
    manifest.grid_choices = {{"M_dft", 4096}, {"K", cfg.K}};
    manifest.outputs = {"covariance_report.json", "manifest.json"};
    if (!outcome.failures.empty()) {
        json fails = json::array();
        for (const auto& f : outcome.failures)
            fails.push_back({{"run_id", f.run_id}, {"what", f.what}});
        manifest.health = {{"aborted", false}, {"failed_runs", fails}};
    }

    const json report = aggregate_ensemble(root, cfg, outcome.failures);
    std::ofstream rep(root / "covariance_report.json");
    rep << report.dump(2) << '\n';
    manifest.write((root / "manifest.json").string());

    std::cout << "ensemble: " << cfg.ensemble_size - outcome.failures.size() << "/"
              << cfg.ensemble_size << " runs completed\n";
    return outcome.failures.empty() ? 0 : 1;
}

int cmd_analyze(const CliOptions& opt) {
    const fs::path root = opt.out_dir;
    const RunManifest manifest = RunManifest::read((root / "manifest.json").string());
    RunConfig cfg = parse_config(manifest.resolved_config);
    const json report = aggregate_ensemble(root, cfg, {});
    std::ofstream rep(root / "covariance_report.json");
    rep << report.dump(2) << '\n';
    std::cout << "analyze: report rebuilt for " << cfg.ensemble_size << " runs\n";
    return 0;
}

int cmd_verify_particle(const std::string& type, double c, double gamma_re, double gamma_im) {
    ParticleMap map;
    double lambda_bound = -1.0;
    try {
        if (type == "slit") {
            map = make_slit_map(c);
        } else if (type == "spreadout") {
            map = make_spreadout_map(c, cplx(gamma_re, gamma_im));
            lambda_bound = 2.0 * std::abs(cplx(gamma_re, gamma_im) - 1.0) / std::sqrt(c);
        } else {
            std::cerr << "verify-particle: type must be slit|spreadout\n";
            return 2;
        }
    } catch (const std::invalid_argument& e) {
        std::cout << "univalence: FAIL (" << e.what() << ")\n";
        return 2;
    }

    const double cap = map.capacity();
    const RegularityReport reg = regularity_estimate(map, GridSpec::recommended());
    const cplx beta = beta_coefficient(map);
    const double beta_bound = reg.lambda_hat * std::sqrt(c) / 2.0;

    bool ok = std::abs(cap - c) <= 1e-8;
    std::printf("capacity:   %.12g (construction %.12g)  %s\n", cap, c, ok ? "ok" : "MISMATCH");
    bool reg_ok = lambda_bound < 0.0 || reg.lambda_hat <= lambda_bound * (1.0 + 1e-5);
    std::printf("regularity: lambda_hat = %.6g%s  %s\n", reg.lambda_hat,
                lambda_bound < 0.0
                    ? ""
                    : (" (closed-form bound " + std::to_string(lambda_bound) + ")").c_str(),
                reg_ok ? "ok" : "ABOVE BOUND");
    // the first-coefficient bound is tight for the spread-out family, so
    // allow relative slack at the same scale as the certification grid's
    bool beta_ok = std::abs(beta - 1.0) <= beta_bound * (1.0 + 1e-5) + 1e-12;
    std::printf("beta:       %.12g%+.12gi, |beta-1| = %.6g (bound %.6g)  %s\n", beta.real(),
                beta.imag(), std::abs(beta - 1.0), beta_bound, beta_ok ? "ok" : "ABOVE BOUND");
    std::printf("univalence: ok\n");
    ok = ok && reg_ok && beta_ok;
    std::printf("%s\n", ok ? "certified" : "NOT certified");
    return ok ? 0 : 2;
}

int cmd_render(const CliOptions& opt, double rho_override, int n_curves) {
    const fs::path dir = opt.out_dir;
    if (!fs::exists(dir / "manifest.json") || !fs::exists(dir / "angles.csv")) {
        std::cerr << "render: no run found in " << dir << " (need manifest.json + angles.csv)\n";
        return 2;
    }
    const RunManifest manifest = RunManifest::read((dir / "manifest.json").string());
    const RunConfig cfg = parse_config(manifest.resolved_config);
    const auto rows = read_angles_csv((dir / "angles.csv").string());
    const ClusterState state = state_from_history(cfg.params, rows);

    const double rho = rho_override > 0.0 ? rho_override : 1.0 + std::sqrt(cfg.params.c) / 4.0;
    std::vector<std::vector<cplx>> curves;
    for (int i = 1; i <= n_curves; ++i) {
        const std::size_t n_t = (state.n() * static_cast<std::size_t>(i)) /
                                static_cast<std::size_t>(n_curves);
        curves.push_back(level_line(state, n_t, rho, 2048));
    }
    write_boundary_svg((dir / "boundary.svg").string(), curves);
    std::cout << "render: boundary.svg with " << n_curves << " level lines at rho = " << rho
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar random aggregation simulator (exterior conformal maps)"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CliOptions opt;
    std::string vp_type = "slit";
    double vp_c = 0.01, vp_gamma_re = 1.5, vp_gamma_im = 0.0;
    double render_rho = 0.0;
    int render_curves = 4;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* copt = sub->add_option("--config", opt.config_path, "JSON config path");
        if (needs_config) copt->required();
        sub->add_option("--seed", opt.seed, "override config seed (nonzero)");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--jobs", opt.jobs, "worker threads for ensembles");
    };

    add_common(app.add_subcommand("simulate", "single run with full artifacts"), true);
    add_common(app.add_subcommand("ensemble", "seeded ensemble + aggregation"), true);
    add_common(app.add_subcommand("analyze", "re-aggregate an existing ensemble directory"),
               false);

    auto* vp = app.add_subcommand("verify-particle", "certify capacity/regularity/beta");
    vp->add_option("--type", vp_type, "slit|spreadout")->required();
    vp->add_option("--c", vp_c, "capacity")->required();
    vp->add_option("--gamma", vp_gamma_re, "spread-out gamma (real part)");
    vp->add_option("--gamma-im", vp_gamma_im, "spread-out gamma (imaginary part)");

    auto* rd = app.add_subcommand("render", "draw cluster level lines from a run directory");
    rd->add_option("--out", opt.out_dir, "run directory")->required();
    rd->add_option("--rho", render_rho, "level-line radius (default 1 + sqrt(c)/4)");
    rd->add_option("--curves", render_curves, "number of time snapshots to draw");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("simulate")) return cmd_simulate(opt);
        if (app.got_subcommand("ensemble")) return cmd_ensemble(opt);
        if (app.got_subcommand("analyze")) return cmd_analyze(opt);
        if (app.got_subcommand("verify-particle"))
            return cmd_verify_particle(vp_type, vp_c, vp_gamma_re, vp_gamma_im);
        if (app.got_subcommand("render")) return cmd_render(opt, render_rho, render_curves);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const run_health_error& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
