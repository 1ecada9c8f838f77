#pragma once
// Run manifest: everything needed to reproduce a run byte-for-byte — the
// resolved config, the master seed, the seed-splitting rule, grid choices,
// and the output inventory. Deliberately free of timestamps and hostnames.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ale/io/config.hpp"
#include "ale/version.hpp"

namespace ale {

struct RunManifest {
    std::string run_id;
    std::string config_hash_hex;
    std::uint64_t master_seed = 0;
    std::string per_run_seeds = "xor-splitmix64-v1";  // seed_i = master ^ splitmix64(i)
    std::string software_version = kVersion;
    json resolved_config = json::object();
    std::vector<std::string> outputs;
    json grid_choices = json::object();
    json health = {{"aborted", false}};

    json to_json() const {
        return {{"run_id", run_id},
                {"config_hash", config_hash_hex},
                {"master_seed", master_seed},
                {"per_run_seeds", per_run_seeds},
                {"software_version", software_version},
                {"resolved_config", resolved_config},
                {"outputs", outputs},
                {"grid_choices", grid_choices},
                {"health", health}};
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        out << to_json().dump(2) << '\n';
    }

    static RunManifest read(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open manifest: " + path);
        json j;
        in >> j;
        RunManifest m;
        m.run_id = j.at("run_id").get<std::string>();
        m.config_hash_hex = j.at("config_hash").get<std::string>();
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        m.per_run_seeds = j.at("per_run_seeds").get<std::string>();
        m.software_version = j.at("software_version").get<std::string>();
        m.resolved_config = j.at("resolved_config");
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.grid_choices = j.at("grid_choices");
        m.health = j.at("health");
        return m;
    }
};

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline RunManifest make_manifest(const RunConfig& cfg) {
    RunManifest m;
    m.config_hash_hex = hash_hex(config_hash(cfg));
    m.master_seed = cfg.seed;
    m.run_id = m.config_hash_hex + "-s" + std::to_string(cfg.seed);
    m.resolved_config = cfg.resolved;
    return m;
}

} // namespace ale
