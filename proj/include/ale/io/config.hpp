#pragma once
// JSON run configuration: strict schema (unknown keys are errors), explicit
// defaults, and a canonical resolved form that is hashed into the manifest.
// The resolved form materializes every default, so two configs that resolve
// identically hash identically regardless of which keys were spelled out.

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ale/cluster.hpp"
#include "ale/spectral.hpp"

namespace ale {

using nlohmann::json;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams params;
    std::uint64_t seed = 1;
    int snapshots = 32;           // schedule: T*i/snapshots, i = 1..snapshots
    std::size_t ensemble_size = 1;
    unsigned parallelism = 1;
    int K = 64;                   // Laurent truncation for coefficient output
    std::vector<double> radii;    // extraction radii; empty = default rule
    std::vector<double> times;    // analysis times; empty = snapshot schedule
    bool ou_reference = true;     // emit OU reference values alongside estimates
    json resolved;                // canonical, fully-defaulted config
};

namespace detail {

inline void reject_unknown(const json& obj, const char* where,
                           std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw config_error(std::string("config: unknown key '") + it.key() + "' in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("config: bad type for '") + key + "'");
    }
}

} // namespace detail

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline RunConfig parse_config(const json& root) {
    if (!root.is_object()) throw config_error("config: root must be an object");
    detail::reject_unknown(root, "root", {"model", "run", "ensemble", "analysis"});
    RunConfig cfg;

    // ---- model
    const json model = root.contains("model") ? root.at("model") : json::object();
    detail::reject_unknown(model, "model", {"eta", "alpha", "c", "sigma_rule", "particle"});
    if (!model.contains("c")) throw config_error("config: model.c is required");
    cfg.params.c = model.at("c").get<double>();
    cfg.params.eta = detail::get_or(model, "eta", 0.0);
    cfg.params.alpha = detail::get_or(model, "alpha", 0.0);

    const json sig = model.contains("sigma_rule") ? model.at("sigma_rule") : json::object();
    detail::reject_unknown(sig, "model.sigma_rule", {"type", "value"});
    const std::string sig_type = detail::get_or<std::string>(sig, "type", "default");
    if (sig_type == "default") {
        // e^sigma = 1 + c^{1/2 - 0.1}: the standing regularization unless overridden
        cfg.params.sigma_rule = SigmaRule::Fixed;
        cfg.params.sigma_value = std::log1p(std::pow(cfg.params.c, 0.4));
    } else if (sig_type == "fixed") {
        cfg.params.sigma_rule = SigmaRule::Fixed;
        cfg.params.sigma_value = sig.at("value").get<double>();
    } else if (sig_type == "power_of_c") {
        cfg.params.sigma_rule = SigmaRule::PowerOfC;
        cfg.params.sigma_value = sig.at("value").get<double>();
    } else {
        throw config_error("config: sigma_rule.type must be default|fixed|power_of_c");
    }

    const json part = model.contains("particle") ? model.at("particle") : json::object();
    detail::reject_unknown(part, "model.particle", {"type", "gamma"});
    const std::string ptype = detail::get_or<std::string>(part, "type", "slit");
    if (ptype == "slit") {
        cfg.params.particle_kind = ParticleKind::Slit;
    } else if (ptype == "spreadout") {
        cfg.params.particle_kind = ParticleKind::SpreadOut;
        if (!part.contains("gamma")) throw config_error("config: spreadout particle needs gamma");
        const json g = part.at("gamma");
        if (g.is_number())
            cfg.params.particle_gamma = cplx(g.get<double>(), 0.0);
        else if (g.is_array() && g.size() == 2)
            cfg.params.particle_gamma = cplx(g.at(0).get<double>(), g.at(1).get<double>());
        else
            throw config_error("config: gamma must be a number or [re, im]");
    } else {
        throw config_error("config: particle.type must be slit|spreadout");
    }

    // ---- run
    const json run = root.contains("run") ? root.at("run") : json::object();
    detail::reject_unknown(run, "run", {"T", "snapshots", "seed"});
    cfg.params.T = detail::get_or(run, "T", 1.0);
    cfg.snapshots = detail::get_or(run, "snapshots", 32);
    if (cfg.snapshots < 1) throw config_error("config: run.snapshots must be >= 1");
    cfg.seed = detail::get_or<std::uint64_t>(run, "seed", 1);

    // ---- ensemble
    const json ens = root.contains("ensemble") ? root.at("ensemble") : json::object();
    detail::reject_unknown(ens, "ensemble", {"size", "parallelism"});
    cfg.ensemble_size = detail::get_or<std::size_t>(ens, "size", 1);
    if (cfg.ensemble_size < 1) throw config_error("config: ensemble.size must be >= 1");
    cfg.parallelism = detail::get_or<unsigned>(ens, "parallelism", 1);

    // ---- analysis
    const json ana = root.contains("analysis") ? root.at("analysis") : json::object();
    detail::reject_unknown(ana, "analysis", {"K", "radii", "times", "ou_reference"});
    cfg.K = detail::get_or(ana, "K", 64);
    if (cfg.K < 1) throw config_error("config: analysis.K must be >= 1");
    cfg.radii = detail::get_or(ana, "radii", std::vector<double>{});
    cfg.times = detail::get_or(ana, "times", std::vector<double>{});
    cfg.ou_reference = detail::get_or(ana, "ou_reference", true);

    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config: ") + e.what());
    }

    // ---- canonical resolved form (nlohmann objects serialize key-sorted)
    cfg.resolved = {
        {"model",
         {{"eta", cfg.params.eta},
          {"alpha", cfg.params.alpha},
          {"c", cfg.params.c},
          {"sigma_rule",
           {{"type", cfg.params.sigma_rule == SigmaRule::Fixed ? "fixed" : "power_of_c"},
            {"value", cfg.params.sigma_value}}},
          {"particle",
           {{"type", cfg.params.particle_kind == ParticleKind::Slit ? "slit" : "spreadout"},
            {"gamma", {cfg.params.particle_gamma.real(), cfg.params.particle_gamma.imag()}}}}}},
        {"run", {{"T", cfg.params.T}, {"snapshots", cfg.snapshots}, {"seed", cfg.seed}}},
        {"ensemble", {{"size", cfg.ensemble_size}, {"parallelism", cfg.parallelism}}},
        {"analysis",
         {{"K", cfg.K},
          {"radii", cfg.radii},
          {"times", cfg.times},
          {"ou_reference", cfg.ou_reference}}}};
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw config_error(std::string("config: JSON parse failure: ") + e.what());
    }
    return parse_config(root);
}

inline std::uint64_t config_hash(const RunConfig& cfg) { return fnv1a64(cfg.resolved.dump()); }

} // namespace ale
