#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cliffordt/circuits.hpp"
#include "cliffordt/colormap.hpp"
#include "cliffordt/cooling.hpp"
#include "cliffordt/entanglement.hpp"
#include "cliffordt/errors.hpp"
#include "cliffordt/ess.hpp"

namespace cliffordt::harness {

using json = nlohmann::json;

struct EssBinning {
    std::size_t bins = 50;
    double r_max = 4.0;
    double rank_cutoff = kDefaultRankCutoff;
    TailHandling tail = TailHandling::OverflowBin;
};

enum class BaselineMode { Compute, Load };

/// Everything an experiment run depends on. Serialized in full into every
/// run record.
struct ExperimentConfig {
    std::vector<int> n_qubits{8, 10, 12};
    std::vector<int> n_t{0};
    /// Also run a universal-circuit point for every N.
    bool universal = false;
    std::size_t realizations = 50;
    std::uint64_t seed_base = 1;
    /// Gates per Clifford block (and per universal circuit); 0 means 10 N^2.
    int block_size = 0;
    CoolingConfig cooling;
    /// Gates in the infinite-temperature fluctuation circuit; 0 means 10 N^2.
    std::size_t fluct_gates = 0;
    EssBinning ess;
    LogBase log_base = LogBase::Two;
    std::filesystem::path output_dir = "out";
    /// Worker threads; 0 means hardware concurrency.
    std::size_t parallelism = 1;
    /// Record the heating entropy after every stride-th gate.
    std::size_t observe_stride = 1;
    BaselineMode baseline_mode = BaselineMode::Compute;
    ImageScale render_scale = ImageScale::Linear;
    bool plot_scripts = false;

    std::size_t block_for(int n) const {
        return block_size > 0 ? static_cast<std::size_t>(block_size) : 10 * static_cast<std::size_t>(n) * n;
    }
    std::size_t fluct_gates_for(int n) const {
        return fluct_gates > 0 ? fluct_gates : 10 * static_cast<std::size_t>(n) * n;
    }

    /// Throws ConfigError naming the offending field.
    void validate() const {
        if (n_qubits.empty()) throw ConfigError("n_qubits: list must be non-empty");
        for (std::size_t i = 0; i < n_qubits.size(); ++i) {
            if (n_qubits[i] < 2 || n_qubits[i] > kMaxQubits) {
                throw ConfigError("n_qubits[" + std::to_string(i) + "]: must be in [2, 24]");
            }
        }
        if (n_t.empty() && !universal) throw ConfigError("n_t: list must be non-empty unless universal is set");
        for (std::size_t i = 0; i < n_t.size(); ++i) {
            if (n_t[i] < 0) throw ConfigError("n_t[" + std::to_string(i) + "]: must be >= 0");
        }
        if (realizations < 1) throw ConfigError("realizations: must be >= 1");
        if (block_size < 0) throw ConfigError("block_size: must be >= 0");
        if (observe_stride < 1) throw ConfigError("observe_stride: must be >= 1");
        if (ess.bins < 1) throw ConfigError("ess.bins: must be >= 1");
        if (!(ess.r_max > 0.0)) throw ConfigError("ess.r_max: must be > 0");
        if (!(ess.rank_cutoff >= 0.0)) throw ConfigError("ess.rank_cutoff: must be >= 0");
        if (!(cooling.beta >= 0.0)) throw ConfigError("cooling.beta: must be >= 0");
        for (int n : n_qubits) {
            try {
                cooling.validate(n);
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("cooling: ") + e.what());
            }
        }
    }
};

namespace detail {

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path + key + ": " + e.what());
    }
}

inline std::string read_enum(const json& j, const char* key, const std::string& fallback, const std::string& path) {
    std::string v = fallback;
    read_opt(j, key, v, path);
    return v;
}

}  // namespace detail

inline json to_json(const ExperimentConfig& c) {
    json cool = {
        {"beta", c.cooling.beta},
        {"accepted_budget", c.cooling.accepted_budget},
        {"accepted_budget_default", "40*N^2"},
        {"proposal_set", c.cooling.proposal_set == GateSet::Clifford ? "clifford" : "universal"},
        {"proposal_cap", c.cooling.proposal_cap},
        {"proposal_cap_default", "2000*N^2"},
        {"target_entropy", c.cooling.target_entropy},
        {"zero_threshold", c.cooling.zero_threshold},
        {"restore", c.cooling.restore == RestoreStrategy::InverseGate ? "inverse" : "snapshot"},
    };
    return json{
        {"n_qubits", c.n_qubits},
        {"n_t", c.n_t},
        {"universal", c.universal},
        {"realizations", c.realizations},
        {"seed_base", c.seed_base},
        {"block_size", c.block_size},
        {"block_size_default", "10*N^2"},
        {"cooling", cool},
        {"fluct_gates", c.fluct_gates},
        {"ess",
         {{"bins", c.ess.bins},
          {"r_max", c.ess.r_max},
          {"rank_cutoff", c.ess.rank_cutoff},
          {"tail", c.ess.tail == TailHandling::OverflowBin ? "overflow" : "exclude"}}},
        {"log_base", std::string(to_string(c.log_base))},
        {"output_dir", c.output_dir.string()},
        {"parallelism", c.parallelism},
        {"observe_stride", c.observe_stride},
        {"baseline_mode", c.baseline_mode == BaselineMode::Compute ? "compute" : "load"},
        {"render_scale", std::string(to_string(c.render_scale))},
        {"plot_scripts", c.plot_scripts},
        {"sampler", "gate kind uniform over the set, then placement uniform; CNOT over ordered distinct pairs"},
        {"bipartitions", "N-1 contiguous cuts, A = qubits 0..k-1"},
    };
}

inline ExperimentConfig config_from_json(const json& j) {
    using detail::read_opt;
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig c;
    read_opt(j, "n_qubits", c.n_qubits, "");
    read_opt(j, "n_t", c.n_t, "");
    read_opt(j, "universal", c.universal, "");
    read_opt(j, "realizations", c.realizations, "");
    read_opt(j, "seed_base", c.seed_base, "");
    read_opt(j, "block_size", c.block_size, "");
    read_opt(j, "fluct_gates", c.fluct_gates, "");
    read_opt(j, "parallelism", c.parallelism, "");
    read_opt(j, "observe_stride", c.observe_stride, "");
    read_opt(j, "plot_scripts", c.plot_scripts, "");
    std::string out_dir = c.output_dir.string();
    read_opt(j, "output_dir", out_dir, "");
    c.output_dir = out_dir;
    c.log_base = parse_log_base(detail::read_enum(j, "log_base", "2", ""));

    const auto baseline = detail::read_enum(j, "baseline_mode", "compute", "");
    if (baseline == "compute") {
        c.baseline_mode = BaselineMode::Compute;
    } else if (baseline == "load") {
        c.baseline_mode = BaselineMode::Load;
    } else {
        throw ConfigError("baseline_mode: expected \"compute\" or \"load\"");
    }
    const auto scale = detail::read_enum(j, "render_scale", "linear", "");
    if (scale == "linear") {
        c.render_scale = ImageScale::Linear;
    } else if (scale == "log") {
        c.render_scale = ImageScale::Log;
    } else {
        throw ConfigError("render_scale: expected \"linear\" or \"log\"");
    }

    if (j.contains("cooling")) {
        const auto& k = j.at("cooling");
        const std::string p = "cooling.";
        read_opt(k, "beta", c.cooling.beta, p);
        read_opt(k, "accepted_budget", c.cooling.accepted_budget, p);
        read_opt(k, "proposal_cap", c.cooling.proposal_cap, p);
        read_opt(k, "target_entropy", c.cooling.target_entropy, p);
        read_opt(k, "zero_threshold", c.cooling.zero_threshold, p);
        const auto set = detail::read_enum(k, "proposal_set", "clifford", p);
        if (set == "clifford") {
            c.cooling.proposal_set = GateSet::Clifford;
        } else if (set == "universal") {
            c.cooling.proposal_set = GateSet::Universal;
        } else {
            throw ConfigError("cooling.proposal_set: expected \"clifford\" or \"universal\"");
        }
        const auto restore = detail::read_enum(k, "restore", "inverse", p);
        if (restore == "inverse") {
            c.cooling.restore = RestoreStrategy::InverseGate;
        } else if (restore == "snapshot") {
            c.cooling.restore = RestoreStrategy::Snapshot;
        } else {
            throw ConfigError("cooling.restore: expected \"inverse\" or \"snapshot\"");
        }
    }
    if (j.contains("ess")) {
        const auto& e = j.at("ess");
        read_opt(e, "bins", c.ess.bins, "ess.");
        read_opt(e, "r_max", c.ess.r_max, "ess.");
        read_opt(e, "rank_cutoff", c.ess.rank_cutoff, "ess.");
        const auto tail = detail::read_enum(e, "tail", "overflow", "ess.");
        if (tail == "overflow") {
            c.ess.tail = TailHandling::OverflowBin;
        } else if (tail == "exclude") {
            c.ess.tail = TailHandling::Exclude;
        } else {
            throw ConfigError("ess.tail: expected \"overflow\" or \"exclude\"");
        }
    }
    c.cooling.log_base = c.log_base;
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace cliffordt::harness
