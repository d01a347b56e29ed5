#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cliffordt/analysis.hpp"
#include "cliffordt/circuits.hpp"
#include "cliffordt/colormap.hpp"
#include "cliffordt/cooling.hpp"
#include "cliffordt/entanglement.hpp"
#include "cliffordt/ess.hpp"
#include "cliffordt/harness/config.hpp"
#include "cliffordt/harness/parallel.hpp"
#include "cliffordt/rng.hpp"
#include "cliffordt/statevector.hpp"

namespace cliffordt::harness {

/// One (N, family, n_T) parameter point.
struct Point {
    int n_qubits = 8;
    CircuitFamily family = CircuitFamily::Clifford;
    int n_t = 0;

    bool universal() const { return family == CircuitFamily::Universal; }
    std::string tag() const { return universal() ? "universal" : "nT" + std::to_string(n_t); }

    static Point doped(int n, int n_t) {
        return {n, n_t == 0 ? CircuitFamily::Clifford : CircuitFamily::DopedCliffordT, n_t};
    }
    static Point universal_at(int n) { return {n, CircuitFamily::Universal, 0}; }
};

/// Every point of a config, N-major, universal last.
inline std::vector<Point> points_of(const ExperimentConfig& cfg) {
    std::vector<Point> out;
    for (int n : cfg.n_qubits) {
        for (int t : cfg.n_t) out.push_back(Point::doped(n, t));
        if (cfg.universal) out.push_back(Point::universal_at(n));
    }
    return out;
}

enum class Stream : std::uint64_t { HeatCircuit = 1, Cooling = 2, Fluctuation = 3, Render = 4 };

inline std::uint64_t realization_seed(const ExperimentConfig& cfg, const Point& p, Stream stream, std::size_t i) {
    return child_seed(cfg.seed_base, {static_cast<std::uint64_t>(stream), static_cast<std::uint64_t>(p.n_qubits),
                                      p.universal() ? 1ULL : 0ULL, static_cast<std::uint64_t>(p.n_t), i});
}

inline Circuit heating_circuit(const ExperimentConfig& cfg, const Point& p, std::size_t i) {
    CircuitSpec spec;
    spec.n_qubits = p.n_qubits;
    spec.n_t = p.n_t;
    spec.block_size = static_cast<int>(cfg.block_for(p.n_qubits));
    spec.family = p.family;
    spec.seed = realization_seed(cfg, p, Stream::HeatCircuit, i);
    return make_circuit(spec);
}

inline StateVector heated_state(const ExperimentConfig& cfg, const Point& p, std::size_t i) {
    StateVector s(p.n_qubits);
    apply_circuit(s, heating_circuit(cfg, p, i));
    return s;
}

// heat

struct HeatRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t gate_count = 0;
    EntropySeries series;
    double final_entropy = 0.0;
    double max_entropy = 0.0;
    EntanglementSpectrum half_cut_spectrum;
};

struct HeatPoint {
    Point point;
    std::vector<HeatRecord> records;
};

/// Heat one realization, recording the average entropy every stride gates
/// (and after the last gate).
inline HeatRecord heat_realization(const ExperimentConfig& cfg, const Point& p, std::size_t i) {
    HeatRecord rec;
    rec.index = i;
    rec.seed = realization_seed(cfg, p, Stream::HeatCircuit, i);
    const Circuit circuit = heating_circuit(cfg, p, i);
    rec.gate_count = circuit.size();
    rec.series.phase = Phase::Heating;
    rec.series.base = cfg.log_base;
    rec.series.values.reserve(circuit.size() / cfg.observe_stride + 1);

    StateVector state(p.n_qubits);
    EntropyTracker tracker(state, cfg.log_base);
    apply_circuit(state, circuit, [&](std::size_t k, const StateVector& s) {
        tracker.update(s, circuit.gates[k]);
        if ((k + 1) % cfg.observe_stride == 0 || k + 1 == circuit.size()) {
            rec.series.values.push_back(tracker.average());
        }
    });
    rec.final_entropy = tracker.average();
    rec.max_entropy = 0.0;
    for (double v : rec.series.values) rec.max_entropy = std::max(rec.max_entropy, v);
    rec.half_cut_spectrum = schmidt_spectrum(state, {p.n_qubits / 2});
    return rec;
}

inline HeatPoint heat_point(const ExperimentConfig& cfg, const Point& p) {
    HeatPoint out{p, {}};
    out.records = parallel_map(cfg.realizations, cfg.parallelism,
                               [&](std::size_t i) { return heat_realization(cfg, p, i); });
    return out;
}

inline std::vector<HeatPoint> run_heat(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<HeatPoint> out;
    for (const auto& p : points_of(cfg)) out.push_back(heat_point(cfg, p));
    return out;
}

// ess

struct EssRealization {
    std::uint64_t seed = 0;
    std::size_t ratio_count = 0;
    std::size_t degenerate_count = 0;
    std::optional<double> d_kl;
};

struct EssPoint {
    Point point;
    SpacingRatios pooled;
    std::vector<EssRealization> realizations;
    /// Absent when no spacing ratio survived (fully degenerate spectra).
    std::optional<RatioHistogram> histogram;
    std::optional<KlResult> d_kl;
};

/// Spacing ratios of the half-cut spectrum of a heated state.
inline SpacingRatios ess_ratios(const ExperimentConfig& cfg, const Point& p, std::size_t i) {
    const StateVector s = heated_state(cfg, p, i);
    return spacing_ratios(schmidt_spectrum(s, {p.n_qubits / 2}), cfg.ess.rank_cutoff);
}

inline bool usable(const RatioHistogram& h, TailHandling tail) {
    return h.sample_count > 0 && (tail == TailHandling::OverflowBin || h.in_range_count > 0);
}

inline EssPoint ess_point(const ExperimentConfig& cfg, const Point& p) {
    const auto edges = uniform_edges(cfg.ess.bins, cfg.ess.r_max);
    auto per = parallel_map(cfg.realizations, cfg.parallelism,
                            [&](std::size_t i) { return ess_ratios(cfg, p, i); });
    EssPoint out{p, {}, {}, std::nullopt, std::nullopt};
    for (std::size_t i = 0; i < per.size(); ++i) {
        EssRealization r;
        r.seed = realization_seed(cfg, p, Stream::HeatCircuit, i);
        r.ratio_count = per[i].values.size();
        r.degenerate_count = per[i].degenerate_count;
        if (per[i].values.empty() && per[i].degenerate_count > 0) {
            r.d_kl = std::numeric_limits<double>::infinity();
        } else if (!per[i].values.empty()) {
            const auto h = empirical_distribution(per[i].values, edges);
            if (usable(h, cfg.ess.tail)) r.d_kl = kl_divergence(h, gue_pdf, cfg.ess.tail).value;
        }
        out.realizations.push_back(r);
        out.pooled.append(per[i]);
    }
    if (!out.pooled.values.empty()) {
        out.histogram = empirical_distribution(out.pooled.values, edges);
        if (usable(*out.histogram, cfg.ess.tail)) out.d_kl = kl_divergence(*out.histogram, gue_pdf, cfg.ess.tail);
    } else if (out.pooled.degenerate_count > 0) {
        out.d_kl = KlResult{std::numeric_limits<double>::infinity(),
                            "no spacing ratios; " + std::to_string(out.pooled.degenerate_count) + " degenerate gaps"};
    }
    return out;
}

inline std::vector<EssPoint> run_ess(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<EssPoint> out;
    for (const auto& p : points_of(cfg)) out.push_back(ess_point(cfg, p));
    return out;
}

// fluct

/// Infinite-temperature Clifford evolution after heating; the record's
/// temporal_var is the variance of the post-heating series.
inline RealizationRecord fluct_realization(const ExperimentConfig& cfg, const Point& p, std::size_t i) {
    StateVector s = heated_state(cfg, p, i);
    CoolingConfig hot;
    hot.beta = 0.0;
    hot.accepted_budget = cfg.fluct_gates_for(p.n_qubits);
    hot.proposal_cap = hot.accepted_budget;
    hot.proposal_set = GateSet::Clifford;
    hot.zero_threshold = -1.0;  // never stop early
    hot.log_base = cfg.log_base;
    RandomEngine rng(realization_seed(cfg, p, Stream::Fluctuation, i));
    const auto res = run_cooling(s, hot, rng);

    RealizationRecord r;
    r.index = i;
    r.seed = realization_seed(cfg, p, Stream::HeatCircuit, i);
    r.heated_entropy = res.initial_entropy;
    r.final_entropy = res.final_entropy;
    r.temporal_var = temporal_variance(res.entropy_series);
    r.accepted = res.accepted;
    r.proposed = res.proposed;
    return r;
}

inline EnsembleResult fluct_point(const ExperimentConfig& cfg, const Point& p) {
    EnsembleResult e;
    e.n_qubits = p.n_qubits;
    e.n_t = p.n_t;
    e.seed_base = cfg.seed_base;
    e.records = parallel_map(cfg.realizations, cfg.parallelism,
                             [&](std::size_t i) { return fluct_realization(cfg, p, i); });
    e.recompute();
    return e;
}

struct FluctRow {
    Point point;
    EnsembleResult ensemble;
    double var_fit = 0.0;
};

inline std::vector<FluctRow> run_fluct(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<FluctRow> out;
    for (const auto& p : points_of(cfg)) {
        const double fit = p.universal() ? var_universal(p.n_qubits) : var_fit(p.n_t, p.n_qubits);
        out.push_back({p, fluct_point(cfg, p), fit});
    }
    return out;
}

// cool

struct CoolRealization {
    RealizationRecord record;
    std::vector<double> series;
};

inline CoolRealization cool_realization(const ExperimentConfig& cfg, const Point& p, std::size_t i) {
    StateVector s = heated_state(cfg, p, i);
    CoolingConfig cc = cfg.cooling;
    cc.log_base = cfg.log_base;
    RandomEngine rng(realization_seed(cfg, p, Stream::Cooling, i));
    auto res = run_cooling(s, cc, rng);

    CoolRealization out;
    auto& r = out.record;
    r.index = i;
    r.seed = realization_seed(cfg, p, Stream::HeatCircuit, i);
    r.heated_entropy = res.initial_entropy;
    r.final_entropy = res.final_entropy;
    r.accepted = res.accepted;
    r.proposed = res.proposed;
    r.reached_zero = res.reached_zero;
    r.cap_exhausted = res.cap_exhausted;
    out.series = std::move(res.entropy_series.values);
    return out;
}

struct CoolPoint {
    Point point;
    EnsembleResult ensemble;
    /// Mean cooling series over realizations, truncated to the shortest.
    std::vector<double> mean_series;
    std::size_t cap_hits = 0;
    double mean_proposed = 0.0;
};

inline CoolPoint cool_point(const ExperimentConfig& cfg, const Point& p) {
    auto runs = parallel_map(cfg.realizations, cfg.parallelism,
                             [&](std::size_t i) { return cool_realization(cfg, p, i); });
    CoolPoint out;
    out.point = p;
    out.ensemble.n_qubits = p.n_qubits;
    out.ensemble.n_t = p.n_t;
    out.ensemble.seed_base = cfg.seed_base;
    std::size_t len = runs.empty() ? 0 : runs.front().series.size();
    for (const auto& r : runs) len = std::min(len, r.series.size());
    out.mean_series.assign(len, 0.0);
    for (const auto& r : runs) {
        out.ensemble.records.push_back(r.record);
        for (std::size_t k = 0; k < len; ++k) out.mean_series[k] += r.series[k] / static_cast<double>(runs.size());
        out.cap_hits += r.record.cap_exhausted ? 1 : 0;
        out.mean_proposed += static_cast<double>(r.record.proposed) / static_cast<double>(runs.size());
    }
    out.ensemble.recompute();
    return out;
}

inline std::vector<double> final_entropies(const EnsembleResult& e) {
    std::vector<double> f;
    for (const auto& r : e.records) f.push_back(r.final_entropy);
    return f;
}

// render

/// Grids after the first Clifford block, after the T layer, and after the
/// second Clifford block.
inline std::array<AmplitudeGrid, 3> render_stages(int n_qubits, int n_t, std::size_t block, std::uint64_t seed) {
    if (n_qubits % 2 != 0) throw UsageError("render needs an even qubit count, got " + std::to_string(n_qubits));
    RandomEngine rng(seed);
    StateVector s(n_qubits);
    std::array<AmplitudeGrid, 3> out;
    apply_circuit(s, random_clifford_block(n_qubits, block, rng));
    out[0] = amplitude_grid(s);
    for (int k = 0; k < n_t; ++k) {
        apply_gate(s, Gate::t(static_cast<std::uint32_t>(uniform_index(rng, static_cast<std::uint64_t>(n_qubits)))));
    }
    out[1] = amplitude_grid(s);
    apply_circuit(s, random_clifford_block(n_qubits, block, rng));
    out[2] = amplitude_grid(s);
    return out;
}

// fits

struct FitsRow {
    int n_qubits = 0;
    double dkl_universal = 0.0;
    double var_universal = 0.0;
    double min_ess = 0.0;
    int min_ess_solved = 0;
    double min_var = 0.0;
    int min_var_solved = 0;
    double min_rev = 0.0;
    double reversibility_fit_at_min_v = 0.0;
};

inline std::vector<FitsRow> fits_table(int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw ConfigError("fits: need 1 <= N_lo <= N_hi");
    std::vector<FitsRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        FitsRow r;
        r.n_qubits = n;
        r.dkl_universal = dkl_universal(n);
        r.var_universal = var_universal(n);
        r.min_ess = min_doping(DopingKind::ESS, n);
        r.min_ess_solved = solve_min_doping_from_fit(DopingKind::ESS, n);
        r.min_var = min_doping(DopingKind::Variance, n);
        r.min_var_solved = solve_min_doping_from_fit(DopingKind::Variance, n);
        r.min_rev = min_doping(DopingKind::Reversibility, n);
        r.reversibility_fit_at_min_v = reversibility_fit(std::max(0.0, r.min_var), n);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace cliffordt::harness
