#pragma once

#include <cmath>
#include <limits>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliffordt/entanglement.hpp"
#include "cliffordt/errors.hpp"

namespace cliffordt {

enum class Phase { Heating, Cooling };

inline std::string_view to_string(Phase p) { return p == Phase::Heating ? "heating" : "cooling"; }

/// Average bipartition entropy recorded after each gate of one circuit.
struct EntropySeries {
    std::vector<double> values;
    Phase phase = Phase::Heating;
    LogBase base = LogBase::Two;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double back() const { return values.back(); }
};

/// Population variance of a cooling-phase series around its temporal mean.
inline double temporal_variance(const EntropySeries& series) {
    if (series.phase != Phase::Cooling) {
        throw UsageError("temporal variance is defined on cooling-phase data only");
    }
    if (series.values.size() < 2) throw InsufficientData("temporal variance needs at least 2 samples");
    const auto n = static_cast<double>(series.values.size());
    const double mean = std::accumulate(series.values.begin(), series.values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : series.values) ss += (v - mean) * (v - mean);
    return ss / n;
}

/// Mean and standard error of the mean.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

inline SampleStats sample_stats(std::span<const double> xs) {
    SampleStats s;
    s.count = xs.size();
    if (xs.empty()) return s;
    const auto n = static_cast<double>(xs.size());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

/// Hilbert-space dimension 2^N as a double.
inline double hilbert_dim(int n_qubits) { return std::ldexp(1.0, n_qubits); }

// Empirical scaling laws. These are reference formulas; nothing here
// re-fits their constants.

struct FitValue {
    double value = 0.0;
    /// False when evaluated outside the range the formula was fitted on.
    bool within_validity = true;
};

/// Universal limit of the ESS divergence, 24 / d^0.6 + 0.16.
inline double dkl_universal(int n_qubits) { return 24.0 / std::pow(hilbert_dim(n_qubits), 0.6) + 0.16; }

/// Excess divergence 24 d^(1.25 (1 - n_T / N)).
inline double dkl_excess(double n_t, int n_qubits) {
    return 24.0 * std::pow(hilbert_dim(n_qubits), 1.25 * (1.0 - n_t / n_qubits));
}

/// 24 [d^(1.25 (1 - n_T/N)) + d^-0.6] + 0.16, fitted for n_T >= N.
inline FitValue dkl_fit(double n_t, int n_qubits) {
    return {dkl_excess(n_t, n_qubits) + dkl_universal(n_qubits), n_t >= n_qubits};
}

/// Universal fluctuation floor 0.2 / d^1.25.
inline double var_universal(int n_qubits) { return 0.2 / std::pow(hilbert_dim(n_qubits), 1.25); }

inline double var_excess(double n_t, int n_qubits) {
    return 0.1 / std::pow(hilbert_dim(n_qubits), 0.2) * std::exp(-n_t / 3.15);
}

/// (0.1 / d^0.2) exp(-n_T / 3.15) + 0.2 / d^1.25
inline double var_fit(double n_t, int n_qubits) {
    if (n_t < 0) throw UsageError("n_T must be >= 0");
    return var_excess(n_t, n_qubits) + var_universal(n_qubits);
}

/// gamma = 4 ln(d + 560) - 109/3 (natural log).
inline double reversibility_gamma(int n_qubits) {
    return 4.0 * std::log(hilbert_dim(n_qubits) + 560.0) - 109.0 / 3.0;
}

/// gamma / (3.36 gamma^1.04 + exp(e sqrt(n_T)) 1e-3 + 1.78) + 0.2 / d^1.25.
/// NaN below N = 14, where gamma <= 0 and gamma^1.04 is undefined.
inline double reversibility_fit(double n_t, int n_qubits) {
    if (n_t < 0) throw UsageError("n_T must be >= 0");
    const double g = reversibility_gamma(n_qubits);
    if (!(g > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double denom = 3.36 * std::pow(g, 1.04) + std::exp(std::numbers::e * std::sqrt(n_t)) * 1e-3 + 1.78;
    return g / denom + var_universal(n_qubits);
}

enum class DopingKind { ESS, Variance, Reversibility };

inline std::string_view to_string(DopingKind k) {
    switch (k) {
        case DopingKind::ESS: return "ess";
        case DopingKind::Variance: return "variance";
        case DopingKind::Reversibility: return "reversibility";
    }
    return "?";
}

/// Published minimum-doping lines: N + 2, 2.29 N - 5/3, 0.7 (2.29 N - 5/3)^1.4.
inline double min_doping(DopingKind kind, int n_qubits) {
    if (n_qubits < 1) throw UsageError("N must be >= 1");
    const double n = n_qubits;
    const double var_line = 2.29 * n - 5.0 / 3.0;
    switch (kind) {
        case DopingKind::ESS: return n + 2.0;
        case DopingKind::Variance: return var_line;
        case DopingKind::Reversibility: return 0.7 * std::pow(var_line, 1.4);
    }
    return 0.0;
}

/// Smallest integer n_T for which the fit's excess term drops below its
/// universal term.
inline int solve_min_doping_from_fit(DopingKind kind, int n_qubits, int max_n_t = 100000) {
    if (kind == DopingKind::Reversibility) {
        throw UsageError("no closed inequality for the reversibility fit; use min_doping");
    }
    for (int n_t = 0; n_t <= max_n_t; ++n_t) {
        const bool below = kind == DopingKind::ESS ? dkl_excess(n_t, n_qubits) < dkl_universal(n_qubits)
                                                   : var_excess(n_t, n_qubits) < var_universal(n_qubits);
        if (below) return n_t;
    }
    throw UsageError("minimum doping exceeds search bound");
}

/// Least-squares slope of log(min_doping) against log N over integer N in [lo, hi].
inline double growth_order_slope(DopingKind kind, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi <= n_lo) throw UsageError("growth slope needs 1 <= lo < hi");
    std::vector<double> xs;
    std::vector<double> ys;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double v = min_doping(kind, n);
        if (v <= 0.0) continue;
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(v));
    }
    const auto m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

/// Outcome of one realization at a parameter point.
struct RealizationRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double heated_entropy = 0.0;
    double final_entropy = 0.0;
    double temporal_var = 0.0;
    std::size_t accepted = 0;
    std::size_t proposed = 0;
    bool reached_zero = false;
    bool cap_exhausted = false;

    friend bool operator==(const RealizationRecord&, const RealizationRecord&) = default;
};

/// Aggregates over realizations at one (N, n_T) point.
struct EnsembleResult {
    int n_qubits = 0;
    int n_t = 0;
    std::uint64_t seed_base = 0;
    std::vector<RealizationRecord> records;

    SampleStats variance;
    SampleStats final_entropy;
    double success_fraction = 0.0;
    double success_std_error = 0.0;

    std::size_t realization_count() const { return records.size(); }

    /// Rebuild aggregates from `records`.
    void recompute() {
        std::vector<double> vars;
        std::vector<double> finals;
        std::vector<double> successes;
        for (const auto& r : records) {
            vars.push_back(r.temporal_var);
            finals.push_back(r.final_entropy);
            successes.push_back(r.reached_zero ? 1.0 : 0.0);
        }
        variance = sample_stats(vars);
        final_entropy = sample_stats(finals);
        const auto s = sample_stats(successes);
        success_fraction = s.mean;
        success_std_error = s.std_error;
    }
};

}  // namespace cliffordt
