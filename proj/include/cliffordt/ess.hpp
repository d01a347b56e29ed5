#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cliffordt/entanglement.hpp"
#include "cliffordt/errors.hpp"

namespace cliffordt {

inline constexpr double kDefaultRankCutoff = 1e-12;
inline constexpr double kDegeneracyTolerance = 1e-12;

/// Adjacent-gap ratios of an entanglement spectrum.
struct SpacingRatios {
    std::vector<double> values;
    /// Adjacent retained eigenvalue pairs whose gap is below tolerance.
    std::size_t degenerate_count = 0;

    void append(const SpacingRatios& other) {
        values.insert(values.end(), other.values.begin(), other.values.end());
        degenerate_count += other.degenerate_count;
    }
};

/// r_k = (p_{k-1} - p_k) / (p_k - p_{k+1}) over the descending spectrum.
///
/// Eigenvalues below `rank_cutoff * p_max` are dropped. Levels closer than
/// 1e-12 * p_max are merged into one level of multiplicity m, and the ratio
/// centred on that level is emitted m times. Merged gaps are counted in
/// `degenerate_count`.
inline SpacingRatios spacing_ratios(const EntanglementSpectrum& spec, double rank_cutoff = kDefaultRankCutoff) {
    SpacingRatios out;
    const auto& p = spec.probabilities;
    if (p.empty() || !(p.front() > 0.0)) return out;
    const double p_max = p.front();
    const double keep = rank_cutoff * p_max;
    const double tol = kDegeneracyTolerance * p_max;

    std::vector<double> levels;
    std::vector<std::size_t> mult;
    std::size_t retained = 0;
    for (double x : p) {
        if (x < keep) break;
        ++retained;
        if (!levels.empty() && levels.back() - x < tol) {
            ++mult.back();
            ++out.degenerate_count;
        } else {
            levels.push_back(x);
            mult.push_back(1);
        }
    }
    if (retained < 3) return out;

    for (std::size_t j = 1; j + 1 < levels.size(); ++j) {
        const double num = levels[j - 1] - levels[j];
        const double den = levels[j] - levels[j + 1];
        if (den < tol) {
            ++out.degenerate_count;
            continue;
        }
        out.values.insert(out.values.end(), mult[j], num / den);
    }
    return out;
}

/// Normalization constant of the ratio surmise for beta in {1, 2, 4}.
inline double wigner_dyson_z(int beta) {
    switch (beta) {
        case 1: return 8.0 / 27.0;
        case 2: return 4.0 * std::numbers::pi / (81.0 * std::numbers::sqrt3);
        case 4: return 4.0 * std::numbers::pi / (729.0 * std::numbers::sqrt3);
        default: throw ConfigError("Wigner-Dyson beta must be 1, 2 or 4, got " + std::to_string(beta));
    }
}

/// (r + r^2)^beta / [Z (1 + r + r^2)^(1 + 3 beta / 2)]
inline double wigner_dyson_pdf(double r, int beta = 2) {
    const double z = wigner_dyson_z(beta);
    if (r < 0.0) throw UsageError("spacing ratio must be >= 0");
    const double b = static_cast<double>(beta);
    return std::pow(r + r * r, b) / (z * std::pow(1.0 + r + r * r, 1.0 + 1.5 * b));
}

inline double gue_pdf(double r) { return wigner_dyson_pdf(r, 2); }

struct RatioHistogram {
    std::vector<double> bin_edges;
    std::vector<double> densities;
    std::size_t sample_count = 0;
    std::size_t in_range_count = 0;

    std::size_t bins() const { return densities.size(); }
    double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }

    /// Mass of bin i (density * width).
    double mass(std::size_t i) const { return densities[i] * width(i); }

    double in_range_mass() const {
        double m = 0.0;
        for (std::size_t i = 0; i < bins(); ++i) m += mass(i);
        return m;
    }

    /// Mass above the last edge: 1 - sum of bin masses.
    double out_of_range_fraction() const { return std::max(0.0, 1.0 - in_range_mass()); }
};

inline std::vector<double> uniform_edges(std::size_t bins, double r_max) {
    if (bins == 0 || !(r_max > 0.0)) throw ConfigError("histogram needs >= 1 bin and r_max > 0");
    std::vector<double> e(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) e[i] = r_max * static_cast<double>(i) / static_cast<double>(bins);
    return e;
}

/// Density-normalized histogram: sum of density * width is the in-range
/// fraction of samples. Bins are [lo, hi) except the last, which is closed.
inline RatioHistogram empirical_distribution(std::span<const double> samples, std::span<const double> edges) {
    if (samples.empty()) throw InsufficientData("empirical distribution needs at least one spacing ratio");
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
        throw ConfigError("bin edges must be ascending with at least two entries");
    }
    RatioHistogram h;
    h.bin_edges.assign(edges.begin(), edges.end());
    const std::size_t nb = edges.size() - 1;
    std::vector<std::size_t> counts(nb, 0);
    for (double r : samples) {
        if (r < edges.front() || r > edges.back() || std::isnan(r)) continue;
        auto it = std::upper_bound(edges.begin(), edges.end(), r);
        std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
        if (bin >= nb) bin = nb - 1;
        ++counts[bin];
        ++h.in_range_count;
    }
    h.sample_count = samples.size();
    h.densities.resize(nb);
    const auto total = static_cast<double>(h.sample_count);
    for (std::size_t i = 0; i < nb; ++i) h.densities[i] = static_cast<double>(counts[i]) / (total * h.width(i));
    return h;
}

/// Reference mass per bin plus the mass above the last edge.
struct ReferenceBins {
    std::vector<double> in_range;
    double tail = 0.0;
};

template <typename Pdf>
ReferenceBins reference_bins(Pdf&& pdf, std::span<const double> edges) {
    using boost::math::quadrature::gauss_kronrod;
    ReferenceBins out;
    out.in_range.resize(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        out.in_range[i] = gauss_kronrod<double, 31>::integrate(pdf, edges[i], edges[i + 1], 10, 1e-13);
    }
    // Tail over [r_max, inf) with r = r_max / u.
    const double r_max = edges.back();
    auto tail_integrand = [&](double u) { return u > 0.0 ? pdf(r_max / u) * r_max / (u * u) : 0.0; };
    out.tail = gauss_kronrod<double, 31>::integrate(tail_integrand, 0.0, 1.0, 10, 1e-13);
    return out;
}

/// Probability of each bin under `pdf`, renormalized to the in-range mass.
template <typename Pdf>
std::vector<double> reference_bin_probabilities(Pdf&& pdf, std::span<const double> edges) {
    auto q = reference_bins(std::forward<Pdf>(pdf), edges).in_range;
    double total = 0.0;
    for (double x : q) total += x;
    if (!(total > 0.0)) throw UsageError("reference distribution has no mass on the histogram support");
    for (auto& x : q) x /= total;
    return q;
}

struct KlResult {
    double value = 0.0;
    /// Empty unless the divergence is infinite.
    std::string diagnostic;

    bool finite() const { return std::isfinite(value); }
};

/// sum_i P_i ln(P_i / Q_i) over bins with P_i > 0.
inline KlResult kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw UsageError("KL divergence needs distributions over the same bins");
    KlResult out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) continue;
        if (!(q[i] > 0.0)) {
            out.value = std::numeric_limits<double>::infinity();
            out.diagnostic = "reference has zero mass in bin " + std::to_string(i) + " where P = " +
                             std::to_string(p[i]);
            return out;
        }
        out.value += p[i] * std::log(p[i] / q[i]);
    }
    // Rounding can leave the identity case a hair below zero.
    if (out.value < 0.0 && out.value > -1e-12) out.value = 0.0;
    return out;
}

/// What happens to probability mass above the last bin edge.
enum class TailHandling {
    /// One extra bin [r_max, inf) in both P and Q.
    OverflowBin,
    /// Dropped from both P and Q, each renormalized to its in-range mass.
    Exclude,
};

/// KL divergence of a histogram from a reference density.
template <typename Pdf>
KlResult kl_divergence(const RatioHistogram& hist, Pdf&& reference, TailHandling tail = TailHandling::OverflowBin) {
    const auto ref = reference_bins(std::forward<Pdf>(reference), hist.bin_edges);
    std::vector<double> p(hist.bins());
    std::vector<double> q = ref.in_range;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = hist.mass(i);
    if (tail == TailHandling::OverflowBin) {
        p.push_back(hist.out_of_range_fraction());
        q.push_back(ref.tail);
    }
    double p_total = 0.0;
    double q_total = 0.0;
    for (double x : p) p_total += x;
    for (double x : q) q_total += x;
    if (!(p_total > 0.0)) throw InsufficientData("histogram has no mass to compare");
    if (!(q_total > 0.0)) throw UsageError("reference distribution has no mass on the histogram support");
    for (auto& x : p) x /= p_total;
    for (auto& x : q) x /= q_total;
    return kl_divergence(p, q);
}

}  // namespace cliffordt
