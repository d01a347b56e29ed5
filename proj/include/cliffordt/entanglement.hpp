#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliffordt/errors.hpp"
#include "cliffordt/statevector.hpp"

namespace cliffordt {

enum class LogBase { Two, E };

inline std::string_view to_string(LogBase b) { return b == LogBase::Two ? "2" : "e"; }
inline std::string_view entropy_unit(LogBase b) { return b == LogBase::Two ? "bits" : "nats"; }

inline LogBase parse_log_base(std::string_view s) {
    if (s == "2") return LogBase::Two;
    if (s == "e") return LogBase::E;
    throw ConfigError("log base must be \"2\" or \"e\", got \"" + std::string(s) + "\"");
}

/// Contiguous cut: subsystem A holds qubits 0..cut-1, B the rest.
struct Bipartition {
    int cut = 1;

    void check(int n_qubits) const {
        if (cut < 1 || cut > n_qubits - 1) {
            throw UsageError("bipartition cut " + std::to_string(cut) + " outside [1, " +
                             std::to_string(n_qubits - 1) + "]");
        }
    }
};

/// Reduced density matrix eigenvalues, non-increasing.
struct EntanglementSpectrum {
    std::vector<double> probabilities;

    std::size_t size() const { return probabilities.size(); }
    double sum() const { return std::accumulate(probabilities.begin(), probabilities.end(), 0.0); }
};

inline constexpr double kSpectrumClamp = 1e-12;
inline constexpr double kEntropyEpsilon = 1e-15;

namespace detail {

using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXcd>;

// Column-major d_A x d_B view: entry (a, b) is amplitude a + d_A * b.
inline ConstMatrixMap reshape(const StateVector& state, int cut) {
    const Eigen::Index d_a = Eigen::Index{1} << cut;
    const Eigen::Index d_b = Eigen::Index{1} << (state.n_qubits() - cut);
    return ConstMatrixMap(state.amplitudes().data(), d_a, d_b);
}

inline std::vector<double> finish_spectrum(std::vector<double> p) {
    for (auto& x : p) {
        if (x < 0.0 && x >= -kSpectrumClamp) x = 0.0;
    }
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

}  // namespace detail

/// Squared singular values of the d_A x d_B reshape, descending.
inline EntanglementSpectrum schmidt_spectrum(const StateVector& state, Bipartition cut) {
    cut.check(state.n_qubits());
    const auto m = detail::reshape(state, cut.cut);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    std::vector<double> p(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) p[static_cast<std::size_t>(i)] = sv[i] * sv[i];
    return {detail::finish_spectrum(std::move(p))};
}

/// -sum p log p over entries above 1e-15.
inline double von_neumann_entropy(const EntanglementSpectrum& spec, LogBase base = LogBase::Two) {
    double s = 0.0;
    for (double p : spec.probabilities) {
        if (p > kEntropyEpsilon) s -= p * std::log(p);
    }
    if (base == LogBase::Two) s /= std::log(2.0);
    return s > 0.0 ? s : 0.0;
}

/// Entropy of one cut computed from the eigenvalues of the smaller reduced
/// density matrix. Used on the per-gate hot path, where only the entropy is
/// needed and small-eigenvalue accuracy is irrelevant.
inline double cut_entropy(const StateVector& state, int cut, LogBase base = LogBase::Two) {
    const auto m = detail::reshape(state, cut);
    Eigen::MatrixXcd rho = m.rows() <= m.cols() ? Eigen::MatrixXcd(m * m.adjoint())
                                                : Eigen::MatrixXcd(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    EntanglementSpectrum spec;
    spec.probabilities.assign(ev.data(), ev.data() + ev.size());
    return von_neumann_entropy(spec, base);
}

/// Mean entropy over the N-1 contiguous cuts.
inline double avg_bipartition_entropy(const StateVector& state, LogBase base = LogBase::Two) {
    const int n = state.n_qubits();
    if (n < 2) throw UsageError("average bipartition entropy needs at least 2 qubits");
    double total = 0.0;
    for (int k = 1; k < n; ++k) total += von_neumann_entropy(schmidt_spectrum(state, {k}), base);
    return total / (n - 1);
}

/// Keeps the per-cut entropies of a state current across gate applications.
///
/// A single-qubit gate leaves every contiguous cut unchanged, and a CNOT on
/// qubits a < b only touches cuts k with a < k <= b, so only those are
/// recomputed.
class EntropyTracker {
public:
    EntropyTracker(const StateVector& state, LogBase base) : base_(base), cuts_(state.n_qubits() - 1, 0.0) {
        if (state.n_qubits() < 2) throw UsageError("entropy tracking needs at least 2 qubits");
        refresh(state);
    }

    void refresh(const StateVector& state) {
        for (int k = 1; k < state.n_qubits(); ++k) cuts_[k - 1] = cut_entropy(state, k, base_);
    }

    /// Update after `gate` has been applied to `state`.
    void update(const StateVector& state, const Gate& gate) {
        if (gate.kind != GateKind::CNOT) return;
        const auto a = std::min(gate.qubits[0], gate.qubits[1]);
        const auto b = std::max(gate.qubits[0], gate.qubits[1]);
        for (auto k = a + 1; k <= b; ++k) cuts_[k - 1] = cut_entropy(state, static_cast<int>(k), base_);
    }

    double average() const {
        return std::accumulate(cuts_.begin(), cuts_.end(), 0.0) / static_cast<double>(cuts_.size());
    }

    std::span<const double> cut_entropies() const { return cuts_; }
    const std::vector<double>& snapshot() const { return cuts_; }
    void restore(const std::vector<double>& saved) { cuts_ = saved; }
    LogBase base() const { return base_; }

private:
    LogBase base_;
    std::vector<double> cuts_;
};

}  // namespace cliffordt
