#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cliffordt/errors.hpp"

namespace cliffordt {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 24;

enum class GateKind : std::uint8_t { Hadamard, PhaseShift, CNOT };

/// One gate of the H / P(theta) / CNOT set.
///
/// S and T are phase shifts with angle pi/2 and pi/4. For CNOT, `qubits[0]`
/// is the control and `qubits[1]` the target.
struct Gate {
    GateKind kind = GateKind::Hadamard;
    double theta = 0.0;
    std::array<std::uint32_t, 2> qubits{0, 0};

    static constexpr double kSAngle = std::numbers::pi / 2;
    static constexpr double kTAngle = std::numbers::pi / 4;

    static Gate h(std::uint32_t q) { return {GateKind::Hadamard, 0.0, {q, q}}; }
    static Gate phase(double angle, std::uint32_t q) { return {GateKind::PhaseShift, angle, {q, q}}; }
    static Gate s(std::uint32_t q) { return phase(kSAngle, q); }
    static Gate t(std::uint32_t q) { return phase(kTAngle, q); }
    static Gate cnot(std::uint32_t control, std::uint32_t target) {
        return {GateKind::CNOT, 0.0, {control, target}};
    }

    int arity() const { return kind == GateKind::CNOT ? 2 : 1; }
    bool is_s() const { return kind == GateKind::PhaseShift && theta == kSAngle; }
    bool is_t() const { return kind == GateKind::PhaseShift && theta == kTAngle; }

    /// Exact inverse: H and CNOT are involutions, P(theta)^-1 = P(-theta).
    Gate inverse() const {
        Gate g = *this;
        if (kind == GateKind::PhaseShift) g.theta = -theta;
        return g;
    }

    bool valid_for(int n_qubits) const {
        const auto n = static_cast<std::uint32_t>(n_qubits);
        if (kind == GateKind::CNOT) return qubits[0] < n && qubits[1] < n && qubits[0] != qubits[1];
        return qubits[0] < n;
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

enum class MarkerLabel : std::uint8_t { CliffordBlockEnd, TLayer };

/// Provenance marker placed after `position` gates.
struct Marker {
    std::size_t position = 0;
    MarkerLabel label = MarkerLabel::CliffordBlockEnd;
    friend bool operator==(const Marker&, const Marker&) = default;
};

/// Ordered gate list with block / T-layer markers.
class Circuit {
public:
    std::vector<Gate> gates;
    std::vector<Marker> markers;

    std::size_t size() const { return gates.size(); }
    bool empty() const { return gates.empty(); }

    void push(const Gate& g) { gates.push_back(g); }
    void mark(MarkerLabel label) { markers.push_back({gates.size(), label}); }

    void append(const Circuit& other) {
        const std::size_t offset = gates.size();
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
        for (auto m : other.markers) {
            m.position += offset;
            markers.push_back(m);
        }
    }

    /// Marker positions non-decreasing and within the gate count.
    bool markers_consistent() const {
        std::size_t last = 0;
        for (const auto& m : markers) {
            if (m.position < last || m.position > gates.size()) return false;
            last = m.position;
        }
        return true;
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Dense pure state of n qubits. Qubit q is bit q of the basis index.
class StateVector {
public:
    explicit StateVector(int n_qubits) : n_qubits_(checked_size(n_qubits)), amps_(std::size_t{1} << n_qubits) {
        amps_[0] = 1.0;
    }

    StateVector(int n_qubits, std::vector<Amplitude> amplitudes)
        : n_qubits_(checked_size(n_qubits)), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << n_qubits_)) {
            throw UsageError("amplitude count " + std::to_string(amps_.size()) + " does not match 2^" +
                             std::to_string(n_qubits_));
        }
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> amplitudes() { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
    Amplitude& operator[](std::size_t i) { return amps_[i]; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    void normalize() {
        const double n = norm();
        if (n > 0.0) {
            for (auto& a : amps_) a /= n;
        }
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    static int checked_size(int n) {
        if (n < 1 || n > kMaxQubits) {
            throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                              std::to_string(n));
        }
        return n;
    }

    int n_qubits_;
    std::vector<Amplitude> amps_;
};

/// |0...0> on n qubits.
inline StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

namespace detail {

inline void apply_hadamard(std::span<Amplitude> psi, std::size_t stride) {
    constexpr double r = 1.0 / std::numbers::sqrt2;
    const std::size_t dim = psi.size();
    for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
        Amplitude* lo_ptr = psi.data() + hi;
        Amplitude* up_ptr = lo_ptr + stride;
        for (std::size_t i = 0; i < stride; ++i) {
            const Amplitude a = lo_ptr[i];
            const Amplitude b = up_ptr[i];
            lo_ptr[i] = (a + b) * r;
            up_ptr[i] = (a - b) * r;
        }
    }
}

template <typename Fn>
void for_each_set_bit_index(std::span<Amplitude> psi, std::size_t stride, Fn&& fn) {
    const std::size_t dim = psi.size();
    for (std::size_t hi = stride; hi < dim; hi += 2 * stride) {
        Amplitude* p = psi.data() + hi;
        for (std::size_t i = 0; i < stride; ++i) fn(p[i]);
    }
}

inline void apply_phase(std::span<Amplitude> psi, std::size_t stride, double theta) {
    // Quarter turns are applied by component swaps so they stay exact.
    if (theta == Gate::kSAngle) {
        for_each_set_bit_index(psi, stride, [](Amplitude& a) { a = {-a.imag(), a.real()}; });
    } else if (theta == -Gate::kSAngle) {
        for_each_set_bit_index(psi, stride, [](Amplitude& a) { a = {a.imag(), -a.real()}; });
    } else if (theta == std::numbers::pi || theta == -std::numbers::pi) {
        for_each_set_bit_index(psi, stride, [](Amplitude& a) { a = -a; });
    } else if (theta != 0.0) {
        const Amplitude w = std::polar(1.0, theta);
        for_each_set_bit_index(psi, stride, [w](Amplitude& a) { a *= w; });
    }
}

inline void apply_cnot(std::span<Amplitude> psi, std::uint32_t control, std::uint32_t target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    const std::uint32_t lo = control < target ? control : target;
    const std::uint32_t hi = control < target ? target : control;
    const std::size_t quarter = psi.size() >> 2;
    for (std::size_t j = 0; j < quarter; ++j) {
        // Insert zero bits at positions lo and hi.
        std::size_t i = j;
        i = ((i >> lo) << (lo + 1)) | (i & ((std::size_t{1} << lo) - 1));
        i = ((i >> hi) << (hi + 1)) | (i & ((std::size_t{1} << hi) - 1));
        i |= cmask;
        std::swap(psi[i], psi[i | tmask]);
    }
}

}  // namespace detail

/// Apply one gate in place.
inline void apply_gate(StateVector& state, const Gate& gate) {
    if (!gate.valid_for(state.n_qubits())) {
        throw UsageError("gate targets out of range for " + std::to_string(state.n_qubits()) + " qubits");
    }
    auto psi = state.amplitudes();
    switch (gate.kind) {
        case GateKind::Hadamard:
            detail::apply_hadamard(psi, std::size_t{1} << gate.qubits[0]);
            break;
        case GateKind::PhaseShift:
            detail::apply_phase(psi, std::size_t{1} << gate.qubits[0], gate.theta);
            break;
        case GateKind::CNOT:
            detail::apply_cnot(psi, gate.qubits[0], gate.qubits[1]);
            break;
    }
}

/// Apply all gates in order, calling `observer(gate_index, state)` after each.
template <typename Observer>
void apply_circuit(StateVector& state, const Circuit& circuit, Observer&& observer) {
    for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
        apply_gate(state, circuit.gates[k]);
        observer(k, static_cast<const StateVector&>(state));
    }
}

inline void apply_circuit(StateVector& state, const Circuit& circuit) {
    for (const auto& g : circuit.gates) apply_gate(state, g);
}

}  // namespace cliffordt
