#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cliffordt/errors.hpp"
#include "cliffordt/rng.hpp"
#include "cliffordt/statevector.hpp"

namespace cliffordt {

enum class CircuitFamily { Clifford, DopedCliffordT, Universal };

inline std::string_view to_string(CircuitFamily f) {
    switch (f) {
        case CircuitFamily::Clifford: return "clifford";
        case CircuitFamily::DopedCliffordT: return "doped";
        case CircuitFamily::Universal: return "universal";
    }
    return "?";
}

/// Which gate kinds the uniform samplers draw from.
enum class GateSet { Clifford, Universal };

struct CircuitSpec {
    int n_qubits = 8;
    int n_t = 0;
    /// Gates per Clifford block; 0 means the default 10 N^2.
    int block_size = 0;
    CircuitFamily family = CircuitFamily::DopedCliffordT;
    std::uint64_t seed = 0;

    int effective_block_size() const { return block_size > 0 ? block_size : 10 * n_qubits * n_qubits; }

    void validate() const {
        if (n_qubits < 2 || n_qubits > kMaxQubits) throw ConfigError("n_qubits must be in [2, 24]");
        if (n_t < 0) throw ConfigError("n_T must be >= 0");
        if (block_size < 0) throw ConfigError("block_size must be >= 1 (or 0 for the default)");
        if (family == CircuitFamily::Clifford && n_t != 0) throw ConfigError("Clifford family requires n_T = 0");
    }
};

/// Draw one gate: kind uniform over the set, then placement uniform.
/// CNOT (control, target) is uniform over ordered distinct pairs.
inline Gate random_gate(int n_qubits, GateSet set, RandomEngine& rng) {
    const auto n = static_cast<std::uint64_t>(n_qubits);
    const std::uint64_t kinds = set == GateSet::Clifford ? 3 : 4;
    const auto kind = uniform_index(rng, kinds);
    if (kind == kinds - 1) {
        const auto c = static_cast<std::uint32_t>(uniform_index(rng, n));
        auto t = static_cast<std::uint32_t>(uniform_index(rng, n - 1));
        if (t >= c) ++t;
        return Gate::cnot(c, t);
    }
    const auto q = static_cast<std::uint32_t>(uniform_index(rng, n));
    switch (kind) {
        case 0: return Gate::h(q);
        case 1: return Gate::s(q);
        default: return Gate::t(q);
    }
}

inline Circuit random_block(int n_qubits, std::size_t n_gates, GateSet set, RandomEngine& rng) {
    if (n_qubits < 2) throw UsageError("random circuits need at least 2 qubits");
    Circuit c;
    c.gates.reserve(n_gates);
    for (std::size_t i = 0; i < n_gates; ++i) c.push(random_gate(n_qubits, set, rng));
    return c;
}

/// n_gates uniform draws from {H, S, CNOT}.
inline Circuit random_clifford_block(int n_qubits, std::size_t n_gates, RandomEngine& rng) {
    return random_block(n_qubits, n_gates, GateSet::Clifford, rng);
}

/// n_gates uniform draws from {H, S, T, CNOT}.
inline Circuit random_universal_block(int n_qubits, std::size_t n_gates, RandomEngine& rng) {
    return random_block(n_qubits, n_gates, GateSet::Universal, rng);
}

/// [block, T, block, T, ..., block]: n_T + 1 Clifford blocks separated by
/// single T gates on uniformly random qubits.
inline Circuit doped_circuit(int n_qubits, int n_t, std::size_t block_size, RandomEngine& rng) {
    if (n_t < 0) throw ConfigError("n_T must be >= 0");
    Circuit c;
    c.gates.reserve((static_cast<std::size_t>(n_t) + 1) * block_size + static_cast<std::size_t>(n_t));
    for (int layer = 0; layer <= n_t; ++layer) {
        c.append(random_clifford_block(n_qubits, block_size, rng));
        c.mark(MarkerLabel::CliffordBlockEnd);
        if (layer < n_t) {
            c.push(Gate::t(static_cast<std::uint32_t>(uniform_index(rng, static_cast<std::uint64_t>(n_qubits)))));
            c.mark(MarkerLabel::TLayer);
        }
    }
    return c;
}

/// Heating circuit for a spec, seeded from `spec.seed`.
inline Circuit make_circuit(const CircuitSpec& spec) {
    spec.validate();
    RandomEngine rng(spec.seed);
    const auto block = static_cast<std::size_t>(spec.effective_block_size());
    switch (spec.family) {
        case CircuitFamily::Universal: return random_universal_block(spec.n_qubits, block, rng);
        case CircuitFamily::Clifford: return doped_circuit(spec.n_qubits, 0, block, rng);
        case CircuitFamily::DopedCliffordT: return doped_circuit(spec.n_qubits, spec.n_t, block, rng);
    }
    return {};
}

// Text format: one gate per line ("H q", "S q", "T q", "P theta q",
// "CNOT c t"), markers as "# block" / "# tlayer" lines.

namespace detail {

inline std::string format_angle(double theta) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, theta);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_circuit(std::ostream& os, const Circuit& c) {
    std::size_t next_marker = 0;
    auto flush_markers = [&](std::size_t pos) {
        while (next_marker < c.markers.size() && c.markers[next_marker].position == pos) {
            os << (c.markers[next_marker].label == MarkerLabel::CliffordBlockEnd ? "# block\n" : "# tlayer\n");
            ++next_marker;
        }
    };
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        flush_markers(i);
        const Gate& g = c.gates[i];
        switch (g.kind) {
            case GateKind::Hadamard: os << "H " << g.qubits[0] << '\n'; break;
            case GateKind::CNOT: os << "CNOT " << g.qubits[0] << ' ' << g.qubits[1] << '\n'; break;
            case GateKind::PhaseShift:
                if (g.is_s()) {
                    os << "S " << g.qubits[0] << '\n';
                } else if (g.is_t()) {
                    os << "T " << g.qubits[0] << '\n';
                } else {
                    os << "P " << detail::format_angle(g.theta) << ' ' << g.qubits[0] << '\n';
                }
                break;
        }
    }
    flush_markers(c.gates.size());
}

inline std::string circuit_to_text(const Circuit& c) {
    std::ostringstream os;
    write_circuit(os, c);
    return os.str();
}

inline Circuit read_circuit(std::istream& is) {
    Circuit c;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw UsageError("circuit text line " + std::to_string(lineno) + ": " + why + " (\"" + line + "\")");
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# block") {
                c.mark(MarkerLabel::CliffordBlockEnd);
            } else if (line == "# tlayer") {
                c.mark(MarkerLabel::TLayer);
            } else {
                fail("unknown marker");
            }
            continue;
        }
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        if (op == "H" || op == "S" || op == "T") {
            if (!(ls >> a)) fail("missing qubit");
            c.push(op == "H" ? Gate::h(a) : op == "S" ? Gate::s(a) : Gate::t(a));
        } else if (op == "P") {
            std::string angle;
            if (!(ls >> angle >> a)) fail("expected 'P theta q'");
            double theta = 0.0;
            auto res = std::from_chars(angle.data(), angle.data() + angle.size(), theta);
            if (res.ec != std::errc{} || res.ptr != angle.data() + angle.size()) fail("bad angle");
            c.push(Gate::phase(theta, a));
        } else if (op == "CNOT") {
            if (!(ls >> a >> b)) fail("expected 'CNOT c t'");
            if (a == b) fail("CNOT control equals target");
            c.push(Gate::cnot(a, b));
        } else {
            fail("unknown gate");
        }
        std::string extra;
        if (ls >> extra) fail("trailing tokens");
    }
    return c;
}

inline Circuit circuit_from_text(std::string_view text) {
    std::istringstream is{std::string(text)};
    return read_circuit(is);
}

}  // namespace cliffordt
