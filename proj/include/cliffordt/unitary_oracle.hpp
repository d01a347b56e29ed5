#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "cliffordt/errors.hpp"
#include "cliffordt/statevector.hpp"

namespace cliffordt {

inline constexpr int kOracleMaxQubits = 6;

/// Dense matrix of a single gate, built entry by entry from its definition.
inline Eigen::MatrixXcd gate_matrix(const Gate& gate, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        switch (gate.kind) {
            case GateKind::Hadamard: {
                const std::size_t bit = std::size_t{1} << gate.qubits[0];
                const double r = 1.0 / std::sqrt(2.0);
                const bool one = (col & bit) != 0;
                m(col & ~bit, col) += r;
                m(col | bit, col) += one ? -r : r;
                break;
            }
            case GateKind::PhaseShift: {
                const bool one = (col >> gate.qubits[0]) & 1U;
                m(col, col) = one ? std::exp(std::complex<double>(0.0, gate.theta)) : 1.0;
                break;
            }
            case GateKind::CNOT: {
                const bool c = (col >> gate.qubits[0]) & 1U;
                const std::size_t row = c ? col ^ (std::size_t{1} << gate.qubits[1]) : col;
                m(row, col) = 1.0;
                break;
            }
        }
    }
    return m;
}

/// Full unitary of a circuit, product of gate matrices in application order.
/// Small-scale test oracle only.
inline Eigen::MatrixXcd circuit_unitary_oracle(const Circuit& circuit, int n_qubits) {
    if (n_qubits < 1 || n_qubits > kOracleMaxQubits) {
        throw UsageError("circuit_unitary_oracle supports 1.." + std::to_string(kOracleMaxQubits) + " qubits");
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : circuit.gates) {
        if (!g.valid_for(n_qubits)) throw UsageError("gate targets out of range");
        u = gate_matrix(g, n_qubits) * u;
    }
    return u;
}

}  // namespace cliffordt
