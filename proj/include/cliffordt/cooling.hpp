#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cliffordt/analysis.hpp"
#include "cliffordt/circuits.hpp"
#include "cliffordt/entanglement.hpp"
#include "cliffordt/errors.hpp"
#include "cliffordt/rng.hpp"
#include "cliffordt/statevector.hpp"

namespace cliffordt {

/// How a rejected proposal is undone.
enum class RestoreStrategy { InverseGate, Snapshot };

struct CoolingConfig {
    double beta = 1e4;
    /// Accepted-gate budget; 0 means 40 N^2.
    std::size_t accepted_budget = 0;
    GateSet proposal_set = GateSet::Clifford;
    /// Upper bound on proposals; 0 means 2000 N^2.
    std::size_t proposal_cap = 0;
    double target_entropy = 0.0;
    /// Run stops once the average entropy is below target + this.
    double zero_threshold = 1e-10;
    LogBase log_base = LogBase::Two;
    RestoreStrategy restore = RestoreStrategy::InverseGate;

    std::size_t budget_for(int n) const {
        return accepted_budget > 0 ? accepted_budget : 40 * static_cast<std::size_t>(n) * n;
    }
    std::size_t cap_for(int n) const {
        return proposal_cap > 0 ? proposal_cap : 2000 * static_cast<std::size_t>(n) * n;
    }

    void validate(int n) const {
        if (!(beta >= 0.0)) throw ConfigError("cooling.beta must be >= 0");
        if (cap_for(n) < budget_for(n)) throw ConfigError("cooling.proposal_cap must be >= accepted_budget");
    }
};

struct CoolingResult {
    Circuit circuit;
    EntropySeries entropy_series{{}, Phase::Cooling};
    double initial_entropy = 0.0;
    double final_entropy = 0.0;
    std::size_t accepted = 0;
    std::size_t proposed = 0;
    bool reached_zero = false;
    bool cap_exhausted = false;
};

/// exp(-beta * delta) for uphill moves, 1 otherwise.
inline double acceptance_probability(double delta, double beta) {
    return delta <= 0.0 ? 1.0 : std::exp(-beta * delta);
}

struct StepOutcome {
    bool accepted = false;
    double new_entropy = 0.0;
    Gate gate;
};

/// One Metropolis move: propose a random gate, keep it if the average
/// entropy does not rise, otherwise keep it with probability
/// exp(-beta dS). A rejected move restores the previous state.
inline StepOutcome metropolis_step(StateVector& state, EntropyTracker& tracker, const CoolingConfig& config,
                                   RandomEngine& rng) {
    const double s_old = tracker.average();
    const Gate gate = random_gate(state.n_qubits(), config.proposal_set, rng);

    std::vector<Amplitude> snapshot;
    if (config.restore == RestoreStrategy::Snapshot) {
        snapshot.assign(state.amplitudes().begin(), state.amplitudes().end());
    }
    const bool touches_cuts = gate.kind == GateKind::CNOT;
    std::vector<double> saved_cuts;
    if (touches_cuts) saved_cuts = tracker.snapshot();

    apply_gate(state, gate);
    tracker.update(state, gate);
    const double s_new = tracker.average();

    bool accept = true;
    if (s_new > s_old) {
        const double r = uniform_unit(rng);
        accept = !(r > acceptance_probability(s_new - s_old, config.beta));
    }
    if (accept) return {true, s_new, gate};

    if (config.restore == RestoreStrategy::Snapshot) {
        std::copy(snapshot.begin(), snapshot.end(), state.amplitudes().begin());
    } else {
        apply_gate(state, gate.inverse());
    }
    if (touches_cuts) tracker.restore(saved_cuts);
    return {false, s_old, gate};
}

/// Metropolis entanglement cooling of `state` (modified in place).
///
/// Stops when the average entropy reaches the target, the accepted budget
/// is spent, or the proposal cap is exhausted. After an early zero the
/// series is padded with the final value up to the budget.
inline CoolingResult run_cooling(StateVector& state, const CoolingConfig& config, RandomEngine& rng) {
    const int n = state.n_qubits();
    config.validate(n);
    const std::size_t budget = config.budget_for(n);
    const std::size_t cap = config.cap_for(n);

    EntropyTracker tracker(state, config.log_base);
    CoolingResult out;
    out.entropy_series.base = config.log_base;
    out.entropy_series.values.reserve(budget);
    out.initial_entropy = tracker.average();
    double current = out.initial_entropy;
    auto at_target = [&](double s) { return s < config.target_entropy + config.zero_threshold; };

    out.reached_zero = at_target(current);
    while (!out.reached_zero && out.accepted < budget) {
        if (out.proposed >= cap) {
            out.cap_exhausted = true;
            break;
        }
        const auto step = metropolis_step(state, tracker, config, rng);
        ++out.proposed;
        if (!step.accepted) continue;
        ++out.accepted;
        out.circuit.push(step.gate);
        current = step.new_entropy;
        out.entropy_series.values.push_back(current);
        out.reached_zero = at_target(current);
    }
    if (out.reached_zero) out.entropy_series.values.resize(budget, current);
    out.final_entropy = current;
    return out;
}

/// Mean final cooled entropy of universal-circuit realizations at one N.
struct UniversalBaseline {
    int n_qubits = 0;
    double mean_final_entropy = 0.0;
    std::size_t realizations = 0;
};

/// (1/N) * mean over realizations of (baseline - final entropy).
inline double reversibility(std::span<const double> final_entropies, const UniversalBaseline& baseline,
                            int n_qubits) {
    if (final_entropies.empty()) throw InsufficientData("reversibility needs at least one realization");
    if (baseline.n_qubits != n_qubits) {
        throw UsageError("universal baseline was computed for N=" + std::to_string(baseline.n_qubits) +
                         ", samples have N=" + std::to_string(n_qubits));
    }
    double total = 0.0;
    for (double f : final_entropies) total += baseline.mean_final_entropy - f;
    return total / static_cast<double>(final_entropies.size()) / n_qubits;
}

}  // namespace cliffordt
