#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "racbem/circuit.hpp"
#include "racbem/rng.hpp"
#include "racbem/statevector.hpp"

namespace racbem {

struct NoiseKey {
  GateKind kind = GateKind::X;
  int q0 = 0;
  int q1 = -1;  // CNOT target, -1 for one-qubit gates

  friend auto operator<=>(const NoiseKey&, const NoiseKey&) = default;
};

/// Error distributions over Pauli insertions applied after the gate. One-qubit
/// entries have 4 probabilities (I, X, Y, Z); CNOT entries have 16, indexed
/// 4 * pauli(control) + pauli(target). Entry 0 is the correct operation.
/// Readout rows: {P(read 0 | 0), P(read 1 | 0), P(read 0 | 1), P(read 1 | 1)}.
struct NoiseModel {
  std::map<NoiseKey, std::vector<double>> gate_errors;
  std::map<int, std::array<double, 4>> readout;

  void validate() const;
  bool noiseless() const;
};

/// Non-correct entries times sigma, correct entry 1 - sigma (1 - p). Readout
/// rows are scaled the same way, each row on its own.
NoiseModel scale(const NoiseModel& m, double sigma);

/// Generic helper for one distribution, entry `correct` being the correct one.
std::vector<double> scale_distribution(const std::vector<double>& p, double sigma,
                                       std::size_t correct = 0);

/// Stochastic Pauli trajectories; shots use the same chunked RNG streams as
/// sample_counts, and a shot without any error consumes exactly one uniform,
/// so a noiseless model reproduces sample_counts bit for bit.
CountsHistogram sample_noisy_counts(const QuantumCircuit& c, const NoiseModel& m,
                                    std::uint64_t shots, std::span<const int> measured,
                                    const Rng& rng, const StateVector* input = nullptr);

/// Depolarizing-style model: U2, H, X get total error rate e = base_1q (1 +/- 20%)
/// per qubit, U3 gets 2e, U1, T and Sdg are virtual and noiseless; CNOT gets
/// base_2q (1 +/- 20%) on coupling edges only; readout is symmetric.
NoiseModel synth_model(const CouplingMap& coupling, double base_1q, double base_2q,
                       double readout_rate, Rng& rng);

}  // namespace racbem
