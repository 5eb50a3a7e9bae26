#pragma once

#include <cstdint>
#include <vector>

#include "racbem/circuit.hpp"
#include "racbem/rng.hpp"

namespace racbem {

struct GeneratorConfig {
  CouplingMap coupling;
  std::vector<GateKind> gate_set{GateKind::U1, GateKind::U2, GateKind::U3, GateKind::CNOT};
  double p_cnot = 0.5;
  int depth = 1;
  std::uint64_t seed = 0;
};

/// 3 for one system qubit, 7 for two, 15 + 2(n - 3) beyond.
int default_depth(int n_system);

void check_config(const GeneratorConfig& cfg);

/// Layered random circuit on cfg.coupling.n_qubits() qubits. Every layer
/// touches every qubit exactly once.
QuantumCircuit generate(const GeneratorConfig& cfg);

/// Config for a RACBEM on n_system + 1 qubits using the bundled device maps.
GeneratorConfig racbem_config(int n_system, std::uint64_t seed, double p_cnot = 0.5,
                              int depth = 0);

struct SpreadStats {
  std::size_t samples = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> spreads;
};

/// Statistics of sigma_max - sigma_min over `samples` RACBEMs. Sample k uses
/// the template with seed derived from Rng(seed).split(k).
SpreadStats sv_spread_stats(std::size_t samples, int n_system, const GeneratorConfig& tmpl,
                            std::uint64_t seed);

}  // namespace racbem
