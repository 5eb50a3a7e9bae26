#pragma once

#include <utility>

#include "racbem/circuit.hpp"
#include "racbem/statevector.hpp"

namespace racbem {

/// A circuit whose upper-left 2^n_sys block (ancillas = the m lowest-indexed
/// qubits, all in |0>) is A / alpha.
struct BlockEncoding {
  QuantumCircuit circuit;
  int n_sys = 0;
  int m = 1;
  double alpha = 1.0;
};

/// Wraps a generated circuit on n_sys + 1 qubits; qubit 0 is the ancilla.
BlockEncoding racbem_from_circuit(QuantumCircuit c);

/// h(x) = a2 x^2 + a0 with a2 = -2 sin(2 phi0) sin(phi1), a0 = cos(2 phi0 - phi1).
struct QuadraticH {
  double a2 = 1.0;
  double a0 = 0.0;
  double phi0 = 0.0;
  double phi1 = 0.0;

  double operator()(double x) const { return a2 * x * x + a0; }
  /// Image of [-1,1] (equivalently of [0,1] in x^2) as an ordered interval.
  std::pair<double, double> range() const;

  static QuadraticH from_phases(double phi0, double phi1);
  /// Solves for the phases; throws Infeasible when |a0| > 1 or |a0 + a2| > 1.
  static QuadraticH from_coefficients(double a2, double a0);
  static QuadraticH canonical();
  /// h_kappa(x) = (1 - 1/kappa) x^2 + 1/kappa.
  static QuadraticH condition(double kappa);
};

/// (<0^m| x I) U (|0^m> x I). Only the 2^n_sys columns with ancillas in |0>
/// are simulated.
CMatrix extract_block(const BlockEncoding& be, int cap = kDefaultUnitaryCap);

/// e^{-i theta Z} on the signal qubit conjugated by an open-controlled X:
/// e^{+i theta Z} when the ancilla is |0>, e^{-i theta Z} when it is |1>.
/// Built from X(anc) CNOT(anc -> sig) X(anc) around U1(2 theta) with global
/// phase -theta. Seven logical gates.
void append_controlled_rotation(QuantumCircuit& c, int signal, int ancilla, double theta);

/// Hermitian RACBEM on n_sys + 2 qubits: qubit 0 is the signal qubit, qubit 1
/// the ancilla of U_A. Block = a2 A^dag A + a0 I.
BlockEncoding build_hracbem(const BlockEncoding& ua, double phi0, double phi1);
/// Block = A^dag A using H, T, CNOT, Sdg, CNOT, T, H around U_A and U_A^dag.
BlockEncoding build_canonical_hracbem(const BlockEncoding& ua);

std::pair<double, double> phases_for_quadratic(double a2, double a0);

/// (a0 + a2) / a0, an upper bound on the condition number of the H-RACBEM.
double condition_bound(const QuadraticH& q);

}  // namespace racbem
