#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "racbem/circuit.hpp"
#include "racbem/statevector.hpp"

namespace testutil {

using racbem::CMatrix;
using racbem::Complex;

// Independent dense unitaries built from textbook matrices and Kronecker
// products, qubit 0 being the most significant bit.
inline CMatrix one_qubit(const racbem::Gate& g) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0, 1);
  CMatrix m(2, 2);
  const auto& a = g.angles;
  switch (g.kind) {
    case racbem::GateKind::U1:
      m << 1, 0, 0, std::exp(i * a[0]);
      break;
    case racbem::GateKind::U2:
      m << s, -s * std::exp(i * a[1]), s * std::exp(i * a[0]), s * std::exp(i * (a[0] + a[1]));
      break;
    case racbem::GateKind::U3:
      m << std::cos(a[0] / 2), -std::exp(i * a[2]) * std::sin(a[0] / 2),
          std::exp(i * a[1]) * std::sin(a[0] / 2), std::exp(i * (a[1] + a[2])) * std::cos(a[0] / 2);
      break;
    case racbem::GateKind::X:
      m << 0, 1, 1, 0;
      break;
    case racbem::GateKind::H:
      m << s, s, s, -s;
      break;
    case racbem::GateKind::T:
      m << 1, 0, 0, std::exp(i * M_PI / 4.0);
      break;
    case racbem::GateKind::Sdg:
      m << 1, 0, 0, -i;
      break;
    default:
      break;
  }
  return m;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline CMatrix full_gate(const racbem::Gate& g, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (g.kind == racbem::GateKind::CNOT) {
    CMatrix p = CMatrix::Zero(dim, dim);
    const int c = g.qubits[0], t = g.qubits[1];
    for (Eigen::Index x = 0; x < dim; ++x) {
      const bool on = (x >> (n - 1 - c)) & 1;
      const Eigen::Index y = on ? (x ^ (Eigen::Index{1} << (n - 1 - t))) : x;
      p(y, x) = 1.0;
    }
    return p;
  }
  const int q = g.qubits[0];
  return kron(kron(CMatrix::Identity(Eigen::Index{1} << q, Eigen::Index{1} << q), one_qubit(g)),
              CMatrix::Identity(Eigen::Index{1} << (n - 1 - q), Eigen::Index{1} << (n - 1 - q)));
}

inline CMatrix full_circuit(const racbem::QuantumCircuit& c) {
  const int n = c.n_qubits();
  CMatrix u = CMatrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& layer : c.layers())
    for (const auto& g : layer) u = full_gate(g, n) * u;
  return std::exp(Complex(0, c.global_phase())) * u;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Distance up to a global phase.
inline double phase_distance(const CMatrix& a, const CMatrix& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Complex ph = a(r, c) / b(r, c);
  return max_abs(a - (ph / std::abs(ph)) * b);
}

}  // namespace testutil
