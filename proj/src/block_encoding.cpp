#include "racbem/block_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "racbem/error.hpp"
#include "racbem/parallel.hpp"

namespace racbem {

namespace {

constexpr double kFeasTol = 1e-12;

void require_single_ancilla(const BlockEncoding& ua) {
  require(ua.m == 1, ErrorCode::DimensionMismatch,
          "U_A must have exactly one ancilla, got " + std::to_string(ua.m));
  require(ua.circuit.n_qubits() == ua.n_sys + 1, ErrorCode::DimensionMismatch,
          "U_A width does not equal n_sys + 1");
}

}  // namespace

BlockEncoding racbem_from_circuit(QuantumCircuit c) {
  require(c.n_qubits() >= 2, ErrorCode::InvalidArgument,
          "a RACBEM needs an ancilla and at least one system qubit");
  BlockEncoding be;
  be.n_sys = c.n_qubits() - 1;
  be.m = 1;
  be.circuit = std::move(c);
  return be;
}

std::pair<double, double> QuadraticH::range() const {
  return {std::min(a0, a0 + a2), std::max(a0, a0 + a2)};
}

QuadraticH QuadraticH::from_phases(double phi0, double phi1) {
  QuadraticH q;
  q.phi0 = phi0;
  q.phi1 = phi1;
  q.a2 = -2.0 * std::sin(2.0 * phi0) * std::sin(phi1);
  q.a0 = std::cos(2.0 * phi0 - phi1);
  return q;
}

QuadraticH QuadraticH::from_coefficients(double a2, double a0) {
  auto [p0, p1] = phases_for_quadratic(a2, a0);
  QuadraticH q;
  q.a2 = a2;
  q.a0 = a0;
  q.phi0 = p0;
  q.phi1 = p1;
  return q;
}

QuadraticH QuadraticH::canonical() {
  QuadraticH q;
  q.a2 = 1.0;
  q.a0 = 0.0;
  q.phi0 = std::numbers::pi / 8;
  q.phi1 = -std::numbers::pi / 4;
  return q;
}

QuadraticH QuadraticH::condition(double kappa) {
  require(std::isfinite(kappa) && kappa >= 1.0, ErrorCode::Infeasible,
          "condition number must be at least 1");
  return from_coefficients(1.0 - 1.0 / kappa, 1.0 / kappa);
}

std::pair<double, double> phases_for_quadratic(double a2, double a0) {
  require(std::isfinite(a2) && std::isfinite(a0), ErrorCode::InvalidArgument,
          "non-finite quadratic coefficients");
  require(std::abs(a0) <= 1.0 + kFeasTol && std::abs(a0 + a2) <= 1.0 + kFeasTol,
          ErrorCode::Infeasible, "quadratic h is not bounded by 1 on [-1,1]");
  const double u = std::acos(std::clamp(a0, -1.0, 1.0));
  const double v = std::acos(std::clamp(a0 + a2, -1.0, 1.0));
  return {(u + v) / 4.0, (v - u) / 2.0};
}

double condition_bound(const QuadraticH& q) {
  require(q.a0 > 0.0 && q.a2 >= 0.0, ErrorCode::Infeasible,
          "condition bound needs a0 > 0 and a2 >= 0");
  return (q.a0 + q.a2) / q.a0;
}

CMatrix extract_block(const BlockEncoding& be, int cap) {
  const int nq = be.circuit.n_qubits();
  require(nq == be.n_sys + be.m, ErrorCode::DimensionMismatch,
          "block encoding width differs from n_sys + m");
  require(nq <= cap, ErrorCode::CapExceeded,
          "extract_block on " + std::to_string(nq) + " qubits exceeds the cap of " +
              std::to_string(cap));
  const std::size_t d = std::size_t{1} << be.n_sys;
  CMatrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  parallel_for(d, [&](std::size_t j) {
    StateVector s = StateVector::basis(nq, j);
    s.apply(be.circuit);
    for (std::size_t i = 0; i < d; ++i)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s[i];
  });
  return a;
}

void append_controlled_rotation(QuantumCircuit& c, int signal, int ancilla, double theta) {
  c.append(Gate::x(ancilla));
  c.append(Gate::cnot(ancilla, signal));
  c.append(Gate::x(ancilla));
  // e^{-i theta Z} = e^{-i theta} U1(2 theta)
  c.append(Gate::u1(signal, 2.0 * theta));
  c.add_global_phase(-theta);
  c.append(Gate::x(ancilla));
  c.append(Gate::cnot(ancilla, signal));
  c.append(Gate::x(ancilla));
}

BlockEncoding build_hracbem(const BlockEncoding& ua, double phi0, double phi1) {
  require_single_ancilla(ua);
  const int n = ua.n_sys + 2;
  const QuantumCircuit ua_dg = adjoint(ua.circuit);
  QuantumCircuit c(n, "hracbem");
  c.append(Gate::h(0));
  append_controlled_rotation(c, 0, 1, phi0);
  c.append_circuit(ua.circuit, 1);
  append_controlled_rotation(c, 0, 1, phi1);
  c.append_circuit(ua_dg, 1);
  append_controlled_rotation(c, 0, 1, phi0);
  c.append(Gate::h(0));
  BlockEncoding be;
  be.circuit = std::move(c);
  be.n_sys = ua.n_sys;
  be.m = 2;
  return be;
}

BlockEncoding build_canonical_hracbem(const BlockEncoding& ua) {
  require_single_ancilla(ua);
  const int n = ua.n_sys + 2;
  QuantumCircuit c(n, "canonical_hracbem");
  c.append(Gate::h(0));
  c.append(Gate::t(0));
  c.append_circuit(ua.circuit, 1);
  c.append(Gate::cnot(1, 0));
  c.append(Gate::sdg(0));
  c.append(Gate::cnot(1, 0));
  c.append_circuit(adjoint(ua.circuit), 1);
  c.append(Gate::t(0));
  c.append(Gate::h(0));
  BlockEncoding be;
  be.circuit = std::move(c);
  be.n_sys = ua.n_sys;
  be.m = 2;
  return be;
}

}  // namespace racbem
