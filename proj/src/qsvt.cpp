#include "racbem/qsvt.hpp"

#include "racbem/error.hpp"

namespace racbem {

QsvtCircuit build_qsvt(const BlockEncoding& ua, const PhaseFactors& varphi, bool allow_odd) {
  require(ua.m == 1 && ua.circuit.n_qubits() == ua.n_sys + 1, ErrorCode::DimensionMismatch,
          "QSVT needs a single-ancilla block encoding");
  require(varphi.convention == Convention::Varphi, ErrorCode::InvalidArgument,
          "QSVT circuits take phases in the varphi convention");
  require(!varphi.values.empty(), ErrorCode::InvalidArgument, "phase sequence is empty");
  const int d = varphi.degree();
  require(d % 2 == 0 || allow_odd, ErrorCode::InvalidArgument,
          "odd degree " + std::to_string(d) + " requires the odd flag");

  const QuantumCircuit ua_dg = adjoint(ua.circuit);
  QuantumCircuit c(ua.n_sys + 2, "qsvt");
  c.append(Gate::h(0));
  append_controlled_rotation(c, 0, 1, varphi.values[static_cast<std::size_t>(d)]);
  for (int k = 0; k < d; ++k) {
    c.append_circuit(k % 2 == 0 ? ua.circuit : ua_dg, 1);
    append_controlled_rotation(c, 0, 1, varphi.values[static_cast<std::size_t>(d - 1 - k)]);
  }
  c.append(Gate::h(0));

  QsvtCircuit qc;
  qc.be.circuit = std::move(c);
  qc.be.n_sys = ua.n_sys;
  qc.be.m = 2;
  qc.degree = d;
  qc.varphi = varphi;
  qc.gate_budget = gate_count_bound(static_cast<std::size_t>(d), ua.circuit.depth(),
                                    static_cast<std::size_t>(ua.circuit.n_qubits()));
  return qc;
}

std::size_t gate_count_bound(std::size_t d, std::size_t l, std::size_t n) {
  return 2 + 7 * (d + 1) + d * l * n;
}

CMatrix block_of(const QsvtCircuit& qc, int cap) { return extract_block(qc.be, cap); }

}  // namespace racbem
