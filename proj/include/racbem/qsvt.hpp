#pragma once

#include <cstddef>

#include "racbem/block_encoding.hpp"
#include "racbem/phase_factors.hpp"

namespace racbem {

struct QsvtCircuit {
  BlockEncoding be;  // n_sys + 2 qubits, m = 2
  int degree = 0;
  PhaseFactors varphi;
  std::size_t gate_budget = 0;  // gate_count_bound(d, depth of U_A, width of U_A)
};

/// H(q0), CR(varphi_d), then U_A, CR(varphi_{d-1}), U_A^dag, CR(varphi_{d-2}),
/// ... alternating, and a final H(q0). Odd d needs allow_odd.
QsvtCircuit build_qsvt(const BlockEncoding& ua, const PhaseFactors& varphi,
                       bool allow_odd = false);

/// 2 + 7(d + 1) + d l n.
std::size_t gate_count_bound(std::size_t d, std::size_t l, std::size_t n);

CMatrix block_of(const QsvtCircuit& qc, int cap = kDefaultUnitaryCap);

}  // namespace racbem
