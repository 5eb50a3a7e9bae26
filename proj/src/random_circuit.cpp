#include "racbem/random_circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "racbem/block_encoding.hpp"
#include "racbem/error.hpp"
#include "racbem/oracle.hpp"
#include "racbem/parallel.hpp"

namespace racbem {

int default_depth(int n_system) {
  require(n_system >= 1, ErrorCode::InvalidArgument, "n_system must be at least 1");
  if (n_system == 1) return 3;
  if (n_system == 2) return 7;
  return 15 + 2 * (n_system - 3);
}

void check_config(const GeneratorConfig& cfg) {
  require(cfg.depth >= 0, ErrorCode::InvalidArgument, "depth must be non-negative");
  require(cfg.p_cnot >= 0.0 && cfg.p_cnot <= 1.0, ErrorCode::InvalidArgument,
          "p_cnot must lie in [0,1]");
  bool one_qubit = false, cnot = false;
  for (GateKind k : cfg.gate_set) {
    require(k == GateKind::U1 || k == GateKind::U2 || k == GateKind::U3 ||
                k == GateKind::CNOT,
            ErrorCode::InvalidArgument,
            std::string("gate set may only contain U1, U2, U3, CNOT, got ") +
                gate_kind_name(k));
    if (k == GateKind::CNOT)
      cnot = true;
    else
      one_qubit = true;
  }
  require(one_qubit, ErrorCode::InvalidArgument, "gate set has no one-qubit kind");
  if (cnot)
    require(!cfg.coupling.edges().empty(), ErrorCode::InvalidArgument,
            "CNOT requested but the coupling map has no edges");
}

QuantumCircuit generate(const GeneratorConfig& cfg) {
  check_config(cfg);
  const int n = cfg.coupling.n_qubits();
  std::vector<GateKind> singles;
  bool allow_cnot = false;
  for (GateKind k : cfg.gate_set) {
    if (k == GateKind::CNOT)
      allow_cnot = true;
    else if (std::find(singles.begin(), singles.end(), k) == singles.end())
      singles.push_back(k);
  }
  std::sort(singles.begin(), singles.end());
  const double two_pi = 2.0 * std::numbers::pi;

  Rng rng(cfg.seed);
  QuantumCircuit c(n, "racbem");
  for (int layer = 0; layer < cfg.depth; ++layer) {
    std::vector<int> free_q(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) free_q[static_cast<std::size_t>(q)] = q;
    std::vector<std::pair<int, int>> edges;
    if (allow_cnot) edges = cfg.coupling.edges();
    Layer gates;
    while (!free_q.empty()) {
      const double r = rng.uniform();
      if (r <= cfg.p_cnot && !edges.empty()) {
        const auto [a, b] = edges[rng.below(edges.size())];
        gates.push_back(Gate::cnot(a, b));
        std::erase_if(free_q, [&](int q) { return q == a || q == b; });
        std::erase_if(edges, [&](const std::pair<int, int>& e) {
          return e.first == a || e.first == b || e.second == a || e.second == b;
        });
      } else {
        const GateKind kind = singles[rng.below(singles.size())];
        double ang[3] = {0, 0, 0};
        for (int i = 0; i < gate_angle_count(kind); ++i) ang[i] = two_pi * rng.uniform();
        const std::size_t pick = rng.below(free_q.size());
        const int q = free_q[pick];
        switch (kind) {
          case GateKind::U1: gates.push_back(Gate::u1(q, ang[0])); break;
          case GateKind::U2: gates.push_back(Gate::u2(q, ang[0], ang[1])); break;
          default: gates.push_back(Gate::u3(q, ang[0], ang[1], ang[2])); break;
        }
        free_q.erase(free_q.begin() + static_cast<std::ptrdiff_t>(pick));
        std::erase_if(edges, [&](const std::pair<int, int>& e) {
          return e.first == q || e.second == q;
        });
      }
    }
    c.add_layer(std::move(gates));
  }
  return c;
}

GeneratorConfig racbem_config(int n_system, std::uint64_t seed, double p_cnot, int depth) {
  GeneratorConfig cfg;
  cfg.coupling = racbem_coupling(n_system);
  cfg.p_cnot = p_cnot;
  cfg.depth = depth > 0 ? depth : default_depth(n_system);
  cfg.seed = seed;
  return cfg;
}

SpreadStats sv_spread_stats(std::size_t samples, int n_system, const GeneratorConfig& tmpl,
                            std::uint64_t seed) {
  require(samples >= 1, ErrorCode::InvalidArgument, "need at least one sample");
  require(tmpl.coupling.n_qubits() == n_system + 1, ErrorCode::DimensionMismatch,
          "template coupling map must cover n_system + 1 qubits");
  require(n_system + 1 <= kDefaultUnitaryCap, ErrorCode::CapExceeded,
          "n_system too large for block extraction");
  const Rng root(seed);
  SpreadStats st;
  st.samples = samples;
  st.spreads.assign(samples, 0.0);
  parallel_for(samples, [&](std::size_t k) {
    GeneratorConfig cfg = tmpl;
    cfg.seed = root.split(k).next_u64();
    const BlockEncoding be = racbem_from_circuit(generate(cfg));
    const Eigen::VectorXd s = singular_values(extract_block(be));
    st.spreads[k] = s.maxCoeff() - s.minCoeff();
  });
  double sum = 0.0;
  st.min = st.spreads[0];
  st.max = st.spreads[0];
  for (double v : st.spreads) {
    sum += v;
    st.min = std::min(st.min, v);
    st.max = std::max(st.max, v);
  }
  st.mean = sum / static_cast<double>(samples);
  double var = 0.0;
  for (double v : st.spreads) var += (v - st.mean) * (v - st.mean);
  st.stddev = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
  return st;
}

}  // namespace racbem
