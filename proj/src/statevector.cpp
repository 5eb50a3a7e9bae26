#include "racbem/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "racbem/error.hpp"
#include "racbem/parallel.hpp"

namespace racbem {

namespace {

constexpr int kMaxStateQubits = 26;

void check_width(int n) {
  require(n >= 0 && n <= kMaxStateQubits, ErrorCode::CapExceeded,
          "state width " + std::to_string(n) + " outside [0, " +
              std::to_string(kMaxStateQubits) + "]");
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  check_width(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Complex(0.0));
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  require(index < s.dim(), ErrorCode::InvalidArgument, "basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps, bool normalized) {
  const std::size_t d = amps.size();
  require(d > 0 && (d & (d - 1)) == 0, ErrorCode::DimensionMismatch,
          "amplitude count is not a power of two");
  StateVector s;
  s.n_ = static_cast<int>(std::countr_zero(d));
  s.amps_ = std::move(amps);
  s.unnormalized_ = !normalized;
  if (normalized)
    require(std::abs(s.norm() - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
            "state is not normalized");
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const Complex& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::apply_global_phase(double phase) {
  if (phase == 0.0) return;
  const Complex f = std::polar(1.0, phase);
  for (Complex& a : amps_) a *= f;
}

void StateVector::apply_gate(const Gate& g) {
  for (int q : g.operands())
    require(q >= 0 && q < n_, ErrorCode::DimensionMismatch, "gate operand outside state");
  const std::size_t d = amps_.size();
  Complex* a = amps_.data();
  if (g.kind == GateKind::CNOT) {
    const std::size_t cbit = std::size_t{1} << (n_ - 1 - g.qubits[0]);
    const std::size_t tbit = std::size_t{1} << (n_ - 1 - g.qubits[1]);
    for (std::size_t i = 0; i < d; ++i)
      if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
    return;
  }
  const std::size_t stride = std::size_t{1} << (n_ - 1 - g.qubits[0]);
  switch (g.kind) {
    case GateKind::X:
      for (std::size_t base = 0; base < d; base += 2 * stride)
        for (std::size_t i = base; i < base + stride; ++i) std::swap(a[i], a[i + stride]);
      return;
    case GateKind::U1:
    case GateKind::T:
    case GateKind::Sdg: {
      const Complex ph = gate_unitary(g)[3];
      for (std::size_t base = stride; base < d; base += 2 * stride)
        for (std::size_t i = base; i < base + stride; ++i) a[i] *= ph;
      return;
    }
    default: {
      const GateMatrix m = gate_unitary(g);
      const Complex m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
      for (std::size_t base = 0; base < d; base += 2 * stride)
        for (std::size_t i = base; i < base + stride; ++i) {
          const Complex x0 = a[i], x1 = a[i + stride];
          a[i] = m00 * x0 + m01 * x1;
          a[i + stride] = m10 * x0 + m11 * x1;
        }
      return;
    }
  }
}

void StateVector::apply(const QuantumCircuit& c) {
  require(c.n_qubits() == n_, ErrorCode::DimensionMismatch,
          "circuit has " + std::to_string(c.n_qubits()) + " qubits, state has " +
              std::to_string(n_));
  for (const Layer& layer : c.layers())
    for (const Gate& g : layer) apply_gate(g);
  apply_global_phase(c.global_phase());
}

StateVector apply(const QuantumCircuit& c, StateVector s) {
  s.apply(c);
  return s;
}

CMatrix circuit_unitary(const QuantumCircuit& c, int cap) {
  require(c.n_qubits() <= cap, ErrorCode::CapExceeded,
          "circuit_unitary on " + std::to_string(c.n_qubits()) +
              " qubits exceeds the cap of " + std::to_string(cap));
  const std::size_t d = std::size_t{1} << c.n_qubits();
  CMatrix u(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  parallel_for(d, [&](std::size_t j) {
    StateVector s = StateVector::basis(c.n_qubits(), j);
    s.apply(c);
    for (std::size_t i = 0; i < d; ++i)
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s[i];
  });
  return u;
}

double prefix_zero_probability(const StateVector& s, int m_ancilla) {
  require(m_ancilla >= 0 && m_ancilla <= s.n_qubits(), ErrorCode::InvalidArgument,
          "ancilla count exceeds state width");
  const std::size_t keep = std::size_t{1} << (s.n_qubits() - m_ancilla);
  double p = 0.0;
  for (std::size_t i = 0; i < keep; ++i) p += std::norm(s[i]);
  return p;
}

double success_probability_exact(const QuantumCircuit& c, int m_ancilla,
                                 const StateVector& input) {
  StateVector s = input;
  s.apply(c);
  return std::min(1.0, prefix_zero_probability(s, m_ancilla));
}

std::vector<int> normalize_measured(std::span<const int> measured, int n_qubits) {
  require(!measured.empty(), ErrorCode::InvalidArgument, "measured qubit list is empty");
  std::vector<int> m(measured.begin(), measured.end());
  std::sort(m.begin(), m.end());
  require(std::adjacent_find(m.begin(), m.end()) == m.end(), ErrorCode::InvalidArgument,
          "measured qubit listed twice");
  require(m.front() >= 0 && m.back() < n_qubits, ErrorCode::InvalidArgument,
          "measured qubit out of range");
  return m;
}

std::vector<double> marginal_probabilities(const StateVector& s,
                                           std::span<const int> measured) {
  const std::vector<int> m = normalize_measured(measured, s.n_qubits());
  const std::size_t w = m.size();
  std::vector<double> p(std::size_t{1} << w, 0.0);
  const int n = s.n_qubits();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double pi = std::norm(s[i]);
    if (pi == 0.0) continue;
    std::size_t o = 0;
    for (int q : m) o = (o << 1) | ((i >> (n - 1 - q)) & 1u);
    p[o] += pi;
  }
  return p;
}

std::string outcome_bits(std::uint64_t outcome, std::size_t width) {
  std::string b(width, '0');
  for (std::size_t k = 0; k < width; ++k)
    if ((outcome >> (width - 1 - k)) & 1u) b[k] = '1';
  return b;
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = (acc += p[i]);
  return c;
}

std::size_t sample_index(const std::vector<double>& cdf, double u) {
  // Scale by the total so round-off in the normalization cannot run off the end.
  const double x = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
  std::size_t i = static_cast<std::size_t>(it - cdf.begin());
  return std::min(i, cdf.size() - 1);
}

CountsHistogram sample_counts(const QuantumCircuit& c, std::uint64_t shots,
                              std::span<const int> measured, const Rng& rng,
                              const StateVector* input) {
  require(shots >= 1, ErrorCode::InvalidArgument, "shots must be at least 1");
  StateVector s = input ? *input : StateVector(c.n_qubits());
  s.apply(c);
  const std::vector<double> cdf = cumulative(marginal_probabilities(s, measured));
  const std::size_t width = measured.size();
  const std::uint64_t chunks = (shots + kShotChunk - 1) / kShotChunk;
  std::vector<std::vector<std::uint64_t>> partial(chunks);
  parallel_for(chunks, [&](std::size_t k) {
    Rng r = rng.split(k);
    std::vector<std::uint64_t> tally(cdf.size(), 0);
    const std::uint64_t begin = k * kShotChunk;
    const std::uint64_t end = std::min(shots, begin + kShotChunk);
    for (std::uint64_t t = begin; t < end; ++t) ++tally[sample_index(cdf, r.uniform())];
    partial[k] = std::move(tally);
  });
  CountsHistogram h;
  h.shots = shots;
  for (std::size_t o = 0; o < cdf.size(); ++o) {
    std::uint64_t n = 0;
    for (const auto& t : partial) n += t[o];
    if (n) h.counts[outcome_bits(o, width)] = n;
  }
  return h;
}

Collapse postselect_collapse(const StateVector& s, std::span<const int> ancillas) {
  const int n = s.n_qubits();
  std::vector<int> anc(ancillas.begin(), ancillas.end());
  std::sort(anc.begin(), anc.end());
  anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
  for (int q : anc)
    require(q >= 0 && q < n, ErrorCode::InvalidArgument, "ancilla out of range");
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(anc.begin(), anc.end(), q)) rest.push_back(q);
  std::size_t anc_mask = 0;
  for (int q : anc) anc_mask |= std::size_t{1} << (n - 1 - q);
  const int nr = static_cast<int>(rest.size());
  std::vector<Complex> out(std::size_t{1} << nr, Complex(0.0));
  double p = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i & anc_mask) continue;
    std::size_t j = 0;
    for (int q : rest) j = (j << 1) | ((i >> (n - 1 - q)) & 1u);
    out[j] = s[i];
    p += std::norm(s[i]);
  }
  require(p >= 1e-14, ErrorCode::DegeneratePostselection,
          "post-selection probability " + std::to_string(p) + " below 1e-14");
  const double inv = 1.0 / std::sqrt(p);
  for (Complex& a : out) a *= inv;
  Collapse c;
  c.state = StateVector::from_amplitudes(std::move(out));
  c.probability = p;
  return c;
}

}  // namespace racbem
