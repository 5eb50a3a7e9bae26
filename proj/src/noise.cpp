#include "racbem/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "racbem/error.hpp"
#include "racbem/parallel.hpp"

namespace racbem {

namespace {

constexpr double kSumTol = 1e-12;

void apply_pauli(StateVector& s, int q, int pauli) {
  switch (pauli) {
    case 1: s.apply_gate(Gate::x(q)); break;
    case 2:  // Y up to a global phase
      s.apply_gate(Gate::u1(q, std::numbers::pi));
      s.apply_gate(Gate::x(q));
      break;
    case 3: s.apply_gate(Gate::u1(q, std::numbers::pi)); break;
    default: break;
  }
}

void apply_error(StateVector& s, const Gate& g, int op) {
  if (g.kind == GateKind::CNOT) {
    apply_pauli(s, g.qubits[0], op / 4);
    apply_pauli(s, g.qubits[1], op % 4);
  } else {
    apply_pauli(s, g.qubits[0], op);
  }
}

NoiseKey key_of(const Gate& g) {
  return {g.kind, g.qubits[0], g.kind == GateKind::CNOT ? g.qubits[1] : -1};
}

}  // namespace

void NoiseModel::validate() const {
  for (const auto& [k, p] : gate_errors) {
    const std::size_t want = k.kind == GateKind::CNOT ? 16 : 4;
    require(p.size() == want, ErrorCode::Schema,
            std::string("noise distribution for ") + gate_kind_name(k.kind) +
                " must have " + std::to_string(want) + " entries");
    require((k.kind == GateKind::CNOT) == (k.q1 >= 0), ErrorCode::Schema,
            "noise key operands do not match the gate kind");
    double sum = 0.0;
    for (double v : p) {
      require(v >= 0.0 && std::isfinite(v), ErrorCode::Schema, "negative error probability");
      sum += v;
    }
    require(std::abs(sum - 1.0) <= kSumTol, ErrorCode::Schema,
            "error distribution does not sum to 1");
    require(*std::max_element(p.begin(), p.end()) == p[0], ErrorCode::Schema,
            "correct operation is not the most likely outcome");
  }
  for (const auto& [q, r] : readout) {
    require(q >= 0, ErrorCode::Schema, "negative readout qubit");
    for (double v : r) require(v >= 0.0 && v <= 1.0, ErrorCode::Schema, "bad readout entry");
    require(std::abs(r[0] + r[1] - 1.0) <= kSumTol && std::abs(r[2] + r[3] - 1.0) <= kSumTol,
            ErrorCode::Schema, "readout rows must sum to 1");
  }
}

bool NoiseModel::noiseless() const {
  for (const auto& [k, p] : gate_errors)
    if (p[0] != 1.0) return false;
  for (const auto& [q, r] : readout)
    if (r[0] != 1.0 || r[3] != 1.0) return false;
  return true;
}

std::vector<double> scale_distribution(const std::vector<double>& p, double sigma,
                                       std::size_t correct) {
  require(sigma >= 0.0 && sigma <= 1.0, ErrorCode::InvalidArgument,
          "sigma must lie in [0,1]");
  require(correct < p.size(), ErrorCode::InvalidArgument, "correct index out of range");
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = i == correct ? 0.0 : p[i] * sigma;
  out[correct] = 1.0 - sigma * (1.0 - p[correct]);
  return out;
}

NoiseModel scale(const NoiseModel& m, double sigma) {
  require(sigma >= 0.0 && sigma <= 1.0, ErrorCode::InvalidArgument,
          "sigma must lie in [0,1]");
  NoiseModel out;
  for (const auto& [k, p] : m.gate_errors) out.gate_errors[k] = scale_distribution(p, sigma);
  for (const auto& [q, r] : m.readout) {
    const auto r0 = scale_distribution({r[0], r[1]}, sigma, 0);
    const auto r1 = scale_distribution({r[2], r[3]}, sigma, 1);
    out.readout[q] = {r0[0], r0[1], r1[0], r1[1]};
  }
  return out;
}

CountsHistogram sample_noisy_counts(const QuantumCircuit& c, const NoiseModel& m,
                                    std::uint64_t shots, std::span<const int> measured,
                                    const Rng& rng, const StateVector* input) {
  require(shots >= 1, ErrorCode::InvalidArgument, "shots must be at least 1");
  m.validate();
  const std::vector<int> meas = normalize_measured(measured, c.n_qubits());
  const std::size_t width = meas.size();

  std::vector<Gate> gates;
  for (const Layer& l : c.layers())
    for (const Gate& g : l) gates.push_back(g);
  // cumulative error distributions, empty when the gate is noiseless
  std::vector<std::vector<double>> cdfs(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    auto it = m.gate_errors.find(key_of(gates[i]));
    if (it != m.gate_errors.end() && it->second[0] < 1.0) cdfs[i] = cumulative(it->second);
  }
  // readout flip probability for measured position k given the ideal bit
  std::vector<std::array<double, 2>> flip(width, {0.0, 0.0});
  for (std::size_t k = 0; k < width; ++k) {
    auto it = m.readout.find(meas[k]);
    if (it != m.readout.end()) flip[k] = {it->second[1], it->second[2]};
  }

  const StateVector start = input ? *input : StateVector(c.n_qubits());
  require(start.n_qubits() == c.n_qubits(), ErrorCode::DimensionMismatch,
          "input state width differs from the circuit");
  // ideal checkpoints every `stride` gates, bounded to ~2^22 stored amplitudes
  const std::size_t budget = std::size_t{1} << 22;
  const std::size_t per = std::max<std::size_t>(1, budget / start.dim());
  const std::size_t stride = std::max<std::size_t>(1, (gates.size() + per - 1) / per);
  std::vector<StateVector> checkpoints;
  StateVector ideal = start;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (i % stride == 0) checkpoints.push_back(ideal);
    ideal.apply_gate(gates[i]);
  }
  const std::vector<double> ideal_cdf = cumulative(marginal_probabilities(ideal, meas));

  const std::uint64_t chunks = (shots + kShotChunk - 1) / kShotChunk;
  std::vector<std::vector<std::uint64_t>> partial(chunks);
  parallel_for(chunks, [&](std::size_t k) {
    Rng r = rng.split(k);
    std::vector<std::uint64_t> tally(ideal_cdf.size(), 0);
    const std::uint64_t begin = k * kShotChunk;
    const std::uint64_t end = std::min(shots, begin + kShotChunk);
    std::vector<std::pair<std::size_t, int>> errors;
    for (std::uint64_t t = begin; t < end; ++t) {
      errors.clear();
      for (std::size_t i = 0; i < gates.size(); ++i) {
        if (cdfs[i].empty()) continue;
        const std::size_t op = sample_index(cdfs[i], r.uniform());
        if (op != 0) errors.emplace_back(i, static_cast<int>(op));
      }
      std::size_t outcome;
      if (errors.empty()) {
        outcome = sample_index(ideal_cdf, r.uniform());
      } else {
        const std::size_t first = errors.front().first;
        const std::size_t cp = first / stride;
        StateVector s = checkpoints[cp];
        std::size_t next_err = 0;
        for (std::size_t i = cp * stride; i < gates.size(); ++i) {
          s.apply_gate(gates[i]);
          while (next_err < errors.size() && errors[next_err].first == i)
            apply_error(s, gates[i], errors[next_err++].second);
        }
        outcome = sample_index(cumulative(marginal_probabilities(s, meas)), r.uniform());
      }
      for (std::size_t b = 0; b < width; ++b) {
        const std::size_t bit = (outcome >> (width - 1 - b)) & 1u;
        const double pf = flip[b][bit];
        if (pf > 0.0 && r.uniform() < pf) outcome ^= std::size_t{1} << (width - 1 - b);
      }
      ++tally[outcome];
    }
    partial[k] = std::move(tally);
  });
  CountsHistogram h;
  h.shots = shots;
  for (std::size_t o = 0; o < ideal_cdf.size(); ++o) {
    std::uint64_t n = 0;
    for (const auto& t : partial) n += t[o];
    if (n) h.counts[outcome_bits(o, width)] = n;
  }
  return h;
}

NoiseModel synth_model(const CouplingMap& coupling, double base_1q, double base_2q,
                       double readout_rate, Rng& rng) {
  for (double r : {base_1q, base_2q, readout_rate})
    require(r >= 0.0 && r < 0.5, ErrorCode::InvalidArgument, "rates must lie in [0, 0.5)");
  auto jitter = [&](double base) { return base * (1.0 + 0.2 * (2.0 * rng.uniform() - 1.0)); };
  NoiseModel m;
  for (int q = 0; q < coupling.n_qubits(); ++q) {
    const double e = jitter(base_1q);
    for (GateKind k : {GateKind::U2, GateKind::H, GateKind::X})
      m.gate_errors[{k, q, -1}] = {1.0 - e, e / 3, e / 3, e / 3};
    const double e3 = std::min(2.0 * e, 0.75);
    m.gate_errors[{GateKind::U3, q, -1}] = {1.0 - e3, e3 / 3, e3 / 3, e3 / 3};
    m.readout[q] = {1.0 - readout_rate, readout_rate, readout_rate, 1.0 - readout_rate};
  }
  for (auto [a, b] : coupling.edges()) {
    const double e = std::min(jitter(base_2q), 0.9);
    std::vector<double> p(16, e / 15);
    p[0] = 1.0 - e;
    m.gate_errors[{GateKind::CNOT, a, b}] = p;
  }
  return m;
}

}  // namespace racbem
