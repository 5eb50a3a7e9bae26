#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "racbem/circuit.hpp"
#include "racbem/rng.hpp"

namespace racbem {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kDefaultUnitaryCap = 12;

class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Takes amplitudes as given; length must be a power of two.
  static StateVector from_amplitudes(std::vector<Complex> amps, bool normalized = true);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  std::vector<Complex>& amplitudes() noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  bool unnormalized() const noexcept { return unnormalized_; }
  double norm() const;

  void apply_gate(const Gate& g);
  void apply(const QuantumCircuit& c);
  void apply_global_phase(double phase);

 private:
  int n_ = 0;
  std::vector<Complex> amps_;
  bool unnormalized_ = false;
};

StateVector apply(const QuantumCircuit& c, StateVector s);

/// Column j is the circuit applied to basis state j.
CMatrix circuit_unitary(const QuantumCircuit& c, int cap = kDefaultUnitaryCap);

/// Probability that the m lowest-indexed qubits all read 0 after the circuit.
double success_probability_exact(const QuantumCircuit& c, int m_ancilla,
                                 const StateVector& input);
/// Same quantity for an already evolved state.
double prefix_zero_probability(const StateVector& s, int m_ancilla);

struct CountsHistogram {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;

  std::uint64_t count(const std::string& bits) const {
    auto it = counts.find(bits);
    return it == counts.end() ? 0 : it->second;
  }
  double frequency(const std::string& bits) const {
    return shots ? static_cast<double>(count(bits)) / static_cast<double>(shots) : 0.0;
  }
  friend bool operator==(const CountsHistogram&, const CountsHistogram&) = default;
};

/// Shots are drawn in chunks of this size, each from rng.split(chunk index),
/// so histograms do not depend on the thread count.
inline constexpr std::uint64_t kShotChunk = 256;

/// Marginal outcome probabilities on `measured` (sorted ascending, the first
/// qubit being the most significant bit of the outcome index).
std::vector<double> marginal_probabilities(const StateVector& s,
                                           std::span<const int> measured);
std::string outcome_bits(std::uint64_t outcome, std::size_t width);
/// Sorted, duplicate-free copy of a measured-qubit list; throws when empty.
std::vector<int> normalize_measured(std::span<const int> measured, int n_qubits);

CountsHistogram sample_counts(const QuantumCircuit& c, std::uint64_t shots,
                              std::span<const int> measured, const Rng& rng,
                              const StateVector* input = nullptr);

struct Collapse {
  StateVector state;  // on the remaining qubits, in ascending order
  double probability = 0.0;
};

/// Projects `ancillas` onto |0...0> and renormalizes the rest.
Collapse postselect_collapse(const StateVector& s, std::span<const int> ancillas);

/// Index of the first cumulative value exceeding u (sampling by inversion).
std::size_t sample_index(const std::vector<double>& cdf, double u);
std::vector<double> cumulative(const std::vector<double>& p);

}  // namespace racbem
