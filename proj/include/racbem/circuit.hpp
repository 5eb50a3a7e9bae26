#pragma once

// Gate and circuit data model.
//
// Bit ordering: qubit 0 is the most significant bit of a state index. Ancilla
// qubits sit at the lowest indices, so a block-encoded matrix is literally the
// upper-left block of the circuit unitary.
//
// Single-qubit conventions:
//   U1(l)     = diag(1, e^{il})
//   U2(p, l)  = 1/sqrt2 [[1, -e^{il}], [e^{ip}, e^{i(p+l)}]]
//   U3(t,p,l) = [[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]
// U1(l) equals Rz(l) up to the global phase e^{il/2}, and U3 equals the Euler
// product Rz(p+3pi) Rx(pi/2) Rz(t+pi) Rx(pi/2) Rz(l) up to a global phase.
// Rotations are never themselves controlled here, so those phases stay
// global; circuits that need an exact block (e.g. e^{-i phi Z} = e^{-i phi}
// U1(2 phi)) carry the phase in QuantumCircuit::global_phase.

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace racbem {

using Complex = std::complex<double>;

enum class GateKind { U1, U2, U3, X, H, T, Sdg, CNOT };

inline constexpr std::array<GateKind, 8> kAllGateKinds = {
    GateKind::U1, GateKind::U2, GateKind::U3, GateKind::X,
    GateKind::H,  GateKind::T,  GateKind::Sdg, GateKind::CNOT};

const char* gate_kind_name(GateKind kind) noexcept;
GateKind gate_kind_from_name(const std::string& name);
int gate_angle_count(GateKind kind) noexcept;
inline bool is_two_qubit(GateKind kind) noexcept { return kind == GateKind::CNOT; }

/// Reduces an angle into [0, 2pi).
double reduce_angle(double angle);

struct Gate {
  GateKind kind = GateKind::X;
  std::array<double, 3> angles{};  // only the first gate_angle_count(kind) used
  std::array<int, 2> qubits{0, -1};  // CNOT: {control, target}

  static Gate u1(int q, double lambda);
  static Gate u2(int q, double phi, double lambda);
  static Gate u3(int q, double theta, double phi, double lambda);
  static Gate x(int q);
  static Gate h(int q);
  static Gate t(int q);
  static Gate sdg(int q);
  static Gate cnot(int control, int target);

  int arity() const noexcept { return is_two_qubit(kind) ? 2 : 1; }
  std::span<const int> operands() const noexcept {
    return {qubits.data(), static_cast<std::size_t>(arity())};
  }
  /// The inverse gate; exact at the matrix level (no global phase).
  Gate inverse() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Row-major 2x2 or 4x4 unitary. For CNOT the basis is |control target>.
using GateMatrix = std::vector<Complex>;
GateMatrix gate_unitary(const Gate& g);

using Layer = std::vector<Gate>;

class QuantumCircuit {
 public:
  QuantumCircuit() = default;
  explicit QuantumCircuit(int n_qubits, std::string name = {});

  int n_qubits() const noexcept { return n_qubits_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  double global_phase() const noexcept { return global_phase_; }
  void add_global_phase(double phase);

  /// Appends a parallel layer; throws if an operand repeats or is out of range.
  void add_layer(Layer layer);
  /// Appends a gate in a layer of its own.
  void append(const Gate& g);
  /// Appends every layer of `other`, relabelling qubit q as qubit_map[q].
  void append_circuit(const QuantumCircuit& other, std::span<const int> qubit_map);
  void append_circuit(const QuantumCircuit& other, int offset);

  std::size_t gate_total() const noexcept;

  friend bool operator==(const QuantumCircuit&, const QuantumCircuit&) = default;

 private:
  void check_gate(const Gate& g) const;

  int n_qubits_ = 0;
  std::string name_;
  std::vector<Layer> layers_;
  double global_phase_ = 0.0;
};

/// Layer order reversed, each gate inverted, global phase negated.
QuantumCircuit adjoint(const QuantumCircuit& c);

class CouplingMap {
 public:
  CouplingMap() = default;
  CouplingMap(int n_qubits, std::vector<std::pair<int, int>> edges);

  /// Adds (a,b) and (b,a).
  static CouplingMap symmetric(int n_qubits, const std::vector<std::pair<int, int>>& pairs);
  static CouplingMap linear(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  /// Directed edges, sorted and unique.
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  bool has_edge(int control, int target) const;
  /// Sub-map on `physical` qubits; physical[k] becomes logical qubit k.
  CouplingMap induced(std::span<const int> physical) const;

  friend bool operator==(const CouplingMap&, const CouplingMap&) = default;

 private:
  int n_qubits_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

/// Bundled device-like maps: "t5" (5-qubit T shape, qubit 0 hangs off qubit 1)
/// and "ladder15" (two rails of a 15-qubit ladder joined into one path).
CouplingMap bundled_coupling(const std::string& name);

/// Map for a full QSVT-width register of `n_total` qubits, where qubit 0 is the
/// signal and qubit 1 the block-encoding ancilla.
CouplingMap device_coupling(int n_total);
/// Map for a RACBEM U_A on n_system + 1 qubits (the device map without the
/// signal qubit).
CouplingMap racbem_coupling(int n_system);

struct Violation {
  std::size_t layer = 0;
  Gate gate;
  std::string reason;
};

/// Checks every CNOT against `map` under the logical-to-physical `layout`
/// (identity when empty).
std::vector<Violation> validate(const QuantumCircuit& c, const CouplingMap& map,
                                std::span<const int> layout = {});

struct GateCount {
  std::map<GateKind, std::size_t> by_kind;
  std::size_t total = 0;
};

GateCount gate_count(const QuantumCircuit& c);

/// Line format: a header comment stating the bit order, `QUBITS n`, optional
/// `NAME`, `PHASE`, then `LAYER k` headers each followed by
/// `GATE <kind> <operands...> <angles...>` lines.
std::string to_text(const QuantumCircuit& c);
QuantumCircuit circuit_from_text(const std::string& text);

}  // namespace racbem
