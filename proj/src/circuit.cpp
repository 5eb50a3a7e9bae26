#include "racbem/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "racbem/error.hpp"

namespace racbem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::CapExceeded: return "cap_exceeded";
    case ErrorCode::DegeneratePostselection: return "degenerate_postselection";
    case ErrorCode::NonConvergence: return "non_convergence";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

const char* gate_kind_name(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::U1: return "U1";
    case GateKind::U2: return "U2";
    case GateKind::U3: return "U3";
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::Sdg: return "Sdg";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
  for (GateKind k : kAllGateKinds)
    if (name == gate_kind_name(k)) return k;
  fail(ErrorCode::Parse, "unknown gate kind '" + name + "'");
}

int gate_angle_count(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::U1: return 1;
    case GateKind::U2: return 2;
    case GateKind::U3: return 3;
    default: return 0;
  }
}

double reduce_angle(double angle) {
  require(std::isfinite(angle), ErrorCode::InvalidArgument, "non-finite gate angle");
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Gate Gate::u1(int q, double lambda) {
  return Gate{GateKind::U1, {reduce_angle(lambda), 0, 0}, {q, -1}};
}
Gate Gate::u2(int q, double phi, double lambda) {
  return Gate{GateKind::U2, {reduce_angle(phi), reduce_angle(lambda), 0}, {q, -1}};
}
Gate Gate::u3(int q, double theta, double phi, double lambda) {
  return Gate{GateKind::U3,
              {reduce_angle(theta), reduce_angle(phi), reduce_angle(lambda)},
              {q, -1}};
}
Gate Gate::x(int q) { return Gate{GateKind::X, {}, {q, -1}}; }
Gate Gate::h(int q) { return Gate{GateKind::H, {}, {q, -1}}; }
Gate Gate::t(int q) { return Gate{GateKind::T, {}, {q, -1}}; }
Gate Gate::sdg(int q) { return Gate{GateKind::Sdg, {}, {q, -1}}; }
Gate Gate::cnot(int control, int target) {
  require(control != target, ErrorCode::InvalidArgument, "CNOT control equals target");
  return Gate{GateKind::CNOT, {}, {control, target}};
}

Gate Gate::inverse() const {
  const double pi = std::numbers::pi;
  const int q = qubits[0];
  switch (kind) {
    case GateKind::U1: return u1(q, -angles[0]);
    // U2(p,l)^dag = U2(pi-l, pi-p), U3(t,p,l)^dag = U3(t, pi-l, pi-p); both exact.
    case GateKind::U2: return u2(q, pi - angles[1], pi - angles[0]);
    case GateKind::U3: return u3(q, angles[0], pi - angles[2], pi - angles[1]);
    case GateKind::T: return u1(q, -pi / 4);
    case GateKind::Sdg: return u1(q, pi / 2);
    default: return *this;
  }
}

GateMatrix gate_unitary(const Gate& g) {
  using std::polar;
  const double s2 = 1.0 / std::numbers::sqrt2;
  const auto& a = g.angles;
  switch (g.kind) {
    case GateKind::U1:
      return {1.0, 0.0, 0.0, polar(1.0, a[0])};
    case GateKind::U2:
      return {s2, -s2 * polar(1.0, a[1]), s2 * polar(1.0, a[0]),
              s2 * polar(1.0, a[0] + a[1])};
    case GateKind::U3: {
      const double c = std::cos(a[0] / 2), s = std::sin(a[0] / 2);
      return {c, -s * polar(1.0, a[2]), s * polar(1.0, a[1]),
              c * polar(1.0, a[1] + a[2])};
    }
    case GateKind::X:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::H:
      return {s2, s2, s2, -s2};
    case GateKind::T:
      return {1.0, 0.0, 0.0, polar(1.0, std::numbers::pi / 4)};
    case GateKind::Sdg:
      return {1.0, 0.0, 0.0, Complex(0.0, -1.0)};
    case GateKind::CNOT: {
      GateMatrix m(16, 0.0);
      m[0 * 4 + 0] = 1.0;
      m[1 * 4 + 1] = 1.0;
      m[2 * 4 + 3] = 1.0;
      m[3 * 4 + 2] = 1.0;
      return m;
    }
  }
  fail(ErrorCode::Internal, "unhandled gate kind");
}

QuantumCircuit::QuantumCircuit(int n_qubits, std::string name)
    : n_qubits_(n_qubits), name_(std::move(name)) {
  require(n_qubits >= 0, ErrorCode::InvalidArgument, "negative qubit count");
}

void QuantumCircuit::add_global_phase(double phase) {
  global_phase_ = reduce_angle(global_phase_ + phase);
}

void QuantumCircuit::check_gate(const Gate& g) const {
  for (int q : g.operands())
    require(q >= 0 && q < n_qubits_, ErrorCode::InvalidArgument,
            "gate operand " + std::to_string(q) + " out of range for " +
                std::to_string(n_qubits_) + " qubits");
  if (g.kind == GateKind::CNOT)
    require(g.qubits[0] != g.qubits[1], ErrorCode::InvalidArgument,
            "CNOT control equals target");
}

void QuantumCircuit::add_layer(Layer layer) {
  std::vector<char> used(static_cast<std::size_t>(n_qubits_), 0);
  for (const Gate& g : layer) {
    check_gate(g);
    for (int q : g.operands()) {
      require(!used[static_cast<std::size_t>(q)], ErrorCode::InvalidArgument,
              "qubit " + std::to_string(q) + " appears twice in one layer");
      used[static_cast<std::size_t>(q)] = 1;
    }
  }
  layers_.push_back(std::move(layer));
}

void QuantumCircuit::append(const Gate& g) { add_layer(Layer{g}); }

void QuantumCircuit::append_circuit(const QuantumCircuit& other,
                                    std::span<const int> qubit_map) {
  require(static_cast<int>(qubit_map.size()) == other.n_qubits(),
          ErrorCode::DimensionMismatch, "qubit map size differs from circuit width");
  for (const Layer& layer : other.layers()) {
    Layer mapped;
    mapped.reserve(layer.size());
    for (Gate g : layer) {
      for (int i = 0; i < g.arity(); ++i)
        g.qubits[static_cast<std::size_t>(i)] =
            qubit_map[static_cast<std::size_t>(g.qubits[static_cast<std::size_t>(i)])];
      mapped.push_back(g);
    }
    add_layer(std::move(mapped));
  }
  add_global_phase(other.global_phase());
}

void QuantumCircuit::append_circuit(const QuantumCircuit& other, int offset) {
  std::vector<int> map(static_cast<std::size_t>(other.n_qubits()));
  for (int q = 0; q < other.n_qubits(); ++q) map[static_cast<std::size_t>(q)] = q + offset;
  append_circuit(other, map);
}

std::size_t QuantumCircuit::gate_total() const noexcept {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.size();
  return n;
}

QuantumCircuit adjoint(const QuantumCircuit& c) {
  QuantumCircuit out(c.n_qubits(), c.name().empty() ? std::string{} : c.name() + "_dg");
  for (auto it = c.layers().rbegin(); it != c.layers().rend(); ++it) {
    Layer inv;
    inv.reserve(it->size());
    for (const Gate& g : *it) inv.push_back(g.inverse());
    out.add_layer(std::move(inv));
  }
  out.add_global_phase(-c.global_phase());
  return out;
}

CouplingMap::CouplingMap(int n_qubits, std::vector<std::pair<int, int>> edges)
    : n_qubits_(n_qubits), edges_(std::move(edges)) {
  require(n_qubits >= 0, ErrorCode::InvalidArgument, "negative qubit count");
  for (auto [a, b] : edges_) {
    require(a >= 0 && b >= 0 && a < n_qubits && b < n_qubits, ErrorCode::InvalidArgument,
            "coupling edge endpoint out of range");
    require(a != b, ErrorCode::InvalidArgument, "coupling edge is a self loop");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

CouplingMap CouplingMap::symmetric(int n_qubits,
                                   const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::pair<int, int>> e;
  for (auto [a, b] : pairs) {
    e.emplace_back(a, b);
    e.emplace_back(b, a);
  }
  return CouplingMap(n_qubits, std::move(e));
}

CouplingMap CouplingMap::linear(int n_qubits) {
  std::vector<std::pair<int, int>> p;
  for (int q = 0; q + 1 < n_qubits; ++q) p.emplace_back(q, q + 1);
  return symmetric(n_qubits, p);
}

bool CouplingMap::has_edge(int control, int target) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(control, target));
}

CouplingMap CouplingMap::induced(std::span<const int> physical) const {
  std::vector<int> logical(static_cast<std::size_t>(n_qubits_), -1);
  for (std::size_t k = 0; k < physical.size(); ++k) {
    const int p = physical[k];
    require(p >= 0 && p < n_qubits_, ErrorCode::InvalidArgument,
            "induced qubit out of range");
    require(logical[static_cast<std::size_t>(p)] < 0, ErrorCode::InvalidArgument,
            "induced qubit listed twice");
    logical[static_cast<std::size_t>(p)] = static_cast<int>(k);
  }
  std::vector<std::pair<int, int>> e;
  for (auto [a, b] : edges_) {
    const int la = logical[static_cast<std::size_t>(a)];
    const int lb = logical[static_cast<std::size_t>(b)];
    if (la >= 0 && lb >= 0) e.emplace_back(la, lb);
  }
  return CouplingMap(static_cast<int>(physical.size()), std::move(e));
}

CouplingMap bundled_coupling(const std::string& name) {
  if (name == "t5") return CouplingMap::symmetric(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
  if (name == "ladder15") {
    std::vector<std::pair<int, int>> p;
    for (int i = 0; i < 7; ++i) p.emplace_back(i, i + 1);
    for (int i = 8; i < 14; ++i) p.emplace_back(i, i + 1);
    p.emplace_back(7, 8);
    for (int i = 0; i < 7; ++i) p.emplace_back(i, 14 - i);
    return CouplingMap::symmetric(15, p);
  }
  fail(ErrorCode::InvalidArgument, "unknown bundled coupling map '" + name + "'");
}

CouplingMap device_coupling(int n_total) {
  require(n_total >= 1, ErrorCode::InvalidArgument, "device needs at least one qubit");
  if (n_total <= 5) {
    std::vector<int> sub(static_cast<std::size_t>(n_total));
    for (int i = 0; i < n_total; ++i) sub[static_cast<std::size_t>(i)] = i;
    return bundled_coupling("t5").induced(sub);
  }
  require(n_total <= 15, ErrorCode::CapExceeded, "no bundled device wider than 15 qubits");
  std::vector<int> sub(static_cast<std::size_t>(n_total));
  for (int i = 0; i < n_total; ++i) sub[static_cast<std::size_t>(i)] = i;
  return bundled_coupling("ladder15").induced(sub);
}

CouplingMap racbem_coupling(int n_system) {
  require(n_system >= 1, ErrorCode::InvalidArgument, "n_system must be positive");
  const CouplingMap full = device_coupling(n_system + 2);
  std::vector<int> sub;
  for (int i = 1; i <= n_system + 1; ++i) sub.push_back(i);
  return full.induced(sub);
}

std::vector<Violation> validate(const QuantumCircuit& c, const CouplingMap& map,
                                std::span<const int> layout) {
  if (layout.empty())
    require(c.n_qubits() <= map.n_qubits(), ErrorCode::DimensionMismatch,
            "circuit has more qubits than the coupling map");
  else
    require(static_cast<int>(layout.size()) == c.n_qubits(), ErrorCode::DimensionMismatch,
            "layout size differs from circuit width");
  auto phys = [&](int q) { return layout.empty() ? q : layout[static_cast<std::size_t>(q)]; };
  std::vector<Violation> out;
  for (std::size_t k = 0; k < c.layers().size(); ++k) {
    for (const Gate& g : c.layers()[k]) {
      if (g.kind != GateKind::CNOT) continue;
      const int a = phys(g.qubits[0]), b = phys(g.qubits[1]);
      if (!map.has_edge(a, b))
        out.push_back({k, g,
                       "CNOT " + std::to_string(a) + "->" + std::to_string(b) +
                           " is not a coupling edge"});
    }
  }
  return out;
}

GateCount gate_count(const QuantumCircuit& c) {
  GateCount gc;
  for (const Layer& l : c.layers())
    for (const Gate& g : l) {
      ++gc.by_kind[g.kind];
      ++gc.total;
    }
  return gc;
}

std::string to_text(const QuantumCircuit& c) {
  std::ostringstream os;
  os << "# racbem circuit v1; qubit 0 is the most significant bit of the state index\n";
  os << "QUBITS " << c.n_qubits() << "\n";
  if (!c.name().empty()) os << "NAME " << c.name() << "\n";
  if (c.global_phase() != 0.0) os << "PHASE " << fmt_double(c.global_phase()) << "\n";
  for (std::size_t k = 0; k < c.layers().size(); ++k) {
    os << "LAYER " << k << "\n";
    for (const Gate& g : c.layers()[k]) {
      os << "GATE " << gate_kind_name(g.kind);
      for (int q : g.operands()) os << ' ' << q;
      for (int i = 0; i < gate_angle_count(g.kind); ++i)
        os << ' ' << fmt_double(g.angles[static_cast<std::size_t>(i)]);
      os << "\n";
    }
  }
  return os.str();
}

QuantumCircuit circuit_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  QuantumCircuit c;
  bool have_qubits = false;
  Layer current;
  bool in_layer = false;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::Parse, "circuit text line " + std::to_string(lineno) + ": " + why);
  };
  auto flush = [&] {
    if (in_layer) c.add_layer(std::move(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "QUBITS") {
      int n = -1;
      if (!(ls >> n) || n < 0) bad("bad QUBITS");
      std::string name = c.name();
      double phase = c.global_phase();
      c = QuantumCircuit(n, name);
      c.add_global_phase(phase);
      have_qubits = true;
    } else if (key == "NAME") {
      std::string rest;
      std::getline(ls >> std::ws, rest);
      c.set_name(rest);
    } else if (key == "PHASE") {
      double p;
      if (!(ls >> p)) bad("bad PHASE");
      c.add_global_phase(p);
    } else if (key == "LAYER") {
      if (!have_qubits) bad("LAYER before QUBITS");
      flush();
      in_layer = true;
    } else if (key == "GATE") {
      if (!in_layer) bad("GATE outside a layer");
      std::string kname;
      ls >> kname;
      Gate g;
      g.kind = gate_kind_from_name(kname);
      for (int i = 0; i < g.arity(); ++i)
        if (!(ls >> g.qubits[static_cast<std::size_t>(i)])) bad("missing operand");
      for (int i = 0; i < gate_angle_count(g.kind); ++i) {
        double a;
        if (!(ls >> a)) bad("missing angle");
        g.angles[static_cast<std::size_t>(i)] = reduce_angle(a);
      }
      std::string extra;
      if (ls >> extra) bad("trailing tokens");
      current.push_back(g);
    } else {
      bad("unknown record '" + key + "'");
    }
  }
  if (!have_qubits) fail(ErrorCode::Parse, "circuit text has no QUBITS record");
  flush();
  return c;
}

}  // namespace racbem
