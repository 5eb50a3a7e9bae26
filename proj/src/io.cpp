#include "racbem/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "racbem/error.hpp"

namespace racbem {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::Schema, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const CouplingMap& m) {
  Json edges = Json::array();
  for (auto [a, b] : m.edges()) edges.push_back({a, b});
  return Json{{"n_qubits", m.n_qubits()}, {"edges", edges}};
}

CouplingMap coupling_from_json(const Json& j) {
  const int n = get<int>(j, "n_qubits");
  std::vector<std::pair<int, int>> e;
  for (const auto& pair : get<Json>(j, "edges")) {
    if (!pair.is_array() || pair.size() != 2)
      fail(ErrorCode::Schema, "coupling edge must be a [control, target] pair");
    e.emplace_back(pair[0].get<int>(), pair[1].get<int>());
  }
  return CouplingMap(n, std::move(e));
}

Json to_json(const QuantumCircuit& c) {
  Json layers = Json::array();
  for (const Layer& l : c.layers()) {
    Json gates = Json::array();
    for (const Gate& g : l) {
      Json q = Json::array();
      for (int x : g.operands()) q.push_back(x);
      Json a = Json::array();
      for (int i = 0; i < gate_angle_count(g.kind); ++i)
        a.push_back(g.angles[static_cast<std::size_t>(i)]);
      gates.push_back(Json{{"kind", gate_kind_name(g.kind)}, {"qubits", q}, {"angles", a}});
    }
    layers.push_back(gates);
  }
  return Json{{"bit_order", "qubit 0 is the most significant bit"},
              {"n_qubits", c.n_qubits()},
              {"name", c.name()},
              {"global_phase", c.global_phase()},
              {"layers", layers}};
}

QuantumCircuit circuit_from_json(const Json& j) {
  QuantumCircuit c(get<int>(j, "n_qubits"), j.value("name", std::string{}));
  c.add_global_phase(j.value("global_phase", 0.0));
  for (const auto& layer : get<Json>(j, "layers")) {
    Layer l;
    for (const auto& jg : layer) {
      Gate g;
      g.kind = gate_kind_from_name(get<std::string>(jg, "kind"));
      const auto q = get<std::vector<int>>(jg, "qubits");
      if (static_cast<int>(q.size()) != g.arity())
        fail(ErrorCode::Schema, "gate operand count does not match its kind");
      for (std::size_t i = 0; i < q.size(); ++i) g.qubits[i] = q[i];
      const auto a = jg.contains("angles") ? jg.at("angles").get<std::vector<double>>()
                                           : std::vector<double>{};
      if (static_cast<int>(a.size()) != gate_angle_count(g.kind))
        fail(ErrorCode::Schema, "gate angle count does not match its kind");
      for (std::size_t i = 0; i < a.size(); ++i) g.angles[i] = reduce_angle(a[i]);
      l.push_back(g);
    }
    c.add_layer(std::move(l));
  }
  return c;
}

Json to_json(const CountsHistogram& h) {
  Json counts = Json::object();
  for (const auto& [k, v] : h.counts) counts[k] = v;
  return Json{{"shots", h.shots}, {"counts", counts}};
}

CountsHistogram counts_from_json(const Json& j) {
  CountsHistogram h;
  h.shots = get<std::uint64_t>(j, "shots");
  std::uint64_t total = 0;
  const Json counts = get<Json>(j, "counts");
  for (const auto& [k, v] : counts.items()) {
    h.counts[k] = v.get<std::uint64_t>();
    total += h.counts[k];
  }
  if (total != h.shots) fail(ErrorCode::Schema, "histogram counts do not sum to shots");
  return h;
}

Json to_json(const ChebPoly& p) {
  Json j{{"parity", parity_name(p.parity)}, {"scale", p.scale}, {"cheb_coeffs", p.coeffs}};
  if (p.lo != -1.0 || p.hi != 1.0) j["domain"] = {p.lo, p.hi};
  return j;
}

ChebPoly poly_from_json(const Json& j) {
  ChebPoly p;
  p.parity = parity_from_name(get<std::string>(j, "parity"));
  p.scale = j.value("scale", 1.0);
  p.coeffs = get<std::vector<double>>(j, "cheb_coeffs");
  if (p.coeffs.empty()) fail(ErrorCode::Schema, "polynomial has no coefficients");
  if (j.contains("domain")) {
    const auto d = j.at("domain").get<std::vector<double>>();
    if (d.size() != 2 || !(d[0] < d[1])) fail(ErrorCode::Schema, "bad polynomial domain");
    p.lo = d[0];
    p.hi = d[1];
  }
  return p;
}

Json to_json(const PhaseFactors& p) {
  return Json{{"convention", convention_name(p.convention)},
              {"values", p.values},
              {"symmetric", p.symmetric},
              {"residual", p.residual}};
}

PhaseFactors phases_from_json(const Json& j) {
  PhaseFactors p;
  p.convention = convention_from_name(get<std::string>(j, "convention"));
  p.values = get<std::vector<double>>(j, "values");
  if (p.values.empty()) fail(ErrorCode::Schema, "phase sequence is empty");
  p.symmetric = j.value("symmetric", false);
  p.residual = j.value("residual", 0.0);
  return p;
}

Json to_json(const NoiseModel& m) {
  Json ge = Json::array();
  for (const auto& [k, p] : m.gate_errors) {
    Json q = k.q1 >= 0 ? Json{k.q0, k.q1} : Json{k.q0};
    ge.push_back(Json{{"kind", gate_kind_name(k.kind)}, {"qubits", q}, {"probs", p}});
  }
  Json ro = Json::array();
  for (const auto& [q, r] : m.readout)
    ro.push_back(Json{{"qubit", q}, {"matrix", {{r[0], r[1]}, {r[2], r[3]}}}});
  return Json{{"schema", 1}, {"gate_errors", ge}, {"readout", ro}};
}

NoiseModel noise_from_json(const Json& j) {
  if (get<int>(j, "schema") != 1) fail(ErrorCode::Schema, "unsupported noise schema version");
  NoiseModel m;
  for (const auto& e : j.value("gate_errors", Json::array())) {
    NoiseKey k;
    k.kind = gate_kind_from_name(get<std::string>(e, "kind"));
    const auto q = get<std::vector<int>>(e, "qubits");
    const std::size_t want = k.kind == GateKind::CNOT ? 2 : 1;
    if (q.size() != want) fail(ErrorCode::Schema, "noise entry operand count mismatch");
    k.q0 = q[0];
    k.q1 = want == 2 ? q[1] : -1;
    m.gate_errors[k] = get<std::vector<double>>(e, "probs");
  }
  for (const auto& r : j.value("readout", Json::array())) {
    const auto mat = get<std::vector<std::vector<double>>>(r, "matrix");
    if (mat.size() != 2 || mat[0].size() != 2 || mat[1].size() != 2)
      fail(ErrorCode::Schema, "readout matrix must be 2x2");
    m.readout[get<int>(r, "qubit")] = {mat[0][0], mat[0][1], mat[1][0], mat[1][1]};
  }
  m.validate();
  return m;
}

Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      data.push_back(m(i, k).real());
      data.push_back(m(i, k).imag());
    }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const Json& j) {
  const auto r = get<Eigen::Index>(j, "rows");
  const auto c = get<Eigen::Index>(j, "cols");
  const auto d = get<std::vector<double>>(j, "data");
  if (r < 0 || c < 0 || d.size() != static_cast<std::size_t>(2 * r * c))
    fail(ErrorCode::Schema, "matrix data length does not match its shape");
  CMatrix m(r, c);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k, p += 2) m(i, k) = {d[p], d[p + 1]};
  return m;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("JSON parse error: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out.flush()) fail(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorCode::Io, "cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

}  // namespace racbem
