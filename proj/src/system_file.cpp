#include "swdelay/system_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "swdelay/errors.hpp"

namespace swdelay {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Matrix matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.empty()) fail(index(path, i), "expected a non-empty list of numbers");
    if (i > 0 && row.size() != rows.front().size()) {
      fail(index(path, i), "row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(rows.front().size()));
    }
    std::vector<double> values;
    for (std::size_t c = 0; c < row.size(); ++c) values.push_back(number(row[c], index(index(path, i), c)));
    rows.push_back(std::move(values));
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DiscreteTerm> discrete_terms(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of {delay, A}");
  std::vector<DiscreteTerm> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index(path, i);
    terms.push_back({number(field(j[i], p, "delay"), join(p, "delay")), matrix(field(j[i], p, "A"), join(p, "A"))});
  }
  return terms;
}

DistributedKernel kernel(const json& j, const std::string& path) {
  const json& grid = field(j, path, "grid");
  const json& values = field(j, path, "values");
  if (!grid.is_array()) fail(join(path, "grid"), "expected a list of numbers");
  if (!values.is_array()) fail(join(path, "values"), "expected a list of matrices");
  if (grid.size() != values.size()) {
    fail(path, "grid has " + std::to_string(grid.size()) + " points but values has " +
                   std::to_string(values.size()));
  }
  std::vector<double> g;
  std::vector<Matrix> v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    g.push_back(number(grid[i], index(join(path, "grid"), i)));
    v.push_back(matrix(values[i], index(join(path, "values"), i)));
  }
  try {
    return DistributedKernel(std::move(g), std::move(v));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

DelayMeasure measure(const json& j, const std::string& path) {
  std::vector<DiscreteTerm> terms;
  if (j.contains("discrete")) terms = discrete_terms(j["discrete"], join(path, "discrete"));
  std::optional<DistributedKernel> k;
  if (j.contains("kernel") && !j["kernel"].is_null()) k = kernel(j["kernel"], join(path, "kernel"));
  try {
    return DelayMeasure(std::move(terms), std::move(k));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

void write_measure(json& out, const DelayMeasure& m) {
  json terms = json::array();
  for (const DiscreteTerm& t : m.jumps()) terms.push_back({{"delay", t.delay}, {"A", to_json(t.a)}});
  out["discrete"] = std::move(terms);
  if (m.kernel()) {
    json values = json::array();
    for (const Matrix& v : m.kernel()->values()) values.push_back(to_json(v));
    const auto grid = m.kernel()->grid();
    out["kernel"] = {{"grid", std::vector<double>(grid.begin(), grid.end())}, {"values", std::move(values)}};
  }
}

DelaySubsystem subsystem(const json& j, const std::string& path) {
  Matrix a0 = matrix(field(j, path, "A0"), join(path, "A0"));
  DelayMeasure eta = measure(j, path);
  try {
    return DelaySubsystem(std::move(a0), std::move(eta));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

json subsystem_json(const DelaySubsystem& s) {
  json out = {{"A0", to_json(s.a0())}};
  write_measure(out, s.measure());
  return out;
}

StructureQuadruple quadruple(const json& j, const std::string& path) {
  return {matrix(field(j, path, "D0"), join(path, "D0")), matrix(field(j, path, "E0"), join(path, "E0")),
          matrix(field(j, path, "D1"), join(path, "D1")), matrix(field(j, path, "E1"), join(path, "E1"))};
}

json quadruple_json(const StructureQuadruple& q) {
  return {{"D0", to_json(q.d0)}, {"E0", to_json(q.e0)}, {"D1", to_json(q.d1)}, {"E1", to_json(q.e1)}};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t dimension(const json& doc) {
  const double n = number(field(doc, "", "n"), "n");
  if (!(n >= 1.0) || n != static_cast<double>(static_cast<std::size_t>(n))) fail("n", "expected a positive integer");
  return static_cast<std::size_t>(n);
}

}  // namespace

SystemFile parse_system_file(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("top level: expected an object");
  if (doc.contains("version")) {
    const json& v = doc["version"];
    if (!v.is_number_integer() || v.get<int>() != kSystemFileVersion) {
      fail("version", "unsupported version, expected " + std::to_string(kSystemFileVersion));
    }
  }
  const std::size_t n = dimension(doc);
  std::optional<double> h;
  if (doc.contains("h") && !doc["h"].is_null()) h = number(doc["h"], "h");

  const json& subs = field(doc, "", "subsystems");
  if (!subs.is_array() || subs.empty()) fail("subsystems", "expected a non-empty list");
  std::vector<DelaySubsystem> list;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const std::string p = index("subsystems", k);
    list.push_back(subsystem(subs[k], p));
    if (list.back().dim() != n) fail(join(p, "A0"), "dimension differs from n = " + std::to_string(n));
  }
  std::optional<SwitchedDelaySystem> sys;
  try {
    sys.emplace(std::move(list), h);
  } catch (const Error& e) {
    fail("subsystems", e.what());
  }

  SystemFile file{std::move(*sys), std::nullopt, std::nullopt, std::nullopt};
  if (doc.contains("perturbation") && !doc["perturbation"].is_null()) {
    const json& pert = doc["perturbation"];
    if (!pert.is_array() || pert.size() != subs.size()) {
      fail("perturbation", "expected one {D0, E0, D1, E1} entry per subsystem");
    }
    std::vector<StructureQuadruple> quads;
    for (std::size_t k = 0; k < pert.size(); ++k) quads.push_back(quadruple(pert[k], index("perturbation", k)));
    try {
      file.perturbation.emplace(std::move(quads), n);
    } catch (const Error& e) {
      fail("perturbation", e.what());
    }
  }
  if (doc.contains("bound") && !doc["bound"].is_null()) {
    file.bound = subsystem(doc["bound"], "bound");
    if (file.bound->dim() != n) fail("bound.A0", "dimension differs from n = " + std::to_string(n));
  }
  if (doc.contains("bound_perturbation") && !doc["bound_perturbation"].is_null()) {
    file.bound_perturbation = quadruple(doc["bound_perturbation"], "bound_perturbation");
  }
  return file;
}

SystemFile load_system_file(const std::filesystem::path& path) { return parse_system_file(read_file(path)); }

std::string serialize_system_file(const SystemFile& file) {
  json doc;
  doc["version"] = kSystemFileVersion;
  doc["n"] = file.system.dim();
  doc["h"] = file.system.h();
  json subs = json::array();
  for (const DelaySubsystem& s : file.system.subsystems()) subs.push_back(subsystem_json(s));
  doc["subsystems"] = std::move(subs);
  if (file.perturbation) {
    json pert = json::array();
    for (const StructureQuadruple& q : file.perturbation->quadruples()) pert.push_back(quadruple_json(q));
    doc["perturbation"] = std::move(pert);
  }
  if (file.bound) doc["bound"] = subsystem_json(*file.bound);
  if (file.bound_perturbation) doc["bound_perturbation"] = quadruple_json(*file.bound_perturbation);
  return doc.dump(2) + "\n";
}

Disturbance parse_disturbance(std::string_view text) {
  const json doc = parse_json(text);
  const json& list = field(doc, "", "disturbance");
  if (!list.is_array() || list.empty()) fail("disturbance", "expected a non-empty list");
  Disturbance d;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = index("disturbance", k);
    Matrix delta0 = matrix(field(list[k], p, "Delta"), join(p, "Delta"));
    DelayMeasure delta1;
    if (list[k].contains("delta") && !list[k]["delta"].is_null()) delta1 = measure(list[k]["delta"], join(p, "delta"));
    d.push_back({std::move(delta0), std::move(delta1)});
  }
  return d;
}

Disturbance load_disturbance(const std::filesystem::path& path) { return parse_disturbance(read_file(path)); }

std::string serialize_disturbance(const Disturbance& d) {
  json list = json::array();
  for (const SubsystemDisturbance& sd : d) {
    json delta = json::object();
    write_measure(delta, sd.delta1);
    list.push_back({{"Delta", to_json(sd.delta0)}, {"delta", std::move(delta)}});
  }
  return json{{"disturbance", std::move(list)}}.dump(2) + "\n";
}

}  // namespace swdelay
