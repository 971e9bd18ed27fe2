#include "schurdil/serialize.hpp"

#include <fstream>
#include <sstream>

namespace schurdil {

namespace {

Complex scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("expected a number or a [re, im] pair, got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

const char* shift_name(ShiftMode m) {
  return m == ShiftMode::Joint ? "joint" : "per_multiplier";
}

ShiftMode shift_from_name(const std::string& s) {
  if (s == "joint") return ShiftMode::Joint;
  if (s == "per_multiplier") return ShiftMode::PerMultiplier;
  throw ParseError("unknown shift mode '" + s + "'");
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = scalar_from_json(j[r][c]);
    }
  }
  return m;
}

Json symbol_to_json(const SchurSymbol& s) {
  return Json{{"n", s.n()}, {"m", matrix_to_json(s.matrix())}};
}

SchurSymbol symbol_from_json(const Json& j) {
  const ComplexMatrix m = matrix_from_json(j.is_object() ? field(j, "m") : j);
  if (m.rows() != m.cols()) throw ParseError("symbol matrix must be square");
  if (j.is_object() && j.contains("n") && get_as<std::size_t>(j, "n") != static_cast<std::size_t>(m.rows())) {
    throw ParseError("symbol field 'n' disagrees with the matrix size");
  }
  try {
    return SchurSymbol(m);
  } catch (const Error& e) {
    throw ParseError(std::string("symbol: ") + e.what());
  }
}

Json witness_to_json(const UnitaryWitness& w) {
  Json v = Json::array();
  for (const auto& vi : w.v) v.push_back(matrix_to_json(vi));
  return Json{{"n", w.n}, {"d", w.d}, {"v", std::move(v)}, {"residual", w.residual}};
}

UnitaryWitness witness_from_json(const Json& j) {
  UnitaryWitness w;
  w.d = get_as<std::size_t>(j, "d");
  const Json& v = field(j, "v");
  if (!v.is_array() || v.empty()) throw ParseError("witness field 'v' must be a non-empty array");
  for (const auto& item : v) {
    ComplexMatrix vi = matrix_from_json(item);
    if (vi.rows() != static_cast<Eigen::Index>(w.d) || vi.cols() != vi.rows()) {
      throw ParseError("witness unitary is not d x d");
    }
    w.v.push_back(std::move(vi));
  }
  w.n = j.contains("n") ? get_as<std::size_t>(j, "n") : w.v.size();
  if (w.n != w.v.size()) throw ParseError("witness field 'n' disagrees with 'v'");
  w.residual = j.contains("residual") ? get_as<double>(j, "residual") : 0.0;
  return w;
}

Json config_to_json(const SearchConfig& c) {
  return Json{{"d_min", c.d_min},
              {"d_max", c.d_max},
              {"restarts", c.restarts},
              {"max_iters", c.max_iters},
              {"target_residual", c.target_residual},
              {"seed", c.seed},
              {"step_rule", c.step_rule == StepRule::Fixed ? "fixed" : "backtracking"},
              {"fixed_step", c.fixed_step},
              {"diagonal_only", c.diagonal_only}};
}

SearchConfig config_from_json(const Json& j) {
  SearchConfig c;
  c.d_min = get_as<std::size_t>(j, "d_min");
  c.d_max = get_as<std::size_t>(j, "d_max");
  c.restarts = get_as<std::size_t>(j, "restarts");
  c.max_iters = get_as<std::size_t>(j, "max_iters");
  c.target_residual = get_as<double>(j, "target_residual");
  c.seed = get_as<std::uint64_t>(j, "seed");
  const auto rule = get_as<std::string>(j, "step_rule");
  if (rule == "fixed") {
    c.step_rule = StepRule::Fixed;
  } else if (rule == "backtracking") {
    c.step_rule = StepRule::Backtracking;
  } else {
    throw ParseError("unknown step_rule '" + rule + "'");
  }
  c.fixed_step = get_as<double>(j, "fixed_step");
  c.diagonal_only = get_as<bool>(j, "diagonal_only");
  return c;
}

Json validity_to_json(const ValidityReport& r) {
  return Json{{"hermitian", r.hermitian},
              {"psd", r.psd},
              {"unit_diagonal", r.unit_diagonal},
              {"min_eigenvalue", r.min_eigenvalue},
              {"valid", r.valid()}};
}

Json witness_report_to_json(const WitnessReport& r) {
  return Json{{"unitarity_defect", r.unitarity_defect}, {"residual", r.residual}, {"pass", r.pass}};
}

Json dilation_report_to_json(const DilationReport& r) {
  Json per = Json::array();
  for (const auto& [k, dev] : r.per_index) per.push_back(Json{{"k", k}, {"deviation", dev}});
  return Json{{"max_deviation", r.max_deviation},
              {"per_index", std::move(per)},
              {"commutator_norm", r.commutator_norm},
              {"trace_defect", r.trace_defect},
              {"duality_defect", r.duality_defect},
              {"tolerance", r.tolerance},
              {"pass", r.pass}};
}

DilationReport dilation_report_from_json(const Json& j) {
  DilationReport r;
  r.max_deviation = get_as<double>(j, "max_deviation");
  for (const auto& item : field(j, "per_index")) {
    r.per_index[get_as<MultiIndex>(item, "k")] = get_as<double>(item, "deviation");
  }
  r.commutator_norm = get_as<double>(j, "commutator_norm");
  r.trace_defect = get_as<double>(j, "trace_defect");
  r.duality_defect = get_as<double>(j, "duality_defect");
  r.tolerance = get_as<double>(j, "tolerance");
  r.pass = get_as<bool>(j, "pass");
  return r;
}

Json norming_to_json(const NormingPair& pair) {
  return Json{{"p", pair.p},
              {"q", pair.q},
              {"x", matrix_to_json(pair.x)},
              {"y", matrix_to_json(pair.y)},
              {"abs_y_defect", pair.abs_y_defect},
              {"polar_defect", pair.polar_defect}};
}

Json certificate_to_json(const Certificate& c) {
  Json j{{"schema_version", c.schema_version},
         {"tool_version", c.tool_version},
         {"seed", c.seed},
         {"symbol", Json{{"n", c.symbol.rows()}, {"m", matrix_to_json(c.symbol)}}},
         {"witness", witness_to_json(c.witness)},
         {"search_config", config_to_json(c.search_config)},
         {"residual", c.residual},
         {"witness_tolerance", c.witness_tolerance}};
  if (c.dilation) {
    Json d = dilation_report_to_json(c.dilation->report);
    d["depth"] = c.dilation->depth;
    d["shift"] = shift_name(c.dilation->shift);
    j["dilation_report"] = std::move(d);
  }
  return j;
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("certificate must be a JSON object");
  Certificate c;
  c.schema_version = get_as<std::string>(j, "schema_version");
  if (c.schema_version != kCertificateSchema) {
    throw ParseError("unsupported certificate schema '" + c.schema_version + "'");
  }
  c.tool_version = get_as<std::string>(j, "tool_version");
  c.seed = get_as<std::uint64_t>(j, "seed");
  c.symbol = symbol_from_json(field(j, "symbol")).matrix();
  c.witness = witness_from_json(field(j, "witness"));
  c.search_config = config_from_json(field(j, "search_config"));
  c.residual = get_as<double>(j, "residual");
  c.witness_tolerance = get_as<double>(j, "witness_tolerance");
  if (j.contains("dilation_report")) {
    const Json& d = j.at("dilation_report");
    CertificateDilation dil;
    dil.report = dilation_report_from_json(d);
    dil.depth = get_as<std::size_t>(d, "depth");
    dil.shift = shift_from_name(get_as<std::string>(d, "shift"));
    c.dilation = std::move(dil);
  }
  return c;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace schurdil
