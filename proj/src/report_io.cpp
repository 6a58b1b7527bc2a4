#include "bohrgap/report_io.hpp"

#include <charconv>
#include <sstream>

#include "bohrgap/errors.hpp"

namespace bohrgap {

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }
cplx cfrom(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }
std::string str(double v) { return format_double(v); }

std::uint64_t to_u64(const std::string& s) { return std::stoull(s); }
int to_int(const std::string& s) { return std::stoi(s); }

std::string sanitize(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

json trace_json(const PartialSumTrace& t) {
  json cps = json::array();
  for (const auto& cp : t.checkpoints) cps.push_back({{"N", cp.N}, {"value", cjson(cp.value)}, {"level", cp.level}, {"boundary", cp.boundary}});
  return {{"s", cjson(t.s)}, {"checkpoints", cps}, {"levelBoundaries", t.level_boundaries}};
}

PartialSumTrace trace_from(const json& j) {
  PartialSumTrace t;
  t.s = cfrom(j.at("s"));
  for (const auto& c : j.at("checkpoints"))
    t.checkpoints.push_back({c.at("N").get<std::uint64_t>(), cfrom(c.at("value")), c.at("level").get<int>(),
                             c.at("boundary").get<bool>()});
  t.level_boundaries = j.at("levelBoundaries").get<std::vector<std::uint64_t>>();
  return t;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(std::string_view text) {
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    // from_chars rejects "inf"/"nan" spellings on some libraries
    try {
      return std::stod(std::string(text));
    } catch (const std::exception&) {
      throw InvalidParameter("not a number: '" + std::string(text) + "'");
    }
  }
  return v;
}

void to_json(json& j, const ConstructionParams& p) {
  j = {{"M", p.M}, {"rho", p.rho}, {"X", p.X}, {"xIsDefault", p.x_is_default}, {"maxLevel", p.max_level}};
  if (p.rho_exact) {
    std::vector<std::string> ex;
    for (const auto& r : *p.rho_exact) ex.push_back(r.to_string());
    j["rhoExact"] = ex;
  }
}

void from_json(const json& j, ConstructionParams& p) {
  p.M = j.at("M").get<int>();
  p.rho = j.at("rho").get<std::vector<double>>();
  p.X = j.at("X").get<double>();
  p.x_is_default = j.at("xIsDefault").get<bool>();
  p.max_level = j.at("maxLevel").get<int>();
  p.rho_exact.reset();
  if (j.contains("rhoExact")) {
    std::vector<Rational> ex;
    for (const auto& s : j.at("rhoExact")) ex.push_back(Rational::parse(s.get<std::string>()));
    p.rho_exact = std::move(ex);
  }
}

void to_json(json& j, const AbscissaBounds& b) {
  j = {{"sigmaB_upper", b.sigma_b_upper},
       {"sigmaB_lower", b.sigma_b_lower},
       {"sigmaA_lower", b.sigma_a_lower},
       {"sigmaC_upper", b.sigma_c_upper},
       {"valid", b.valid}};
  if (b.exact) {
    j["exact"] = {{"sigmaB_upper", b.exact->sigma_b_upper.to_string()},
                  {"sigmaB_lower", b.exact->sigma_b_lower.to_string()},
                  {"sigmaA_lower", b.exact->sigma_a_lower.to_string()},
                  {"sigmaC_upper", b.exact->sigma_c_upper.to_string()},
                  {"valid", b.exact->valid}};
  }
}

void from_json(const json& j, AbscissaBounds& b) {
  b.sigma_b_upper = j.at("sigmaB_upper").get<double>();
  b.sigma_b_lower = j.at("sigmaB_lower").get<double>();
  b.sigma_a_lower = j.at("sigmaA_lower").get<double>();
  b.sigma_c_upper = j.at("sigmaC_upper").get<double>();
  b.valid = j.at("valid").get<bool>();
  b.exact.reset();
  if (j.contains("exact")) {
    const auto& e = j.at("exact");
    b.exact = ExactAbscissaBounds{Rational::parse(e.at("sigmaB_upper").get<std::string>()),
                                  Rational::parse(e.at("sigmaB_lower").get<std::string>()),
                                  Rational::parse(e.at("sigmaA_lower").get<std::string>()),
                                  Rational::parse(e.at("sigmaC_upper").get<std::string>()), e.at("valid").get<bool>()};
  }
}

void to_json(json& j, const BoundednessReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"L", row.L}, {"minN", row.min_n}, {"maxAbs", row.max_abs}, {"bound", row.bound},
                    {"withinBound", row.within_bound}});
  j = {{"params", r.params},           {"sigma", r.sigma},         {"tSamples", r.t_samples},
       {"tRange", r.t_range},          {"seed", r.seed},           {"predictedRate", r.predicted_rate},
       {"fittedRate", r.fitted_rate},  {"passed", r.passed},       {"rows", rows}};
}

void from_json(const json& j, BoundednessReport& r) {
  r.params = j.at("params").get<ConstructionParams>();
  r.sigma = j.at("sigma").get<double>();
  r.t_samples = j.at("tSamples").get<std::size_t>();
  r.t_range = j.at("tRange").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.predicted_rate = j.at("predictedRate").get<double>();
  r.fitted_rate = j.at("fittedRate").get<double>();
  r.passed = j.at("passed").get<bool>();
  r.rows.clear();
  for (const auto& row : j.at("rows"))
    r.rows.push_back({row.at("L").get<int>(), row.at("minN").get<std::uint64_t>(), row.at("maxAbs").get<double>(),
                      row.at("bound").get<double>(), row.at("withinBound").get<bool>()});
}

void to_json(json& j, const DivergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"L", row.L}, {"levelSum", row.level_sum}, {"cumulative", row.cumulative},
                    {"reference", row.reference}, {"ratio", row.ratio}});
  j = {{"params", r.params},
       {"sigma", r.sigma},
       {"sigmaA_lower", r.sigma_a_lower},
       {"exponent", r.exponent},
       {"calibratedConstant", r.calibrated_constant},
       {"ratioSpread", r.ratio_spread},
       {"belowSigmaA", r.below_sigma_a},
       {"growingTail", r.growing_tail},
       {"passed", r.passed},
       {"rows", rows}};
}

void from_json(const json& j, DivergenceReport& r) {
  r.params = j.at("params").get<ConstructionParams>();
  r.sigma = j.at("sigma").get<double>();
  r.sigma_a_lower = j.at("sigmaA_lower").get<double>();
  r.exponent = j.at("exponent").get<double>();
  r.calibrated_constant = j.at("calibratedConstant").get<double>();
  r.ratio_spread = j.at("ratioSpread").get<double>();
  r.below_sigma_a = j.at("belowSigmaA").get<bool>();
  r.growing_tail = j.at("growingTail").get<bool>();
  r.passed = j.at("passed").get<bool>();
  r.rows.clear();
  for (const auto& row : j.at("rows"))
    r.rows.push_back({row.at("L").get<int>(), row.at("levelSum").get<double>(), row.at("cumulative").get<double>(),
                      row.at("reference").get<double>(), row.at("ratio").get<double>()});
}

void to_json(json& j, const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"L", row.L},
                    {"omegaAbs", row.omega_abs},
                    {"term", row.term},
                    {"d", row.d},
                    {"greedySum", row.greedy_sum},
                    {"boundaryValue", cjson(row.boundary_value)},
                    {"tailMax", row.tail_max}});
  j = {{"params", r.params},
       {"epsilon", r.epsilon},
       {"epsilonFromParams", r.epsilon_from_params},
       {"decreasingFrom", r.decreasing_from ? json(*r.decreasing_from) : json(nullptr)},
       {"decayExponent", r.decay_exponent},
       {"oscillationLast3", r.oscillation_last3},
       {"maxDecompositionError", r.max_decomposition_error},
       {"termsDecay", r.terms_decay},
       {"oscillationOk", r.oscillation_ok},
       {"passed", r.passed},
       {"rows", rows},
       {"trace", trace_json(r.trace)}};
}

void from_json(const json& j, ConvergenceReport& r) {
  r.params = j.at("params").get<ConstructionParams>();
  r.epsilon = j.at("epsilon").get<double>();
  r.epsilon_from_params = j.at("epsilonFromParams").get<bool>();
  r.decreasing_from.reset();
  if (!j.at("decreasingFrom").is_null()) r.decreasing_from = j.at("decreasingFrom").get<int>();
  r.decay_exponent = j.at("decayExponent").get<double>();
  r.oscillation_last3 = j.at("oscillationLast3").get<double>();
  r.max_decomposition_error = j.at("maxDecompositionError").get<double>();
  r.terms_decay = j.at("termsDecay").get<bool>();
  r.oscillation_ok = j.at("oscillationOk").get<bool>();
  r.passed = j.at("passed").get<bool>();
  r.rows.clear();
  for (const auto& row : j.at("rows"))
    r.rows.push_back({row.at("L").get<int>(), row.at("omegaAbs").get<double>(), row.at("term").get<double>(),
                      row.at("d").get<int>(), row.at("greedySum").get<double>(), cfrom(row.at("boundaryValue")),
                      row.at("tailMax").get<double>()});
  r.trace = trace_from(j.at("trace"));
}

void to_json(json& j, const CheckResult& c) {
  j = {{"name", c.name}, {"passed", c.passed}, {"violations", c.violations}, {"detail", c.detail}};
}

void from_json(const json& j, CheckResult& c) {
  c.name = j.at("name").get<std::string>();
  c.passed = j.at("passed").get<bool>();
  c.violations = j.at("violations").get<std::size_t>();
  c.detail = j.at("detail").get<std::string>();
}

void to_json(json& j, const VerificationReport& r) {
  j = {{"params", r.params}, {"Lmax", r.Lmax},       {"seed", r.seed},        {"checks", r.checks},
       {"seconds", r.seconds}, {"passed", r.passed()}};
}

void from_json(const json& j, VerificationReport& r) {
  r.params = j.at("params").get<ConstructionParams>();
  r.Lmax = j.at("Lmax").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.checks = j.at("checks").get<std::vector<CheckResult>>();
  r.seconds = j.at("seconds").get<double>();
}

void to_json(json& j, const DemonstrationReport& r) {
  json levels = json::array();
  for (const auto& l : r.per_level)
    levels.push_back({{"L", l.L},
                      {"witnessValue", l.witness_value},
                      {"referenceValue", l.reference_value},
                      {"residualMax", l.residual_max},
                      {"delta", l.delta},
                      {"errorBudget", l.error_budget},
                      {"polynomialValue", cjson(l.polynomial_value)}});
  j = {{"K", r.K},
       {"L_K", r.L_K},
       {"t_K", r.t_K},
       {"N_K", r.N_K},
       {"perLevel", levels},
       {"partialSum", cjson(r.partial_sum)},
       {"witnessSum", r.witness_sum},
       {"errorBudget", r.error_budget},
       {"bound", r.bound},
       {"deviation", r.deviation},
       {"achieved", r.achieved},
       {"scanned", r.scanned},
       {"tMax", r.t_max},
       {"step", r.step},
       {"seed", r.seed},
       {"witnessMode", r.witness_mode}};
}

void from_json(const json& j, DemonstrationReport& r) {
  r.K = j.at("K").get<double>();
  r.L_K = j.at("L_K").get<int>();
  r.t_K = j.at("t_K").get<double>();
  r.N_K = j.at("N_K").get<std::uint64_t>();
  r.per_level.clear();
  for (const auto& l : j.at("perLevel"))
    r.per_level.push_back({l.at("L").get<int>(), l.at("witnessValue").get<double>(),
                           l.at("referenceValue").get<double>(), l.at("residualMax").get<double>(),
                           l.at("delta").get<double>(), l.at("errorBudget").get<double>(),
                           cfrom(l.at("polynomialValue"))});
  r.partial_sum = cfrom(j.at("partialSum"));
  r.witness_sum = j.at("witnessSum").get<double>();
  r.error_budget = j.at("errorBudget").get<double>();
  r.bound = j.at("bound").get<double>();
  r.deviation = j.at("deviation").get<double>();
  r.achieved = j.at("achieved").get<bool>();
  r.scanned = j.at("scanned").get<std::size_t>();
  r.t_max = j.at("tMax").get<double>();
  r.step = j.at("step").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.witness_mode = j.at("witnessMode").get<std::string>();
}

void to_json(json& j, const SignAssignment& s) {
  json levels = json::array();
  for (const auto& [L, beta] : s.betas) {
    json e = {{"L", L}, {"reBeta", beta.real()}, {"imBeta", beta.imag()}};
    e["d_L"] = s.dees.count(L) ? s.dees.at(L) : 0;
    if (s.omega_abs.count(L)) e["absOmega"] = s.omega_abs.at(L);
    if (s.running_sum.count(L)) e["runningSum"] = s.running_sum.at(L);
    levels.push_back(e);
  }
  j = {{"epsilon", s.epsilon}, {"levels", levels}};
}

void from_json(const json& j, SignAssignment& s) {
  s = SignAssignment{};
  s.epsilon = j.at("epsilon").get<double>();
  for (const auto& e : j.at("levels")) {
    const int L = e.at("L").get<int>();
    s.betas[L] = {e.at("reBeta").get<double>(), e.at("imBeta").get<double>()};
    s.dees[L] = e.at("d_L").get<int>();
    if (e.contains("absOmega")) s.omega_abs[L] = e.at("absOmega").get<double>();
    if (e.contains("runningSum")) s.running_sum[L] = e.at("runningSum").get<double>();
  }
}

json envelope(std::string_view kind, json payload) {
  return {{"schemaVersion", kSchemaVersion}, {"kind", kind}, {"report", std::move(payload)}};
}

json open_envelope(const json& doc, std::string_view kind) {
  if (!doc.contains("schemaVersion") || doc.at("schemaVersion").get<int>() != kSchemaVersion) {
    throw InvalidParameter("unsupported report schemaVersion");
  }
  if (doc.at("kind").get<std::string>() != kind) throw InvalidParameter("report kind mismatch");
  return doc.at("report");
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

CsvTable CsvTable::parse(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != t.header.size()) throw InvalidParameter("CSV row width differs from header");
      t.rows.push_back(std::move(fields));
    }
  }
  if (first) throw InvalidParameter("empty CSV");
  return t;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InvalidParameter("CSV column '" + std::string(name) + "' missing");
}

CsvTable bounds_csv(const AbscissaBounds& b) {
  CsvTable t{{"quantity", "value", "exact"}, {}};
  auto ex = [&](auto member) { return b.exact ? ((*b.exact).*member).to_string() : std::string{}; };
  t.rows.push_back({"sigmaB_lower", str(b.sigma_b_lower), ex(&ExactAbscissaBounds::sigma_b_lower)});
  t.rows.push_back({"sigmaB_upper", str(b.sigma_b_upper), ex(&ExactAbscissaBounds::sigma_b_upper)});
  t.rows.push_back({"sigmaA_lower", str(b.sigma_a_lower), ex(&ExactAbscissaBounds::sigma_a_lower)});
  t.rows.push_back({"sigmaC_upper", str(b.sigma_c_upper), ex(&ExactAbscissaBounds::sigma_c_upper)});
  t.rows.push_back({"valid", b.valid ? "1" : "0", b.exact ? (b.exact->valid ? "1" : "0") : ""});
  return t;
}

CsvTable boundedness_csv(const BoundednessReport& r) {
  CsvTable t{{"L", "min_n", "max_abs", "bound", "within_bound"}, {}};
  for (const auto& row : r.rows)
    t.rows.push_back({str(row.L), str(row.min_n), str(row.max_abs), str(row.bound), row.within_bound ? "1" : "0"});
  return t;
}

std::vector<BoundednessRow> boundedness_rows_from_csv(const CsvTable& t) {
  std::vector<BoundednessRow> out;
  const auto cL = t.column("L"), cn = t.column("min_n"), ca = t.column("max_abs"), cb = t.column("bound"),
             cw = t.column("within_bound");
  for (const auto& f : t.rows)
    out.push_back({to_int(f[cL]), to_u64(f[cn]), parse_double(f[ca]), parse_double(f[cb]), f[cw] == "1"});
  return out;
}

CsvTable divergence_csv(const DivergenceReport& r) {
  CsvTable t{{"L", "level_sum", "cumulative", "reference", "ratio"}, {}};
  for (const auto& row : r.rows)
    t.rows.push_back({str(row.L), str(row.level_sum), str(row.cumulative), str(row.reference), str(row.ratio)});
  return t;
}

std::vector<DivergenceRow> divergence_rows_from_csv(const CsvTable& t) {
  std::vector<DivergenceRow> out;
  const auto cL = t.column("L"), cs = t.column("level_sum"), cc = t.column("cumulative"), cr = t.column("reference"),
             cq = t.column("ratio");
  for (const auto& f : t.rows)
    out.push_back({to_int(f[cL]), parse_double(f[cs]), parse_double(f[cc]), parse_double(f[cr]), parse_double(f[cq])});
  return out;
}

CsvTable convergence_csv(const ConvergenceReport& r) {
  CsvTable t{{"L", "omega_abs", "term", "d", "greedy_sum", "boundary_re", "boundary_im", "tail_max"}, {}};
  for (const auto& row : r.rows)
    t.rows.push_back({str(row.L), str(row.omega_abs), str(row.term), str(row.d), str(row.greedy_sum),
                      str(row.boundary_value.real()), str(row.boundary_value.imag()), str(row.tail_max)});
  return t;
}

std::vector<ConvergenceRow> convergence_rows_from_csv(const CsvTable& t) {
  std::vector<ConvergenceRow> out;
  const auto cL = t.column("L"), co = t.column("omega_abs"), ct = t.column("term"), cd = t.column("d"),
             cg = t.column("greedy_sum"), cr = t.column("boundary_re"), ci = t.column("boundary_im"),
             cm = t.column("tail_max");
  for (const auto& f : t.rows)
    out.push_back({to_int(f[cL]), parse_double(f[co]), parse_double(f[ct]), to_int(f[cd]), parse_double(f[cg]),
                   cplx{parse_double(f[cr]), parse_double(f[ci])}, parse_double(f[cm])});
  return out;
}

CsvTable verification_csv(const VerificationReport& r) {
  CsvTable t{{"check", "passed", "violations", "detail"}, {}};
  for (const auto& c : r.checks)
    t.rows.push_back({c.name, c.passed ? "1" : "0", str(static_cast<std::uint64_t>(c.violations)), sanitize(c.detail)});
  return t;
}

CsvTable demonstration_csv(const DemonstrationReport& r) {
  CsvTable t{{"L", "witness_value", "reference_value", "residual_max", "delta", "error_budget", "value_re", "value_im"},
             {}};
  for (const auto& l : r.per_level)
    t.rows.push_back({str(l.L), str(l.witness_value), str(l.reference_value), str(l.residual_max), str(l.delta),
                      str(l.error_budget), str(l.polynomial_value.real()), str(l.polynomial_value.imag())});
  return t;
}

std::vector<LevelReport> demonstration_rows_from_csv(const CsvTable& t) {
  std::vector<LevelReport> out;
  const auto cL = t.column("L"), cw = t.column("witness_value"), cr = t.column("reference_value"),
             cm = t.column("residual_max"), cd = t.column("delta"), ce = t.column("error_budget"),
             cre = t.column("value_re"), cim = t.column("value_im");
  for (const auto& f : t.rows)
    out.push_back({to_int(f[cL]), parse_double(f[cw]), parse_double(f[cr]), parse_double(f[cm]), parse_double(f[cd]),
                   parse_double(f[ce]), cplx{parse_double(f[cre]), parse_double(f[cim])}});
  return out;
}

}  // namespace bohrgap
