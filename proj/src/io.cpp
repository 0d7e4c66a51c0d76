#include "npcd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "npcd/errors.hpp"

namespace npcd {

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ValidationError("expected a number, got " + j.dump());
}

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key);
}

Json optional_number(const std::optional<double>& v) {
  return v ? number_to_json(*v) : Json(nullptr);
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(number_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_rows(const Json& j) {
  const int d = field<int>(j, "d");
  if (d < 1) throw ValidationError("d must be >= 1");
  const Json& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    throw ValidationError("rows must hold d rows");
  }
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d) {
      throw ValidationError("each row must hold d entries");
    }
    for (int k = 0; k < d; ++k) m(i, k) = number_from_json(rows[i][k]);
  }
  return m;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const WeightedDag& dag) {
  return {{"d", dag.size()}, {"rows", matrix_rows(dag.weights())}};
}

WeightedDag dag_from_json(const Json& j) { return WeightedDag(matrix_from_rows(j)); }

Json to_json(const SupportMatrix& s) {
  Json rows = Json::array();
  for (int i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < s.size(); ++k) row.push_back(i == k ? 0 : static_cast<int>(s.edge(i, k)));
    rows.push_back(std::move(row));
  }
  return {{"d", s.size()}, {"rows", rows}};
}

SupportMatrix support_from_json(const Json& j) {
  const int d = field<int>(j, "d");
  std::vector<std::vector<int>> entries;
  try {
    entries = j.at("rows").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("support rows must be integer arrays");
  }
  if (static_cast<int>(entries.size()) != d) throw ValidationError("support rows must hold d rows");
  return SupportMatrix::from_entries(entries);
}

std::string edge_list_csv(const WeightedDag& dag) {
  std::string out = "src,dst,weight\n";
  for (int src = 0; src < dag.size(); ++src)
    for (int dst = 0; dst < dag.size(); ++dst)
      if (dag.has_edge(src, dst)) {
        out += std::to_string(src) + "," + std::to_string(dst) + "," +
               format_double(dag.weight(dst, src)) + "\n";
      }
  return out;
}

std::string dataset_csv(const Dataset& data) {
  std::string out;
  for (int v = 0; v < data.dim(); ++v) out += (v ? ",x" : "x") + std::to_string(v + 1);
  out += "\n";
  for (int k = 0; k < data.samples(); ++k) {
    for (int v = 0; v < data.dim(); ++v) {
      if (v) out += ",";
      out += format_double(data.values()(k, v));
    }
    out += "\n";
  }
  return out;
}

Matrix parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header.push_back(cell);
  }
  const auto d = static_cast<int>(header.size());
  for (int v = 0; v < d; ++v) {
    if (header[v] != "x" + std::to_string(v + 1)) {
      throw ValidationError("dataset CSV header must be x1,...,xd");
    }
  }
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream r(line);
    std::string cell;
    int count = 0;
    while (std::getline(r, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw ValidationError("dataset CSV row " + std::to_string(rows + 1) +
                              ": not a number: '" + cell + "'");
      }
      values.push_back(v);
      ++count;
    }
    if (count != d) {
      throw ValidationError("dataset CSV row " + std::to_string(rows + 1) + " has " +
                            std::to_string(count) + " fields, expected " + std::to_string(d));
    }
    ++rows;
  }
  if (rows == 0) throw ValidationError("dataset CSV has no data rows");
  Matrix m(rows, d);
  for (int k = 0; k < rows; ++k)
    for (int v = 0; v < d; ++v) m(k, v) = values[static_cast<std::size_t>(k) * d + v];
  return m;
}

Json to_json(const WeightLaw& law) {
  return std::visit(
      [](const auto& w) -> Json {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, UniformTwoSided>) {
          return {{"kind", "uniform-two-sided"}, {"lo", w.lo}, {"hi", w.hi}};
        } else if constexpr (std::is_same_v<T, FiniteSupport>) {
          return {{"kind", "finite-support"}, {"values", w.values}, {"probabilities", w.probabilities}};
        } else {
          return {{"kind", "shifted-exponential"}, {"offset", w.offset}};
        }
      },
      law);
}

WeightLaw weight_law_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  WeightLaw law;
  if (kind == "uniform-two-sided") {
    law = UniformTwoSided{field_or(j, "lo", 0.5), field_or(j, "hi", 5.0)};
  } else if (kind == "finite-support") {
    law = FiniteSupport{field<std::vector<double>>(j, "values"),
                        field_or(j, "probabilities", std::vector<double>{})};
  } else if (kind == "shifted-exponential") {
    law = ShiftedExponential{field_or(j, "offset", 1.0)};
  } else {
    throw ValidationError("unknown weight law '" + kind + "'");
  }
  validate_weight_law(law);
  return law;
}

Json to_json(const PriorSpec& spec) {
  return {{"kind", "random"},
          {"d", spec.d},
          {"edge_prob", spec.edge_prob},
          {"weight_law", to_json(spec.weight_law)},
          {"relabel", spec.relabel}};
}

PriorSpec prior_spec_from_json(const Json& j) {
  PriorSpec s;
  s.d = field<int>(j, "d");
  s.edge_prob = field_or(j, "edge_prob", 0.5);
  if (j.contains("weight_law")) s.weight_law = weight_law_from_json(j.at("weight_law"));
  s.relabel = field_or(j, "relabel", true);
  s.validate();
  return s;
}

Json to_json(const EnumeratedPrior& prior) {
  Json structures = Json::array();
  for (const auto& s : prior.structures())
    structures.push_back({{"probability", s.probability}, {"dag", to_json(s.dag)}});
  return {{"kind", "enumerated"}, {"d", prior.dim()}, {"structures", structures}};
}

EnumeratedPrior enumerated_prior_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "enumerated") {
    std::vector<WeightedStructure> structures;
    for (const auto& s : field<Json>(j, "structures")) {
      structures.push_back({dag_from_json(field<Json>(s, "dag")), field<double>(s, "probability")});
    }
    return EnumeratedPrior(std::move(structures));
  }
  if (kind == "uniform-enumerated") {
    return EnumeratedPrior::uniform(field<int>(j, "d"), field<std::vector<double>>(j, "weights"),
                                    field_or(j, "max_d", kDefaultMaxEnumerationSize));
  }
  throw ValidationError("prior kind '" + kind + "' is not an enumerated prior");
}

ExperimentPrior prior_from_json(const Json& j) {
  if (field<std::string>(j, "kind") == "random") return prior_spec_from_json(j);
  return enumerated_prior_from_json(j);
}

Json to_json(const ExperimentPrior& prior) {
  return std::visit([](const auto& p) { return to_json(p); }, prior);
}

Json to_json(const CalibratedDetector& det) {
  return {{"gamma", number_to_json(det.gamma())},
          {"log_gamma", number_to_json(det.log_gamma)},
          {"eta", det.eta},
          {"epsilon", det.epsilon},
          {"diagnostics",
           {{"mc_samples", det.mc_samples},
            {"seed", det.seed},
            {"estimated_eps_plus", det.estimated_eps_plus},
            {"boundary_mass", det.boundary_mass},
            {"warnings", det.warnings}}}};
}

CalibratedDetector detector_from_json(const Json& j) {
  CalibratedDetector det;
  det.log_gamma = number_from_json(field<Json>(j, "log_gamma"));
  det.eta = field<double>(j, "eta");
  det.epsilon = field<double>(j, "epsilon");
  if (!(det.eta >= 0.0 && det.eta <= 1.0)) throw ValidationError("detector eta must lie in [0, 1]");
  if (j.contains("diagnostics")) {
    const auto& g = j.at("diagnostics");
    det.mc_samples = field_or<std::size_t>(g, "mc_samples", 0);
    det.seed = field_or<std::uint64_t>(g, "seed", 0);
    det.estimated_eps_plus = field_or(g, "estimated_eps_plus", 0.0);
    det.boundary_mass = field_or(g, "boundary_mass", 0.0);
    det.warnings = field_or(g, "warnings", std::vector<std::string>{});
  }
  return det;
}

Json to_json(const DetectorRates& rates) {
  return {{"eps_plus", rates.eps_plus},
          {"eps_minus", rates.eps_minus},
          {"se_plus", rates.se_plus},
          {"se_minus", rates.se_minus},
          {"samples_per_pair", rates.samples_per_pair}};
}

namespace {

Json to_json(const DivergenceTriple& t) {
  return {{"lambda", t.lambda},
          {"d_lambda", number_to_json(t.d_lambda)},
          {"d_prime", number_to_json(t.d_prime)},
          {"d_double_prime", number_to_json(t.d_double_prime)},
          {"mc_error",
           {{"d_lambda", number_to_json(t.se_d_lambda)},
            {"d_prime", number_to_json(t.se_d_prime)},
            {"d_double_prime", number_to_json(t.se_d_double_prime)}}},
          {"effective_sample_size", number_to_json(t.effective_sample_size)},
          {"low_ess", t.low_ess},
          {"samples", t.samples},
          {"seed", t.seed}};
}

}  // namespace

Json to_json(const BoundsReport& report) {
  Json per = Json::array();
  for (const auto& lb : report.per_lambda) {
    Json pairs = Json::array();
    for (const auto& p : lb.pairs)
      pairs.push_back({{"w_plus", p.w_plus}, {"w_minus", p.w_minus}, {"divergences", to_json(p.divergences)}});
    per.push_back({{"lambda", lb.lambda},
                   {"achievability", number_to_json(lb.achievability)},
                   {"converse", number_to_json(lb.converse)},
                   {"achievability_se", number_to_json(lb.achievability_se)},
                   {"converse_se", number_to_json(lb.converse_se)},
                   {"pairs", pairs}});
  }
  Json out = {{"per_lambda", per}};
  if (!report.per_lambda.empty()) {
    const auto& a = report.per_lambda[report.best_achievability];
    const auto& c = report.per_lambda[report.best_converse];
    out["best_achievability"] = {{"lambda", a.lambda}, {"value", number_to_json(a.achievability)}};
    out["best_converse"] = {{"lambda", c.lambda}, {"value", number_to_json(c.converse)}};
  }
  return out;
}

Json to_json(const EdgeDecisionTrace& trace) {
  Json j = {{"i", trace.i},
            {"j", trace.j},
            {"edge", trace.edge},
            {"tests", trace.tests},
            {"guarantee_valid", trace.guarantee_valid},
            {"thresholds_used", trace.thresholds_used}};
  if (trace.witness) {
    const auto& w = *trace.witness;
    j["witness"] = {{"parents_i", w.parents_i}, {"parents_j", w.parents_j}, {"rss_i", w.rss_i},
                    {"rss_j", w.rss_j},         {"gap", w.gap},             {"tau", w.tau}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const DiscoveryResult& result) {
  Json traces = Json::array();
  for (const auto& t : result.traces) traces.push_back(to_json(t));
  return {{"support", to_json(result.support)},
          {"guarantee_valid", result.guarantee_valid},
          {"parent_cap", result.parent_cap},
          {"traces", traces}};
}

Json to_json(const GlrtResult& result) {
  return {{"support", to_json(result.support)},
          {"statistics", matrix_rows(result.statistics)},
          {"threshold", number_to_json(result.threshold)}};
}

Json to_json(const MethodSpec& m) {
  Json j = {{"kind", method_kind_name(m.kind)}, {"label", m.name()}};
  switch (m.kind) {
    case MethodKind::kEcut:
      j["mode"] = m.ecut_mode == ThresholdMode::kSingle ? "single" : "per-pair";
      j["max_parent_size"] = m.max_parent_size ? Json(*m.max_parent_size) : Json(nullptr);
      break;
    case MethodKind::kGlrt:
      j["threshold_mode"] = m.glrt_mode == GlrtThresholdMode::kChiSquared ? "chi2" : "mc";
      j["df"] = m.glrt_df;
      j["null_samples"] = m.glrt_null_samples;
      break;
    case MethodKind::kLasso:
      j["lambdas"] = m.lasso_lambdas;
      break;
    case MethodKind::kOptimal:
      j["mc_samples"] = m.optimal_mc_samples;
      break;
    case MethodKind::kImport:
      j["dir"] = m.import_dir;
      break;
    default:
      break;
  }
  return j;
}

MethodSpec method_from_json(const Json& j) {
  MethodSpec m;
  m.kind = parse_method_kind(field<std::string>(j, "kind"));
  m.label = field_or<std::string>(j, "label", "");
  const auto mode = field_or<std::string>(j, "mode", "per-pair");
  if (mode == "single") m.ecut_mode = ThresholdMode::kSingle;
  else if (mode != "per-pair") throw ValidationError("ecut mode must be per-pair or single");
  if (j.contains("max_parent_size") && !j.at("max_parent_size").is_null())
    m.max_parent_size = field<int>(j, "max_parent_size");
  const auto tmode = field_or<std::string>(j, "threshold_mode", "mc");
  if (tmode == "chi2") m.glrt_mode = GlrtThresholdMode::kChiSquared;
  else if (tmode != "mc") throw ValidationError("glrt threshold_mode must be mc or chi2");
  m.glrt_df = field_or(j, "df", 1);
  m.glrt_null_samples = field_or<std::size_t>(j, "null_samples", m.glrt_null_samples);
  m.lasso_lambdas = field_or(j, "lambdas", std::vector<double>{});
  m.optimal_mc_samples = field_or<std::size_t>(j, "mc_samples", m.optimal_mc_samples);
  m.import_dir = field_or<std::string>(j, "dir", "");
  return m;
}

Json to_json(const ExperimentSpec& spec) {
  Json methods = Json::array();
  for (const auto& m : spec.methods) methods.push_back(to_json(m));
  return {{"prior", to_json(spec.prior)}, {"n", spec.n},
          {"noise_var", spec.noise_var},  {"trials", spec.trials},
          {"epsilons", spec.epsilons},    {"methods", methods},
          {"seed", spec.seed}};
}

ExperimentSpec experiment_from_json(const Json& j) {
  ExperimentSpec spec;
  spec.prior = prior_from_json(field<Json>(j, "prior"));
  spec.n = field<int>(j, "n");
  spec.noise_var = field_or(j, "noise_var", 1.0);
  spec.trials = field<std::size_t>(j, "trials");
  spec.epsilons = field_or(j, "epsilons", spec.epsilons);
  for (const auto& m : field<Json>(j, "methods")) spec.methods.push_back(method_from_json(m));
  spec.seed = field_or<std::uint64_t>(j, "seed", 0);
  spec.validate();
  return spec;
}

Json to_json(const ErrorRateReport& r) {
  return {{"method", r.method},
          {"epsilon_target", optional_number(r.epsilon_target)},
          {"parameter", optional_number(r.parameter)},
          {"trials", r.trials},
          {"excluded_trials", r.excluded_trials},
          {"fp_count", r.fp_count},
          {"fn_count", r.fn_count},
          {"tn_count", r.tn_count},
          {"tp_count", r.tp_count},
          {"eps_plus", optional_number(r.eps_plus)},
          {"eps_minus", optional_number(r.eps_minus)},
          {"se_plus", r.se_plus},
          {"se_minus", r.se_minus},
          {"delta_se_plus", r.delta_se_plus},
          {"delta_se_minus", r.delta_se_minus},
          {"pair_fp", r.pair_fp},
          {"pair_null", r.pair_null}};
}

Json to_json(const TrialRecord& t) {
  Json outcomes = Json::array();
  for (const auto& o : t.outcomes) {
    Json e = {{"fp", o.fp}, {"fn", o.fn}};
    if (o.failed) e["error"] = o.error;
    outcomes.push_back(std::move(e));
  }
  return {{"trial", t.trial}, {"edges", t.edges}, {"null_slots", t.null_slots}, {"outcomes", outcomes}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace npcd
