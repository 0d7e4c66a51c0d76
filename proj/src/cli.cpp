#include "npcd/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <CLI11.hpp>

#include "npcd/errors.hpp"
#include "npcd/io.hpp"
#include "npcd/parallel.hpp"

namespace npcd::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  return hex.str();
}

namespace {

// Flags whose values are file or directory paths; replay resolves them
// against the original working directory.
const std::set<std::string> kPathFlags = {"--input",   "--prior",          "--spec",
                                          "--truth",   "--support",        "--detector",
                                          "--null-prior", "--import-support", "--manifest"};

struct Artifacts {
  std::string subcommand;
  fs::path out_dir;
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<fs::path> inputs;
  Json config;
  std::uint64_t seed = 0;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --flag=value becomes two tokens so replay can rewrite values uniformly.
std::vector<std::string> normalize_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (a.rfind("--", 0) == 0 && eq != std::string::npos) {
      out.push_back(a.substr(0, eq));
      out.push_back(a.substr(eq + 1));
    } else {
      out.push_back(a);
    }
  }
  return out;
}

void write_artifacts(const Artifacts& a, const std::vector<std::string>& args, std::ostream& out) {
  Json outputs = Json::array();
  for (const auto& [name, content] : a.files) {
    write_text(a.out_dir / name, content);
    outputs.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
    out << (a.out_dir / name).string() << "\n";
  }
  Json inputs = Json::array();
  for (const auto& p : a.inputs) {
    Json entry = {{"path", fs::absolute(p).string()}};
    entry["sha256"] = fs::is_regular_file(p) ? Json(sha256_hex(read_text(p))) : Json(nullptr);
    inputs.push_back(std::move(entry));
  }
  const Json manifest = {{"subcommand", a.subcommand},
                         {"version", kVersion},
                         {"argv", normalize_args(args)},
                         {"cwd", fs::current_path().string()},
                         {"config", a.config},
                         {"seed", a.seed},
                         {"threads", max_threads()},
                         {"timestamp", utc_timestamp()},
                         {"inputs", inputs},
                         {"outputs", outputs}};
  write_text(a.out_dir / "manifest.json", dump(manifest));
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("NPCD_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

Dataset load_dataset(const fs::path& path, double sigma2) {
  return Dataset(parse_dataset_csv(read_text(path)), sigma2);
}

Json load_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

// Bare support JSON or any object carrying one under "support".
SupportMatrix load_support(const fs::path& path) {
  const Json j = load_json(path);
  return support_from_json(j.contains("support") ? j.at("support") : j);
}

WeightedDag load_dag(const fs::path& path) {
  const Json j = load_json(path);
  return dag_from_json(j.contains("dag") ? j.at("dag") : j);
}

struct EnumeratedPriorFlags {
  std::string path;
  int d = 2;
  std::vector<double> weights{1.0};
  int max_d = kDefaultMaxEnumerationSize;

  void add(CLI::App* app) {
    app->add_option("--prior", path, "enumerated prior JSON (default: uniform over all DAGs)");
    app->add_option("--d", d, "vertices of the uniform enumerated prior");
    app->add_option("--weights", weights, "edge weight values of the uniform prior")->delimiter(',');
    app->add_option("--max-d", max_d, "enumeration cap");
  }
  EnumeratedPrior load(Artifacts& a) const {
    if (!path.empty()) {
      a.inputs.emplace_back(path);
      return enumerated_prior_from_json(load_json(path));
    }
    return EnumeratedPrior::uniform(d, weights, max_d);
  }
};

std::uint64_t sub_seed(std::uint64_t master, const char* name) {
  return StreamFactory(master).seed_for(name, 0);
}

// ---------------------------------------------------------------------------

struct SimulateCmd {
  int d = 5;
  double edge_prob = 0.5;
  int n = 0;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::string law = "uniform";
  double lo = 0.5, hi = 5.0, offset = 1.0;
  std::vector<double> values;
  bool no_relabel = false;
  std::string prior;

  void add(CLI::App* app) {
    app->add_option("--d", d, "number of vertices");
    app->add_option("--edge-prob", edge_prob, "edge keep probability");
    app->add_option("--n", n, "samples")->required();
    app->add_option("--sigma2", sigma2, "noise variance");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--trial", trial, "trial index (matches benchmark trial numbering)");
    app->add_option("--weight-law", law, "uniform | exponential | finite")
        ->check(CLI::IsMember({"uniform", "exponential", "finite"}));
    app->add_option("--weight-lo", lo);
    app->add_option("--weight-hi", hi);
    app->add_option("--weight-offset", offset);
    app->add_option("--weight-values", values)->delimiter(',');
    app->add_flag("--no-relabel", no_relabel, "keep the lower-triangular labeling");
    app->add_option("--prior", prior, "prior JSON; overrides the generator flags");
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "simulate";
    ExperimentPrior p;
    if (!prior.empty()) {
      a.inputs.emplace_back(prior);
      p = prior_from_json(load_json(prior));
    } else {
      PriorSpec s;
      s.d = d;
      s.edge_prob = edge_prob;
      if (law == "uniform") s.weight_law = UniformTwoSided{lo, hi};
      else if (law == "exponential") s.weight_law = ShiftedExponential{offset};
      else s.weight_law = FiniteSupport{values, {}};
      s.relabel = !no_relabel;
      s.validate();
      p = s;
    }
    const auto draw = draw_trial(p, n, sigma2, seed, trial);
    a.seed = seed;
    a.config = {{"prior", to_json(p)}, {"n", n}, {"sigma2", sigma2}, {"trial", trial}};
    a.files = {{"data.csv", dataset_csv(draw.data)},
               {"truth.json", dump(to_json(draw.truth))},
               {"truth_edges.csv", edge_list_csv(draw.truth)},
               {"data.json", dump({{"n", n}, {"d", draw.data.dim()}, {"sigma2", sigma2}})}};
    return a;
  }
};

struct DiscoverCmd {
  std::string input;
  double sigma2 = 1.0;
  double epsilon = 0.05;
  std::string mode = "per-pair";
  std::optional<int> max_parent;
  std::string order = "size";
  std::uint64_t shuffle_seed = 0;
  std::string output;

  void add(CLI::App* app) {
    app->add_option("--input", input, "dataset CSV")->required();
    app->add_option("--output", output, "support JSON path (default: <out-dir>/support.json)");
    app->add_option("--sigma2", sigma2, "noise variance")->required();
    app->add_option("--epsilon", epsilon, "false positive target");
    app->add_option("--mode", mode)->check(CLI::IsMember({"per-pair", "single"}));
    app->add_option("--max-parent-size", max_parent);
    app->add_option("--order", order, "parent-set enumeration order")
        ->check(CLI::IsMember({"size", "shuffled"}));
    app->add_option("--shuffle-seed", shuffle_seed);
  }

  EcutConfig config() const {
    EcutConfig c;
    c.epsilon = epsilon;
    c.noise_var = sigma2;
    c.mode = mode == "single" ? ThresholdMode::kSingle : ThresholdMode::kPerPair;
    c.max_parent_size = max_parent;
    c.order = order == "shuffled" ? EnumerationOrder::kShuffled : EnumerationOrder::kBySizeAscending;
    c.shuffle_seed = shuffle_seed;
    return c;
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "discover";
    a.inputs.emplace_back(input);
    const auto data = load_dataset(input, sigma2);
    const auto cfg = config();
    Json result = to_json(discover(data, cfg));
    a.seed = shuffle_seed;
    a.config = {{"epsilon", epsilon}, {"sigma2", sigma2}, {"mode", mode},
                {"max_parent_size", max_parent ? Json(*max_parent) : Json(nullptr)},
                {"order", order}, {"shuffle_seed", shuffle_seed}};
    result["config"] = a.config;
    a.files = {{output.empty() ? "support.json" : fs::path(output).filename().string(), dump(result)}};
    return a;
  }
};

struct ScoreCmd {
  std::string truth, support;

  void add(CLI::App* app) {
    app->add_option("--truth", truth, "true DAG JSON")->required();
    app->add_option("--support", support, "estimated support JSON")->required();
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "score";
    a.inputs = {truth, support};
    const auto chi = support_of(load_dag(truth));
    const auto est = load_support(support);
    if (est.size() != chi.size()) throw ValidationError("score: supports differ in size");
    int fp = 0, fn = 0, tn = 0, tp = 0;
    for (int i = 0; i < chi.size(); ++i)
      for (int j = i + 1; j < chi.size(); ++j) {
        if (chi.edge(i, j)) (est.edge(i, j) ? tp : fn)++;
        else (est.edge(i, j) ? fp : tn)++;
      }
    Json s = {{"fp", fp}, {"fn", fn}, {"tn", tn}, {"tp", tp},
              {"null_slots", fp + tn}, {"edges", fn + tp}};
    s["eps_plus"] = fp + tn > 0 ? Json(static_cast<double>(fp) / (fp + tn)) : Json(nullptr);
    s["eps_minus"] = fn + tp > 0 ? Json(static_cast<double>(fn) / (fn + tp)) : Json(nullptr);
    a.config = Json::object();
    a.files = {{"score.json", dump(s)}};
    return a;
  }
};

struct CalibrateCmd {
  EnumeratedPriorFlags prior;
  double epsilon = 0.1;
  int n = 10;
  double sigma2 = 1.0;
  std::size_t mc = 20000;
  std::size_t evaluate = 0;
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    prior.add(app);
    app->add_option("--epsilon", epsilon);
    app->add_option("--n", n);
    app->add_option("--sigma2", sigma2);
    app->add_option("--mc-samples", mc, "null draws per pair");
    app->add_option("--evaluate", evaluate, "fresh draws per pair for held-out rates (0: skip)");
    app->add_option("--seed", seed);
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "calibrate";
    const auto pr = prior.load(a);
    const auto models = build_edge_models(pr, sigma2, n);
    const auto det = npcd::calibrate(models, epsilon, mc, sub_seed(seed, "calibrate"));
    Json out = to_json(det);
    if (evaluate > 0) {
      out["heldout"] = to_json(
          evaluate_detector(models, det.log_gamma, det.eta, evaluate, sub_seed(seed, "evaluate")));
    }
    a.seed = seed;
    a.config = {{"prior", to_json(pr)}, {"epsilon", epsilon}, {"n", n},
                {"sigma2", sigma2},     {"mc_samples", mc},   {"evaluate", evaluate}};
    out["config"] = a.config;
    a.files = {{"detector.json", dump(out)}};
    return a;
  }
};

struct BoundsCmd {
  EnumeratedPriorFlags prior;
  int n = 10;
  double sigma2 = 1.0;
  double epsilon = 0.1;
  std::vector<double> grid = default_lambda_grid();
  std::size_t mc = 20000;
  std::uint64_t seed = 0;
  std::string detector;

  void add(CLI::App* app) {
    prior.add(app);
    app->add_option("--n", n);
    app->add_option("--sigma2", sigma2);
    app->add_option("--epsilon", epsilon);
    app->add_option("--lambda-grid", grid)->delimiter(',');
    app->add_option("--mc-samples", mc);
    app->add_option("--seed", seed);
    app->add_option("--detector", detector, "calibrated detector JSON (default: calibrate here)");
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "bounds";
    const auto pr = prior.load(a);
    const auto models = build_edge_models(pr, sigma2, n);
    CalibratedDetector det;
    if (!detector.empty()) {
      a.inputs.emplace_back(detector);
      det = detector_from_json(load_json(detector));
    } else {
      det = npcd::calibrate(models, epsilon, mc, sub_seed(seed, "calibrate"));
    }
    const auto report =
        compute_bounds(models, det.log_gamma, epsilon, grid, mc, sub_seed(seed, "bounds"));
    Json out = to_json(report);
    out["log_gamma"] = number_to_json(det.log_gamma);
    out["epsilon"] = epsilon;
    a.seed = seed;
    a.config = {{"prior", to_json(pr)}, {"n", n},          {"sigma2", sigma2},
                {"epsilon", epsilon},   {"lambda_grid", grid}, {"mc_samples", mc}};
    a.files = {{"bounds.json", dump(out)}};
    return a;
  }
};

struct BaselineCmd {
  std::string method;
  std::string input;
  double sigma2 = 1.0;
  double epsilon = 0.1;
  std::string threshold_mode = "mc";
  int df = 1;
  std::size_t null_samples = 2000;
  std::string null_prior;
  std::uint64_t seed = 0;
  double lambda = -1.0;
  std::string support;
  int max_d = kDefaultMaxOrderingSize;

  void add(CLI::App* app) {
    app->add_option("--method", method)
        ->required()
        ->check(CLI::IsMember({"glrt", "lasso", "mle-direction"}));
    app->add_option("--input", input, "dataset CSV")->required();
    app->add_option("--sigma2", sigma2)->required();
    app->add_option("--epsilon", epsilon, "glrt false positive target");
    app->add_option("--threshold-mode", threshold_mode)->check(CLI::IsMember({"mc", "chi2"}));
    app->add_option("--df", df, "chi-squared degrees of freedom");
    app->add_option("--null-samples", null_samples);
    app->add_option("--null-prior", null_prior, "random prior JSON for the glrt null (default: empty graph)");
    app->add_option("--seed", seed);
    app->add_option("--lambda", lambda, "lasso regularizer");
    app->add_option("--support", support, "support JSON for mle-direction");
    app->add_option("--max-d", max_d, "ordering enumeration cap");
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "baseline";
    a.inputs.emplace_back(input);
    const auto data = load_dataset(input, sigma2);
    a.seed = seed;
    a.config = {{"method", method}, {"sigma2", sigma2}, {"max_d", max_d}};
    if (method == "glrt") {
      GlrtConfig g;
      g.epsilon = epsilon;
      g.noise_var = sigma2;
      g.mode = threshold_mode == "chi2" ? GlrtThresholdMode::kChiSquared : GlrtThresholdMode::kMonteCarlo;
      g.df = df;
      g.null_samples = null_samples;
      g.seed = sub_seed(seed, "glrt");
      g.max_d = max_d;
      if (!null_prior.empty()) {
        a.inputs.emplace_back(null_prior);
        g.null_model = prior_spec_from_json(load_json(null_prior));
      }
      Json out = to_json(glrt_detect(data, g));
      a.config.update({{"epsilon", epsilon}, {"threshold_mode", threshold_mode}, {"df", df},
                       {"null_samples", null_samples}});
      out["config"] = a.config;
      a.files = {{"glrt.json", dump(out)}};
    } else if (method == "lasso") {
      if (lambda < 0.0) throw ValidationError("lasso needs --lambda >= 0");
      const Matrix coef = lasso_coefficients(data, lambda);
      SupportMatrix s(data.dim());
      for (int i = 0; i < data.dim(); ++i)
        for (int j = i + 1; j < data.dim(); ++j)
          if (coef(i, j) != 0.0 || coef(j, i) != 0.0) s.set_edge(i, j, true);
      Json rows = Json::array();
      for (int i = 0; i < coef.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < coef.cols(); ++j) row.push_back(coef(i, j));
        rows.push_back(row);
      }
      a.config["lambda"] = lambda;
      a.files = {{"lasso.json", dump({{"support", to_json(s)},
                                      {"coefficients", rows},
                                      {"lambda", lambda},
                                      {"lambda_max", lasso_lambda_max(data)},
                                      {"config", a.config}})}};
    } else {
      if (support.empty()) throw ValidationError("mle-direction needs --support");
      a.inputs.emplace_back(support);
      const auto dag = direction_recovery(data, load_support(support), max_d);
      a.files = {{"direction.json", dump({{"dag", to_json(dag)}, {"config", a.config}})},
                 {"direction_edges.csv", edge_list_csv(dag)}};
    }
    return a;
  }
};

struct BenchmarkCmd {
  std::string spec_path;
  std::string import_dir;

  void add(CLI::App* app) {
    app->add_option("--spec", spec_path, "experiment spec JSON")->required();
    app->add_option("--import-support", import_dir,
                    "directory of per-trial support JSONs (<trial>.json)");
  }

  Artifacts run() const {
    Artifacts a;
    a.subcommand = "benchmark";
    a.inputs.emplace_back(spec_path);
    auto spec = experiment_from_json(load_json(spec_path));
    if (!import_dir.empty()) {
      a.inputs.emplace_back(import_dir);
      bool found = false;
      for (auto& m : spec.methods)
        if (m.kind == MethodKind::kImport) {
          m.import_dir = import_dir;
          found = true;
        }
      if (!found) {
        MethodSpec m;
        m.kind = MethodKind::kImport;
        m.import_dir = import_dir;
        spec.methods.push_back(m);
      }
    }
    const auto result = run_experiment(spec);
    Json reports = Json::array();
    Json symmetry = Json::array();
    for (const auto& r : result.reports) {
      reports.push_back(to_json(r));
      const auto diag = symmetry_collapse_check(r, spec.prior);
      symmetry.push_back({{"method", r.method},
                          {"epsilon_target", r.epsilon_target ? Json(*r.epsilon_target) : Json(nullptr)},
                          {"performed", diag.performed},
                          {"reason", diag.reason},
                          {"aggregated", diag.aggregated},
                          {"pair_rate", diag.pair_rate},
                          {"tolerance", diag.tolerance},
                          {"flagged", diag.flagged}});
    }
    Json trials = Json::array();
    for (const auto& t : result.trials) trials.push_back(to_json(t));
    a.seed = spec.seed;
    a.config = to_json(spec);
    a.files = {{"reports.json", dump({{"reports", reports},
                                      {"symmetry", symmetry},
                                      {"empirical_w_plus", result.empirical_w_plus},
                                      {"empirical_w_minus", result.empirical_w_minus}})},
               {"curves.csv", emit_curves(result.reports)},
               {"trials.json", dump(trials)}};
    return a;
  }
};

int run_replay(const std::string& manifest_path, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  const Json m = load_json(manifest_path);
  const fs::path cwd = m.at("cwd").get<std::string>();
  std::vector<std::string> args;
  const auto old = m.at("argv").get<std::vector<std::string>>();
  for (std::size_t k = 0; k < old.size(); ++k) {
    const auto& tok = old[k];
    if (tok == "--out-dir" && k + 1 < old.size()) {
      ++k;
      continue;
    }
    if (tok == "--output" && k + 1 < old.size()) {
      args.push_back(tok);
      args.push_back((out_dir / fs::path(old[++k]).filename()).string());
      continue;
    }
    args.push_back(tok);
    if (kPathFlags.count(tok) && k + 1 < old.size()) {
      fs::path p = old[++k];
      args.push_back((p.is_absolute() ? p : cwd / p).string());
    }
  }
  args.push_back("--out-dir");
  args.push_back(out_dir.string());
  std::ostringstream sink;
  const int rc = dispatch(args, sink, err);
  if (rc != kOk) return rc;
  bool same = true;
  for (const auto& o : m.at("outputs")) {
    const auto name = o.at("file").get<std::string>();
    const auto digest = sha256_hex(read_text(out_dir / name));
    const bool match = digest == o.at("sha256").get<std::string>();
    same &= match;
    out << (match ? "MATCH " : "DIFFER ") << name << "\n";
  }
  return same ? kOk : kRuntimeError;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neyman-Pearson causal discovery for linear Gaussian SEMs", "npcd"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string out_dir = default_out_dir().string();
  int threads = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "output directory (default: $NPCD_OUTPUT_DIR or .)");
    sub->add_option("--threads", threads, "worker threads (default: all available)");
  };

  SimulateCmd simulate;
  DiscoverCmd disc;
  ScoreCmd score;
  CalibrateCmd cal;
  BoundsCmd bnd;
  BaselineCmd base;
  BenchmarkCmd bench;
  std::string manifest;

  auto* s_sim = app.add_subcommand("simulate", "sample a DAG from the prior and simulate data");
  simulate.add(s_sim);
  auto* s_disc = app.add_subcommand("discover", "estimate the support with the residual-gap test");
  disc.add(s_disc);
  auto* s_cal = app.add_subcommand("calibrate", "calibrate the likelihood-ratio detector");
  cal.add(s_cal);
  auto* s_bnd = app.add_subcommand("bounds", "Renyi-divergence bounds on the false negative rate");
  bnd.add(s_bnd);
  auto* s_base = app.add_subcommand("baseline", "GLRT, LASSO or ML direction recovery");
  base.add(s_base);
  auto* s_bench = app.add_subcommand("benchmark", "Monte-Carlo error-rate experiment");
  bench.add(s_bench);
  auto* s_score = app.add_subcommand("score", "tally an estimated support against the truth");
  score.add(s_score);
  auto* s_replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  s_replay->add_option("--manifest", manifest, "manifest.json of an earlier run")->required();
  for (auto* sub : {s_sim, s_disc, s_cal, s_bnd, s_base, s_bench, s_score, s_replay}) common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    set_threads(threads);
    if (s_replay->parsed()) return run_replay(manifest, out_dir, out, err);
    Artifacts a;
    if (s_sim->parsed()) a = simulate.run();
    else if (s_disc->parsed()) a = disc.run();
    else if (s_cal->parsed()) a = cal.run();
    else if (s_bnd->parsed()) a = bnd.run();
    else if (s_base->parsed()) a = base.run();
    else if (s_bench->parsed()) a = bench.run();
    else a = score.run();
    a.out_dir = out_dir;
    if (s_disc->parsed() && !disc.output.empty()) {
      a.out_dir = fs::path(disc.output).has_parent_path() ? fs::path(disc.output).parent_path() : ".";
    }
    write_artifacts(a, args, out);
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace npcd::cli
