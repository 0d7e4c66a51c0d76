#include "npcd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "npcd/errors.hpp"
#include "npcd/io.hpp"
#include "npcd/parallel.hpp"

namespace npcd {

const char* method_kind_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kEcut: return "ecut";
    case MethodKind::kOracle: return "oracle";
    case MethodKind::kAllEdges: return "all-edges";
    case MethodKind::kGlrt: return "glrt";
    case MethodKind::kLasso: return "lasso";
    case MethodKind::kOptimal: return "optimal";
    case MethodKind::kImport: return "import";
  }
  return "?";
}

MethodKind parse_method_kind(const std::string& name) {
  for (auto k : {MethodKind::kEcut, MethodKind::kOracle, MethodKind::kAllEdges, MethodKind::kGlrt,
                 MethodKind::kLasso, MethodKind::kOptimal, MethodKind::kImport}) {
    if (name == method_kind_name(k)) return k;
  }
  throw ValidationError("unknown method '" + name + "'");
}

std::string MethodSpec::name() const {
  if (!label.empty()) return label;
  if (kind == MethodKind::kEcut && ecut_mode == ThresholdMode::kSingle) return "ecut-single";
  return method_kind_name(kind);
}

bool MethodSpec::epsilon_dependent() const {
  return kind == MethodKind::kEcut || kind == MethodKind::kGlrt || kind == MethodKind::kOptimal;
}

int ExperimentSpec::dim() const {
  return std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PriorSpec>) return p.d;
        else return p.dim();
      },
      prior);
}

void ExperimentSpec::validate() const {
  if (const auto* p = std::get_if<PriorSpec>(&prior)) p->validate();
  if (n < 1) throw ValidationError("experiment: n must be >= 1");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw ValidationError("experiment: noise variance must be positive");
  if (trials < 1) throw ValidationError("experiment: trials must be >= 1");
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("experiment: epsilon grid must lie in (0, 1)");
  for (const auto& m : methods) {
    if (m.epsilon_dependent() && epsilons.empty())
      throw ValidationError("experiment: method " + m.name() + " needs an epsilon grid");
    if (m.kind == MethodKind::kLasso) {
      if (m.lasso_lambdas.empty()) throw ValidationError("experiment: lasso needs a lambda grid");
      for (double l : m.lasso_lambdas)
        if (!(l >= 0.0)) throw ValidationError("experiment: lasso lambdas must be >= 0");
    }
    if (m.kind == MethodKind::kOptimal && !std::holds_alternative<EnumeratedPrior>(prior))
      throw ValidationError("experiment: the optimal detector needs an enumerated prior");
    if (m.kind == MethodKind::kImport && m.import_dir.empty())
      throw ValidationError("experiment: import needs a directory");
    if (m.kind == MethodKind::kGlrt && dim() > kDefaultMaxOrderingSize)
      throw CapacityError("experiment: glrt ordering search is capped at d = 7");
  }
}

namespace {

// One report column: a method at one epsilon (or lasso regularizer).
struct Slot {
  std::size_t method = 0;
  std::optional<double> epsilon;
  std::optional<double> parameter;
  EcutConfig ecut;
  double glrt_threshold = 0.0;
  CalibratedDetector optimal;
};

struct Prepared {
  int d = 0;
  std::vector<Slot> slots;
  std::vector<EdgeLikelihoodModel> models;
  NullModel glrt_null = PriorSpec{};
};

Prepared prepare(const ExperimentSpec& spec) {
  spec.validate();
  Prepared p;
  p.d = spec.dim();
  const StreamFactory root(spec.seed);

  if (const auto* ps = std::get_if<PriorSpec>(&spec.prior)) {
    p.glrt_null = *ps;
  } else {
    p.glrt_null = WeightedDag::empty(p.d);
  }
  bool need_models = false;
  for (const auto& m : spec.methods) need_models |= m.kind == MethodKind::kOptimal;
  if (need_models) {
    p.models = build_edge_models(std::get<EnumeratedPrior>(spec.prior), spec.noise_var, spec.n);
  }

  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
    const auto& m = spec.methods[mi];
    if (m.kind == MethodKind::kLasso) {
      for (double l : m.lasso_lambdas) {
        Slot s;
        s.method = mi;
        s.parameter = l;
        p.slots.push_back(s);
      }
      continue;
    }
    if (!m.epsilon_dependent()) {
      Slot s;
      s.method = mi;
      p.slots.push_back(s);
      continue;
    }
    for (std::size_t ei = 0; ei < spec.epsilons.size(); ++ei) {
      const double eps = spec.epsilons[ei];
      Slot s;
      s.method = mi;
      s.epsilon = eps;
      const std::uint64_t slot_seed = root.seed_for("calibration", p.slots.size());
      if (m.kind == MethodKind::kEcut) {
        s.ecut.epsilon = eps;
        s.ecut.noise_var = spec.noise_var;
        s.ecut.mode = m.ecut_mode;
        s.ecut.max_parent_size = m.max_parent_size;
        s.ecut.validate();
        (void)s.ecut.resolved_parent_cap(p.d, spec.n);
      } else if (m.kind == MethodKind::kGlrt) {
        GlrtConfig g;
        g.epsilon = eps;
        g.noise_var = spec.noise_var;
        g.mode = m.glrt_mode;
        g.df = m.glrt_df;
        g.null_model = p.glrt_null;
        g.null_samples = m.glrt_null_samples;
        g.seed = slot_seed;
        s.glrt_threshold = glrt_threshold(g, p.d, spec.n);
      } else {
        s.optimal = calibrate(p.models, eps, m.optimal_mc_samples, slot_seed);
      }
      p.slots.push_back(s);
    }
  }
  return p;
}

std::size_t pair_count(int d) { return static_cast<std::size_t>(d) * (d - 1) / 2; }

std::optional<SupportMatrix> load_import(const std::string& dir, std::size_t trial) {
  const auto path = std::filesystem::path(dir) / (std::to_string(trial) + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  return support_from_json(Json::parse(read_text(path)));
}

TrialRecord run_trial(const ExperimentSpec& spec, const Prepared& prep, std::size_t t) {
  const auto [truth, data] = draw_trial(spec.prior, spec.n, spec.noise_var, spec.seed, t);
  const StreamFactory trial_streams(StreamFactory(spec.seed).seed_for("trial", t));
  const SupportMatrix chi = support_of(truth);
  const int d = prep.d;

  TrialRecord rec;
  rec.trial = t;
  rec.truth.reserve(pair_count(d));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      rec.truth.push_back(chi.edge(i, j) ? 1 : 0);
      if (chi.edge(i, j)) ++rec.edges;
      else ++rec.null_slots;
    }

  std::optional<Matrix> glrt_stats;
  for (std::size_t s = 0; s < prep.slots.size(); ++s) {
    const Slot& slot = prep.slots[s];
    const MethodSpec& m = spec.methods[slot.method];
    TrialOutcome out;
    try {
      SupportMatrix est(d);
      switch (m.kind) {
        case MethodKind::kEcut: est = discover_serial(data, slot.ecut).support; break;
        case MethodKind::kOracle: est = chi; break;
        case MethodKind::kAllEdges: est = SupportMatrix::full(d); break;
        case MethodKind::kGlrt: {
          if (!glrt_stats) glrt_stats = glrt_statistics(search_orderings_serial(data), spec.noise_var);
          for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
              if ((*glrt_stats)(i, j) > slot.glrt_threshold) est.set_edge(i, j, true);
          break;
        }
        case MethodKind::kLasso: est = lasso_neighborhood(data, *slot.parameter); break;
        case MethodKind::kOptimal: {
          Rng tie = trial_streams.stream("tie", s);
          est = detect(prep.models, slot.optimal, data, tie);
          break;
        }
        case MethodKind::kImport: {
          auto loaded = load_import(m.import_dir, t);
          if (!loaded) throw std::runtime_error("no imported support for trial " + std::to_string(t));
          if (loaded->size() != d) throw ValidationError("imported support has the wrong size");
          est = *loaded;
          break;
        }
      }
      int k = 0;
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j, ++k) {
          if (est.edge(i, j) && !chi.edge(i, j)) {
            ++out.fp;
            out.fp_pairs.push_back(k);
          } else if (!est.edge(i, j) && chi.edge(i, j)) {
            ++out.fn;
          }
        }
    } catch (const std::exception& e) {
      out = TrialOutcome{};
      out.failed = true;
      out.error = e.what();
    }
    rec.outcomes.push_back(std::move(out));
  }
  return rec;
}

struct RatioSe {
  double batched = 0.0;
  double delta = 0.0;
};

RatioSe ratio_se(const std::vector<double>& num, const std::vector<double>& den) {
  RatioSe se;
  const std::size_t t = num.size();
  double sn = 0.0, sd = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    sn += num[k];
    sd += den[k];
  }
  if (sd <= 0.0 || t < 2) return se;
  const double r = sn / sd;
  double acc = 0.0;
  for (std::size_t k = 0; k < t; ++k) acc += (num[k] - r * den[k]) * (num[k] - r * den[k]);
  const double mean_den = sd / static_cast<double>(t);
  se.delta = std::sqrt(acc / (static_cast<double>(t) * static_cast<double>(t - 1))) / mean_den;

  const std::size_t batches = std::min<std::size_t>(30, t);
  std::vector<double> rates;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * t / batches, hi = (b + 1) * t / batches;
    double bn = 0.0, bd = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      bn += num[k];
      bd += den[k];
    }
    if (bd > 0.0) rates.push_back(bn / bd);
  }
  if (rates.size() >= 2) {
    double mean = 0.0;
    for (double x : rates) mean += x;
    mean /= static_cast<double>(rates.size());
    double var = 0.0;
    for (double x : rates) var += (x - mean) * (x - mean);
    var /= static_cast<double>(rates.size() - 1);
    se.batched = std::sqrt(var / static_cast<double>(rates.size()));
  }
  return se;
}

ExperimentResult aggregate(const ExperimentSpec& spec, const Prepared& prep,
                           std::vector<TrialRecord> records) {
  ExperimentResult res;
  const std::size_t pairs = pair_count(prep.d);
  for (std::size_t s = 0; s < prep.slots.size(); ++s) {
    const Slot& slot = prep.slots[s];
    ErrorRateReport r;
    r.method = spec.methods[slot.method].name();
    r.epsilon_target = slot.epsilon;
    r.parameter = slot.parameter;
    r.pair_fp.assign(pairs, 0);
    r.pair_null.assign(pairs, 0);
    std::vector<double> fp, nul, fn, edg;
    for (const auto& rec : records) {
      const auto& o = rec.outcomes[s];
      if (o.failed) {
        ++r.excluded_trials;
        continue;
      }
      ++r.trials;
      r.fp_count += o.fp;
      r.fn_count += o.fn;
      r.tn_count += static_cast<std::uint64_t>(rec.null_slots) - o.fp;
      r.tp_count += static_cast<std::uint64_t>(rec.edges) - o.fn;
      for (std::size_t k = 0; k < pairs; ++k)
        if (!rec.truth[k]) ++r.pair_null[k];
      for (int k : o.fp_pairs) ++r.pair_fp[static_cast<std::size_t>(k)];
      fp.push_back(o.fp);
      nul.push_back(rec.null_slots);
      fn.push_back(o.fn);
      edg.push_back(rec.edges);
    }
    const auto nulls = r.fp_count + r.tn_count;
    const auto edges = r.fn_count + r.tp_count;
    if (nulls > 0) r.eps_plus = static_cast<double>(r.fp_count) / static_cast<double>(nulls);
    if (edges > 0) r.eps_minus = static_cast<double>(r.fn_count) / static_cast<double>(edges);
    const auto sp = ratio_se(fp, nul);
    const auto sm = ratio_se(fn, edg);
    r.se_plus = sp.batched;
    r.delta_se_plus = sp.delta;
    r.se_minus = sm.batched;
    r.delta_se_minus = sm.delta;
    res.reports.push_back(std::move(r));
  }

  std::vector<double> null_count(pairs, 0.0), edge_count(pairs, 0.0);
  double total_null = 0.0, total_edge = 0.0;
  for (const auto& rec : records)
    for (std::size_t k = 0; k < pairs; ++k) {
      if (rec.truth[k]) {
        edge_count[k] += 1.0;
        total_edge += 1.0;
      } else {
        null_count[k] += 1.0;
        total_null += 1.0;
      }
    }
  if (total_null > 0)
    for (double c : null_count) res.empirical_w_plus.push_back(c / total_null);
  if (total_edge > 0)
    for (double c : edge_count) res.empirical_w_minus.push_back(c / total_edge);
  res.trials = std::move(records);
  return res;
}

}  // namespace

TrialDraw draw_trial(const ExperimentPrior& prior, int n, double noise_var, std::uint64_t seed,
                     std::size_t trial) {
  const StreamFactory streams(StreamFactory(seed).seed_for("trial", trial));
  Rng rng = streams.stream("truth", 0);
  WeightedDag truth = std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PriorSpec>) return sample_prior(p, rng);
        else return p.sample(rng);
      },
      prior);
  Rng data_rng = streams.stream("data", 0);
  Dataset data = simulate(truth, n, noise_var, data_rng);
  return {std::move(truth), std::move(data)};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const Prepared prep = prepare(spec);
  std::vector<TrialRecord> records(spec.trials);
  const auto total = static_cast<std::ptrdiff_t>(spec.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    records[static_cast<std::size_t>(t)] = run_trial(spec, prep, static_cast<std::size_t>(t));
  }
  return aggregate(spec, prep, std::move(records));
}

ExperimentResult run_experiment_serial(const ExperimentSpec& spec) {
  const Prepared prep = prepare(spec);
  std::vector<TrialRecord> records;
  records.reserve(spec.trials);
  for (std::size_t t = 0; t < spec.trials; ++t) records.push_back(run_trial(spec, prep, t));
  return aggregate(spec, prep, std::move(records));
}

bool prior_is_symmetric(const ExperimentPrior& prior) {
  if (const auto* p = std::get_if<PriorSpec>(&prior)) return p->relabel;
  const auto& e = std::get<EnumeratedPrior>(prior);
  const int d = e.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(e.null_mass(i, j) - e.null_mass(0, 1)) > 1e-12) return false;
  return true;
}

SymmetryDiagnostic symmetry_collapse_check(const ErrorRateReport& report,
                                           const ExperimentPrior& prior) {
  SymmetryDiagnostic diag;
  if (!prior_is_symmetric(prior)) {
    diag.reason = "prior is not invariant under relabeling";
    return diag;
  }
  if (report.pair_null.empty()) {
    diag.reason = "fewer than two vertices";
    return diag;
  }
  if (!report.eps_plus) {
    diag.reason = "eps_plus undefined: no absent-edge slots";
    return diag;
  }
  if (report.pair_null[0] == 0) {
    diag.reason = "pair (0, 1) never absent";
    return diag;
  }
  diag.performed = true;
  diag.aggregated = *report.eps_plus;
  const double m = static_cast<double>(report.pair_null[0]);
  diag.pair_rate = static_cast<double>(report.pair_fp[0]) / m;
  const double pair_se = std::sqrt(diag.pair_rate * (1.0 - diag.pair_rate) / m);
  diag.tolerance = 3.0 * std::sqrt(report.se_plus * report.se_plus + pair_se * pair_se);
  diag.flagged = std::abs(diag.aggregated - diag.pair_rate) > diag.tolerance;
  return diag;
}

namespace {

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string csv_method(const ErrorRateReport& r) {
  std::string m = r.method;
  if (r.parameter) m += "@" + csv_number(r.parameter);
  return m;
}

}  // namespace

std::string emit_curves(const std::vector<ErrorRateReport>& reports) {
  std::string out = "method,epsilon_target,eps_plus,eps_minus,se_plus,se_minus,trials\n";
  for (const auto& r : reports) {
    out += csv_method(r) + "," + csv_number(r.epsilon_target) + "," + csv_number(r.eps_plus) + "," +
           csv_number(r.eps_minus) + "," + csv_number(r.se_plus) + "," + csv_number(r.se_minus) +
           "," + std::to_string(r.trials) + "\n";
  }
  return out;
}

}  // namespace npcd
