#include "npcd/bench.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "npcd/errors.hpp"

namespace npcd {
namespace {

MethodSpec method(MethodKind kind) {
  MethodSpec m;
  m.kind = kind;
  return m;
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  PriorSpec p;
  p.d = 4;
  s.prior = p;
  s.n = 10;
  s.trials = 40;
  s.epsilons = {0.05};
  s.seed = 3;
  s.methods = {method(MethodKind::kOracle), method(MethodKind::kAllEdges), method(MethodKind::kEcut)};
  return s;
}

TEST(BenchTest, OracleAndAllEdgesAnchors) {
  const auto res = run_experiment(small_spec());
  ASSERT_EQ(res.reports.size(), 3u);
  EXPECT_EQ(res.reports[0].method, "oracle");
  EXPECT_EQ(*res.reports[0].eps_plus, 0.0);
  EXPECT_EQ(*res.reports[0].eps_minus, 0.0);
  EXPECT_EQ(res.reports[1].method, "all-edges");
  EXPECT_EQ(*res.reports[1].eps_plus, 1.0);
  EXPECT_EQ(*res.reports[1].eps_minus, 0.0);
  EXPECT_FALSE(res.reports[0].epsilon_target.has_value());
  EXPECT_EQ(*res.reports[2].epsilon_target, 0.05);
}

TEST(BenchTest, RatioOfSumsMatchesDirectRecount) {
  auto spec = small_spec();
  spec.trials = 10;
  const auto res = run_experiment(spec);
  EcutConfig cfg;
  cfg.epsilon = 0.05;
  long fp = 0, fn = 0, nulls = 0, edges = 0;
  for (std::size_t t = 0; t < 10; ++t) {
    const auto draw = draw_trial(spec.prior, spec.n, spec.noise_var, spec.seed, t);
    const auto chi = support_of(draw.truth);
    const auto est = discover(draw.data, cfg).support;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        if (chi.edge(i, j)) {
          ++edges;
          fn += !est.edge(i, j);
        } else {
          ++nulls;
          fp += est.edge(i, j);
        }
      }
  }
  const auto& r = res.reports[2];
  EXPECT_EQ(r.fp_count, static_cast<std::uint64_t>(fp));
  EXPECT_EQ(r.fn_count, static_cast<std::uint64_t>(fn));
  EXPECT_DOUBLE_EQ(*r.eps_plus, static_cast<double>(fp) / nulls);
  EXPECT_DOUBLE_EQ(*r.eps_minus, static_cast<double>(fn) / edges);
}

TEST(BenchTest, DeterministicAndSerialAgrees) {
  auto spec = small_spec();
  MethodSpec glrt = method(MethodKind::kGlrt);
  glrt.glrt_null_samples = 50;
  MethodSpec opt = method(MethodKind::kOptimal);
  opt.optimal_mc_samples = 500;
  MethodSpec lasso = method(MethodKind::kLasso);
  lasso.lasso_lambdas = {0.1, 0.5};
  spec.methods.insert(spec.methods.end(), {glrt, lasso});
  spec.trials = 12;
  const auto a = run_experiment(spec), b = run_experiment(spec), c = run_experiment_serial(spec);
  EXPECT_EQ(emit_curves(a.reports), emit_curves(b.reports));
  EXPECT_EQ(emit_curves(a.reports), emit_curves(c.reports));

  auto enumerated = spec;
  enumerated.prior = EnumeratedPrior::uniform(3, {1.0});
  enumerated.methods = {opt, method(MethodKind::kEcut)};
  EXPECT_EQ(emit_curves(run_experiment(enumerated).reports),
            emit_curves(run_experiment_serial(enumerated).reports));
}

TEST(BenchTest, CurveRowsPerMethodAndEpsilon) {
  EXPECT_EQ(emit_curves({}), "method,epsilon_target,eps_plus,eps_minus,se_plus,se_minus,trials\n");
  auto spec = small_spec();
  spec.trials = 5;
  spec.epsilons = {0.01, 0.02, 0.05, 0.1, 0.2};
  MethodSpec single = method(MethodKind::kEcut);
  single.ecut_mode = ThresholdMode::kSingle;
  spec.methods = {method(MethodKind::kEcut), single};
  const auto csv = emit_curves(run_experiment(spec).reports);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_NE(csv.find("\necut-single,0.20000000000000001,"), std::string::npos);
}

TEST(BenchTest, LassoRowsCarryRegularizer) {
  auto spec = small_spec();
  spec.trials = 3;
  MethodSpec lasso = method(MethodKind::kLasso);
  lasso.lasso_lambdas = {0.25};
  spec.methods = {lasso};
  const auto csv = emit_curves(run_experiment(spec).reports);
  EXPECT_NE(csv.find("\nlasso@0.25,,"), std::string::npos);
}

TEST(BenchTest, EmpiricalWeightsSumToOne) {
  const auto res = run_experiment(small_spec());
  double sp = 0.0, sm = 0.0;
  for (double w : res.empirical_w_plus) sp += w;
  for (double w : res.empirical_w_minus) sm += w;
  EXPECT_NEAR(sp, 1.0, 1e-12);
  EXPECT_NEAR(sm, 1.0, 1e-12);
}

TEST(BenchTest, FailedTrialsAreExcluded) {
  auto spec = small_spec();
  spec.trials = 4;
  MethodSpec imp = method(MethodKind::kImport);
  imp.import_dir = "/nonexistent/npcd-import";
  spec.methods = {imp, method(MethodKind::kOracle)};
  const auto res = run_experiment(spec);
  EXPECT_EQ(res.reports[0].excluded_trials, 4u);
  EXPECT_EQ(res.reports[0].trials, 0u);
  EXPECT_FALSE(res.reports[0].eps_plus.has_value());
  EXPECT_EQ(res.reports[1].trials, 4u);
}

TEST(BenchTest, SymmetryCheckSkipsAsymmetricPrior) {
  auto spec = small_spec();
  std::get<PriorSpec>(spec.prior).relabel = false;
  const auto res = run_experiment(spec);
  const auto diag = symmetry_collapse_check(res.reports[2], spec.prior);
  EXPECT_FALSE(diag.performed);
  EXPECT_FALSE(diag.reason.empty());
}

TEST(BenchTest, SymmetryCheckUndefinedWithoutAbsentPairs) {
  auto spec = small_spec();
  spec.prior = EnumeratedPrior({{WeightedDag(Matrix{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}), 1.0}});
  const auto res = run_experiment(spec);
  EXPECT_FALSE(res.reports[2].eps_plus.has_value());
  EXPECT_FALSE(symmetry_collapse_check(res.reports[2], spec.prior).performed);
}

TEST(BenchTest, SymmetryCheckPassesOnRelabeledPrior) {
  auto spec = small_spec();
  spec.trials = 300;
  spec.methods = {method(MethodKind::kEcut)};
  spec.epsilons = {0.2};
  const auto res = run_experiment(spec);
  const auto diag = symmetry_collapse_check(res.reports[0], spec.prior);
  EXPECT_TRUE(diag.performed);
  EXPECT_FALSE(diag.flagged) << diag.aggregated << " vs " << diag.pair_rate;
}

TEST(BenchTest, ValidationErrors) {
  auto spec = small_spec();
  spec.trials = 0;
  EXPECT_THROW(spec.validate(), ValidationError);
  spec = small_spec();
  spec.epsilons = {1.5};
  EXPECT_THROW(spec.validate(), ValidationError);
  EXPECT_THROW(parse_method_kind("magic"), ValidationError);
  EXPECT_EQ(parse_method_kind("all-edges"), MethodKind::kAllEdges);
}

}  // namespace
}  // namespace npcd
