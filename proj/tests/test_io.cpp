#include "npcd/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "npcd/errors.hpp"

namespace npcd {
namespace {

WeightedDag chain3() {
  Matrix a = Matrix::Zero(3, 3);
  a(1, 0) = 0.5;
  a(2, 1) = -1.25;
  return WeightedDag(a);
}

TEST(IoTest, NonFiniteNumbers) {
  EXPECT_EQ(number_to_json(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(number_to_json(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(number_from_json(number_to_json(std::nan("")))));
  EXPECT_EQ(number_from_json(number_to_json(0.1)), 0.1);
  EXPECT_THROW(number_from_json(Json("seven")), ValidationError);
}

TEST(IoTest, DagAndSupportRoundTrip) {
  const auto dag = chain3();
  EXPECT_EQ(dag_from_json(to_json(dag)), dag);
  const auto s = support_of(dag);
  EXPECT_EQ(support_from_json(to_json(s)), s);
  EXPECT_THROW(dag_from_json(Json::parse(R"({"d":2,"rows":[[0,1],[1,0]]})")), ValidationError);
}

TEST(IoTest, EdgeListSortedBySource) {
  EXPECT_EQ(edge_list_csv(chain3()), "src,dst,weight\n0,1,0.5\n1,2,-1.25\n");
}

TEST(IoTest, DatasetCsvRoundTripIsExact) {
  Rng rng(1);
  const auto data = simulate(chain3(), 7, 1.0, rng);
  const auto text = dataset_csv(data);
  EXPECT_EQ(text.substr(0, 9), "x1,x2,x3\n");
  EXPECT_EQ(parse_dataset_csv(text), data.values());
}

TEST(IoTest, DatasetCsvErrors) {
  EXPECT_THROW(parse_dataset_csv(""), ValidationError);
  EXPECT_THROW(parse_dataset_csv("x1,x3\n1,2\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("x1,x2\n1\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("x1,x2\n1,abc\n"), ValidationError);
  EXPECT_THROW(parse_dataset_csv("x1,x2\n"), ValidationError);
}

TEST(IoTest, PriorRoundTrips) {
  PriorSpec p;
  p.d = 6;
  p.edge_prob = 0.3;
  p.weight_law = FiniteSupport{{1.0, 2.0}, {0.25, 0.75}};
  p.relabel = false;
  const auto back = std::get<PriorSpec>(prior_from_json(to_json(ExperimentPrior{p})));
  EXPECT_EQ(back.d, 6);
  EXPECT_EQ(back.edge_prob, 0.3);
  EXPECT_FALSE(back.relabel);
  EXPECT_EQ(std::get<FiniteSupport>(back.weight_law).probabilities[1], 0.75);

  const auto e = EnumeratedPrior::uniform(2, {1.0, -1.0});
  const auto e2 = enumerated_prior_from_json(to_json(e));
  ASSERT_EQ(e2.structures().size(), e.structures().size());
  EXPECT_EQ(e2.w_plus(0, 1), e.w_plus(0, 1));
  const auto u = enumerated_prior_from_json(Json::parse(R"({"kind":"uniform-enumerated","d":3,"weights":[1]})"));
  EXPECT_EQ(u.structures().size(), 25u);
  EXPECT_THROW(enumerated_prior_from_json(to_json(ExperimentPrior{p})), ValidationError);
}

TEST(IoTest, DetectorRoundTrip) {
  CalibratedDetector d;
  d.log_gamma = -std::numeric_limits<double>::infinity();
  d.eta = 0.25;
  d.epsilon = 0.1;
  d.warnings = {"w"};
  const auto back = detector_from_json(to_json(d));
  EXPECT_EQ(back.log_gamma, d.log_gamma);
  EXPECT_EQ(back.eta, 0.25);
  EXPECT_EQ(back.epsilon, 0.1);
}

TEST(IoTest, ExperimentSpecRoundTrip) {
  ExperimentSpec s;
  s.n = 12;
  s.trials = 7;
  s.epsilons = {0.1, 0.2};
  s.seed = 99;
  MethodSpec m;
  m.kind = MethodKind::kLasso;
  m.lasso_lambdas = {0.5};
  MethodSpec e;
  e.ecut_mode = ThresholdMode::kSingle;
  e.max_parent_size = 1;
  s.methods = {m, e};
  const auto back = experiment_from_json(to_json(s));
  EXPECT_EQ(dump(to_json(back)), dump(to_json(s)));
  EXPECT_THROW(experiment_from_json(Json::parse(R"({"methods":[{"kind":"nope"}]})")), ValidationError);
}

TEST(IoTest, WriteTextCreatesDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "npcd-io-test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text(dir / "f.txt", "hello");
  EXPECT_EQ(read_text(dir / "f.txt"), "hello");
  EXPECT_THROW(read_text(dir / "missing.txt"), std::exception);
  std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace npcd
