#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "npcd/baselines.hpp"
#include "npcd/bench.hpp"
#include "npcd/bounds.hpp"
#include "npcd/ecut.hpp"
#include "npcd/graph.hpp"
#include "npcd/np_opt.hpp"
#include "npcd/sem.hpp"

namespace npcd {

using Json = nlohmann::json;

// Non-finite doubles travel as the strings "inf", "-inf" and "nan".
Json number_to_json(double v);
double number_from_json(const Json& j);

Json to_json(const WeightedDag& dag);  // {d, rows}
WeightedDag dag_from_json(const Json& j);
Json to_json(const SupportMatrix& s);  // {d, rows}
SupportMatrix support_from_json(const Json& j);

/// src,dst,weight per edge with 0-based vertices, sorted by (src, dst).
std::string edge_list_csv(const WeightedDag& dag);

/// Header x1..xd, values printed with 17 significant digits.
std::string dataset_csv(const Dataset& data);
Matrix parse_dataset_csv(const std::string& text);

Json to_json(const WeightLaw& law);
WeightLaw weight_law_from_json(const Json& j);
Json to_json(const PriorSpec& spec);
PriorSpec prior_spec_from_json(const Json& j);
Json to_json(const EnumeratedPrior& prior);

/// {"kind": "random", d, edge_prob, weight_law, relabel}
/// {"kind": "enumerated", d, structures: [{probability, dag}]}
/// {"kind": "uniform-enumerated", d, weights: [...], max_d}
ExperimentPrior prior_from_json(const Json& j);
Json to_json(const ExperimentPrior& prior);
/// Enumerated priors only; a random prior is rejected with ValidationError.
EnumeratedPrior enumerated_prior_from_json(const Json& j);

Json to_json(const CalibratedDetector& det);
CalibratedDetector detector_from_json(const Json& j);
Json to_json(const DetectorRates& rates);
Json to_json(const BoundsReport& report);
Json to_json(const EdgeDecisionTrace& trace);
Json to_json(const DiscoveryResult& result);
Json to_json(const GlrtResult& result);

Json to_json(const MethodSpec& m);
MethodSpec method_from_json(const Json& j);
Json to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const Json& j);
Json to_json(const ErrorRateReport& r);
Json to_json(const TrialRecord& t);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);
std::string dump(const Json& j);  // indented, trailing newline

}  // namespace npcd
