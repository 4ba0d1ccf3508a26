#pragma once

#include "osc/experiments.hpp"
#include "osc/kmeans.hpp"
#include "osc/metrics.hpp"
#include "osc/pipeline.hpp"
#include "osc/theorem_lab.hpp"

#include <json.hpp>

namespace osc {

using Json = nlohmann::ordered_json;

Json to_json(const KMeansConfig& cfg);
Json to_json(const MetricsReport& metrics);
Json to_json(const StageTimings& timings);

/// {dataset, N, p, theta0, m, theta_of_m, timings_ms, kmeans{...}, metrics?, seed}
Json to_json(const OscReport& report);

Json to_json(const lab::SubspaceModel& model);
Json to_json(const lab::TheoremVerdict& verdict);
Json to_json(const lab::DecayStudy& study);

Json to_json(const experiments::ExperimentConfig& cfg);
Json to_json(const experiments::RunRecord& run);
Json to_json(const experiments::Cell& cell);
Json to_json(const experiments::ExperimentReport& report);

/// Decay table as delimited text: N,cross_block_max,within_offdiag_max,within_offdiag_rms
std::string decay_table_csv(const lab::DecayStudy& study);

}  // namespace osc
