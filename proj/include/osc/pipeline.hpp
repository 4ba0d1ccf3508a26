#pragma once

#include "osc/factor_model.hpp"
#include "osc/kmeans.hpp"
#include "osc/matrix.hpp"
#include "osc/metrics.hpp"

#include <optional>
#include <string>

namespace osc {

/// Wall-clock milliseconds per stage. `total` brackets the three stages;
/// metric evaluation happens afterwards and is not included.
struct StageTimings {
    double standardize = 0.0; ///< centering, scaling, correlation matrix
    double eigen = 0.0;       ///< decomposition, dimension selection, loadings
    double kmeans = 0.0;
    double total = 0.0;
};

struct OscReport {
    std::string dataset;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    double theta0 = kDefaultTheta0;
    Eigen::Index m = 0;
    double theta_of_m = 0.0;
    StageTimings timings;
    ClusterResult clusters;
    std::optional<MetricsReport> metrics;
    std::uint64_t seed = 0;
};

/// standardize -> fit -> k-means on the N x m embedding; metrics when the
/// data carries labels. Throws Error{InvalidArgument} unless 2 <= k <= N.
OscReport run_osc(const DataMatrix& data, double theta0, const KMeansConfig& cfg);

/// Same, also handing back the fitted model.
OscReport run_osc(const DataMatrix& data, double theta0, const KMeansConfig& cfg, FactorModel* model_out);

enum class Baseline { RawKMeans, PcaKMeans };

std::string_view baseline_name(Baseline b);
std::optional<Baseline> parse_baseline(std::string_view name);

/// Baseline run reported in the same shape as OSC. `m` is the PCA dimension
/// for PcaKMeans (ignored for RawKMeans, which clusters the raw rows).
OscReport run_baseline(const DataMatrix& data, Baseline which, Eigen::Index m, const KMeansConfig& cfg);

/// Top-m feature-space principal-component scores of the column-centered data.
Matrix pca_scores(const Matrix& x, Eigen::Index m);

}  // namespace osc
