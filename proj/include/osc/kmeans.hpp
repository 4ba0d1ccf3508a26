#pragma once

#include "osc/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace osc {

struct KMeansConfig {
    int k = 2;
    int max_iter = 300;
    double tol = 1e-6;  ///< stop when (J_prev - J) <= tol * J_prev
    int restarts = 10;
    std::uint64_t seed = 0;
};

struct ClusterResult {
    std::vector<int> assignments;        ///< length N, values in [0, k)
    Matrix centroids;                    ///< k x m
    std::vector<double> objective_trace; ///< winning restart, one entry per iteration
    int iterations = 0;
    std::uint64_t seed_used = 0;         ///< engine seed of the winning restart
    int restart_index = 0;
    std::string rng;                     ///< generator identity

    double objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

/// Lloyd's algorithm with k-means++ seeding over cfg.restarts independent
/// starts; restart r draws from Rng(derive_seed(cfg.seed, r)). The restart
/// with the lowest final objective wins, lowest index on equal objectives.
///
/// Each iteration assigns every point to its nearest centroid (lowest index
/// on ties), repairs empty clusters by moving in the point farthest from its
/// centroid, recomputes the means and records the resulting objective.
///
/// Throws Error{TooFewPoints} when N < k, Error{NonFinite} on NaN/Inf,
/// Error{InvalidArgument} on k < 1, restarts < 1 or max_iter < 1.
ClusterResult kmeans(const Matrix& points, const KMeansConfig& cfg);

/// Sum of squared distances from each point to its assigned centroid.
double kmeans_objective(const Matrix& points, const Matrix& centroids, const std::vector<int>& assignments);

}  // namespace osc
