#pragma once

#include "osc/kmeans.hpp"
#include "osc/matrix.hpp"
#include "osc/pipeline.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace osc::experiments {

struct ExperimentConfig {
    std::string dataset;                      ///< matrix path, recorded only
    std::string labels;                       ///< label path, recorded only
    std::vector<double> theta_grid{0.70, 0.75, 0.80, 0.85, 0.90};
    double theta0 = kDefaultTheta0;           ///< used by subset and bench
    int k = 0;                                ///< 0: number of distinct labels
    int repeats = 20;
    std::vector<int> subset_counts{2, 4, 7, 15, 30};
    std::uint64_t seed = 0;
    std::vector<Baseline> baselines;
    KMeansConfig kmeans;                      ///< k and seed are set per run
};

/// Throws Error{InvalidArgument} on repeats < 1 or theta values outside (0, 1].
void check_config(const ExperimentConfig& cfg);

/// One clustering run; the unit every aggregate cell is recomputed from.
struct RunRecord {
    int run_index = 0;
    std::string setting;  ///< e.g. "theta=0.8", "n=4", "all"
    std::string method;   ///< "osc", "raw-kmeans", "pca-kmeans"
    double theta0 = 0.0;
    Eigen::Index m = 0;
    std::uint64_t seed = 0;
    std::optional<MetricsReport> metrics;
    StageTimings timings;
    std::vector<double> objective_trace;
    int iterations = 0;
    std::vector<int> categories; ///< subset runs: the sampled labels
};

struct Summary {
    double mean = 0.0;
    double sd = 0.0; ///< sample standard deviation, 0 for a single run
};

Summary summarize(const std::vector<double>& values);

struct Cell {
    std::string setting;
    std::string method;
    int runs = 0;
    double m_mean = 0.0;
    std::optional<Summary> acc, nmi, ari;
    Summary standardize_ms, eigen_ms, kmeans_ms, total_ms;
};

struct Environment {
    int threads = 1;
    std::string build_id;
    std::string rng;
};

Environment environment();

struct ExperimentReport {
    std::string kind; ///< "sweep", "subset", "bench"
    std::string dataset;
    ExperimentConfig config;
    std::vector<Cell> cells;
    std::vector<RunRecord> runs;
    Environment env;
};

/// Groups runs by (setting, method) in first-appearance order and reduces
/// them in run_index order.
std::vector<Cell> aggregate(const std::vector<RunRecord>& runs);

/// OSC (plus enabled baselines) for every theta0 in the grid x repeats.
/// Repeat r uses k-means seed derive_seed(cfg.seed, r). Needs labels.
ExperimentReport sweep_theta(const DataMatrix& data, const ExperimentConfig& cfg);

/// For each category count n, repeat r samples n label classes uniformly
/// (seed derive_seed(derive_seed(cfg.seed, n), r)), keeps every sample of
/// those classes and clusters with k = n.
/// Throws Error{NotEnoughCategories}.
ExperimentReport subset_robustness(const DataMatrix& data, const ExperimentConfig& cfg);

/// Stage timings of OSC and the enabled baselines over cfg.repeats runs.
/// pca-kmeans uses the m chosen by OSC in the same repeat.
ExperimentReport bench_runtime(const DataMatrix& data, const ExperimentConfig& cfg);

/// report.json, per-run.jsonl, trace-<run>.csv and table.csv under out_dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace osc::experiments
