#pragma once

#include "osc/matrix.hpp"

#include <cstdint>
#include <vector>

namespace osc::lab {

/// Union-of-subspaces generative model: cluster i holds N_i columns
/// y = z + e with z drawn on an m_i-dimensional subspace S_i and
/// e ~ N(0, sigma_i^2 I_p).
struct SubspaceModel {
    int p = 100;
    std::vector<int> subspace_dims;   ///< m_i
    std::vector<int> cluster_sizes;   ///< N_i
    std::vector<double> noise_sigmas; ///< sigma_i
    std::vector<double> signal_min_eig; ///< c_i, signal covariance c_i I on S_i
    /// Length of the signal mean, placed along the first basis vector of
    /// each S_i. Zero gives centered signals.
    double signal_mean = 0.0;
    /// In [0, 1). Rotates basis i toward basis i-1 by overlap * pi/2, so
    /// adjacent separations become cos(overlap * pi/2).
    double overlap = 0.0;
    std::uint64_t seed = 0;

    int k() const { return static_cast<int>(subspace_dims.size()); }
    int total_samples() const;
    int union_dim() const; ///< sum of m_i (bases are built linearly independent)
};

/// Throws Error{InfeasibleDims} when sum m_i > p, Error{InvalidArgument} on
/// inconsistent list lengths or out-of-range values.
void check_model(const SubspaceModel& model);

struct SyntheticSample {
    Matrix y;       ///< p x N, columns grouped by cluster
    Matrix signal;  ///< p x N, the z part
    Matrix noise;   ///< p x N, the e part
    Labels labels;  ///< cluster of each column
    std::vector<Matrix> bases; ///< p x m_i orthonormal
    Matrix union_basis;        ///< p x sum(m_i) orthonormal span of all S_i

    /// Columns as sample rows, labels attached.
    DataMatrix as_data(const std::string& name = "synthetic") const;
};

/// Draws one sample using model.seed.
SyntheticSample generate(const SubspaceModel& model);

/// min over cluster pairs of ||P_i - P_j||_2.
double subspace_separation(const std::vector<Matrix>& bases);

/// Averaged residual-covariance diagnostics. "Block means" are means of the
/// entries of a block of the trial-averaged residual Gram matrix.
struct TheoremVerdict {
    double orthonormality_err = 0.0;   ///< max over trials of max |U_m^T U_m - I|
    double residual_orth_err = 0.0;    ///< max over trials of max |U_m^T residual|
    double idempotence_err = 0.0;      ///< max over trials of max |P^2 - P|
    double residual_norm_max = 0.0;    ///< max over trials of ||residual||_F
    std::vector<double> within_diag_obs;        ///< per cluster, mean diagonal entry
    std::vector<double> within_diag_pred;       ///< sigma_i^2 (p - m_i)
    std::vector<double> within_diag_pred_union; ///< sigma_i^2 (p - m_union)
    double cross_block_max = 0.0;  ///< max over cluster pairs of |cross-block mean|
    double cross_entry_max = 0.0;  ///< max |entry| over all cross-cluster blocks
    /// Per trial, the within-cluster off-diagonal entries of
    /// residual^T residual - ideal^T ideal, where ideal = (I - P_union) E;
    /// averaged over trials.
    double within_offdiag_max = 0.0;
    double within_offdiag_rms = 0.0;
    double delta_hat = 0.0;        ///< min over trials of the measured separation
    double max_trial_ms = 0.0;
    int trials = 0;
    int m = 0;
    int m_union = 0;

    double within_diag_min() const;
};

/// Monte Carlo check of the residual structure. Trial t regenerates the data
/// with seed derive_seed(model.seed, t). Throws Error{InvalidArgument} when
/// m < union dimension, m > p, or trials < 1.
TheoremVerdict validate(const SubspaceModel& model, int m, int trials);

struct DecayRow {
    int n = 0;
    double cross_block_max = 0.0;
    double within_offdiag_max = 0.0;
    double within_offdiag_rms = 0.0;
};

struct DecayStudy {
    std::vector<DecayRow> rows;
    double slope_rms = 0.0; ///< least-squares log-log slope of within_offdiag_rms vs N
    double slope_max = 0.0; ///< same for within_offdiag_max
};

/// Rescales cluster sizes proportionally to each total N in `n_grid`
/// (increasing) and validates at m = union dimension.
DecayStudy error_decay_study(const SubspaceModel& base, const std::vector<int>& n_grid, int trials);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace osc::lab
