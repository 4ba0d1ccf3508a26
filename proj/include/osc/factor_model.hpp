#pragma once

#include "osc/matrix.hpp"
#include "osc/spectral.hpp"

#include <vector>

namespace osc {

inline constexpr double kDefaultTheta0 = 0.85;

/// theta(m) = sum_{i<=m} lambda_i / sum_i lambda_i, for m = 1..N.
/// Throws Error{AllZero} when the eigenvalues sum to zero, Error{InvalidArgument}
/// when the input is empty, negative, or not non-increasing.
std::vector<double> cumulative_variance(const Vector& lambda);

/// Smallest m (1-based) with theta(m) >= theta0. theta0 must lie in (0, 1].
Eigen::Index select_dimension(const std::vector<double>& theta_curve, double theta0);

/// One-shot principal-axis factor model of the sample correlation matrix.
struct FactorModel {
    Eigen::Index m = 0;
    double theta0 = kDefaultTheta0;
    std::vector<double> theta_curve;
    Matrix loadings;   ///< N x m, U(:, 1:m) * Lambda^{1/2}
    Matrix embedding;  ///< N x m, diag(sigma) * loadings; the clustering input
    Matrix f_basis;    ///< p x m, orthonormal factor scores; zero column where omitted
    std::vector<bool> f_retained; ///< false where lambda_i <= 1e-12 * lambda_1

    double theta_of_m() const { return theta_curve[static_cast<std::size_t>(m - 1)]; }
};

/// Decomposes view.r_samples and builds the model at threshold theta0.
FactorModel fit(const StandardizedView& view, double theta0);

/// Same, reusing an existing decomposition of view.r_samples (threshold sweeps).
FactorModel fit(const StandardizedView& view, const SpectralDecomposition& spectral, double theta0);

}  // namespace osc
