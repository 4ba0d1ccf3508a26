#include "osc/factor_model.hpp"

#include "osc/error.hpp"

#include <cmath>
#include <sstream>

namespace osc {

std::vector<double> cumulative_variance(const Vector& lambda)
{
    if (lambda.size() == 0)
        throw Error(Errc::InvalidArgument, "empty eigenvalue vector");
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (!(lambda(i) >= 0.0))
            throw Error(Errc::InvalidArgument, "negative eigenvalue at " + std::to_string(i));
        if (i > 0 && lambda(i) > lambda(i - 1))
            throw Error(Errc::InvalidArgument, "eigenvalues not non-increasing at " + std::to_string(i));
    }
    const double total = lambda.sum();
    if (total <= 0.0)
        throw Error(Errc::AllZero, "eigenvalues sum to zero");

    std::vector<double> curve(static_cast<std::size_t>(lambda.size()));
    double running = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        running += lambda(i);
        curve[static_cast<std::size_t>(i)] = std::min(running / total, 1.0);
    }
    curve.back() = 1.0;
    return curve;
}

Eigen::Index select_dimension(const std::vector<double>& theta_curve, double theta0)
{
    if (!(theta0 > 0.0 && theta0 <= 1.0)) {
        std::ostringstream msg;
        msg << "theta0 must lie in (0, 1], got " << theta0;
        throw Error(Errc::InvalidArgument, msg.str());
    }
    if (theta_curve.empty())
        throw Error(Errc::InvalidArgument, "empty theta curve");
    for (std::size_t i = 0; i < theta_curve.size(); ++i) {
        if (theta_curve[i] >= theta0)
            return static_cast<Eigen::Index>(i + 1);
    }
    return static_cast<Eigen::Index>(theta_curve.size());
}

FactorModel fit(const StandardizedView& view, double theta0)
{
    return fit(view, eigendecompose_symmetric(view.r_samples), theta0);
}

FactorModel fit(const StandardizedView& view, const SpectralDecomposition& spectral, double theta0)
{
    const Eigen::Index n = view.r_samples.rows();
    const Eigen::Index p = view.y.rows();
    if (spectral.source_dim != n)
        throw Error(Errc::InvalidArgument, "decomposition does not match the view");

    // Eigenvalues at rounding level count as exact zeros, so rank-r data
    // reaches theta = 1 at m = r.
    const double floor = 1e-12 * spectral.lambda(0);
    const Vector mass = (spectral.lambda.array() > floor).select(spectral.lambda, 0.0);

    FactorModel model;
    model.theta0 = theta0;
    model.theta_curve = cumulative_variance(mass);
    model.m = select_dimension(model.theta_curve, theta0);
    const Eigen::Index m = model.m;

    const Vector root = spectral.lambda.head(m).cwiseSqrt();
    model.loadings = spectral.u.leftCols(m) * root.asDiagonal();
    model.embedding = view.sigma.asDiagonal() * model.loadings;

    // Y^T Y = (p - 1) R, so column i of Y U has squared norm (p - 1) lambda_i.
    const double dof = static_cast<double>(p - 1);
    model.f_basis = Matrix::Zero(p, m);
    model.f_retained.assign(static_cast<std::size_t>(m), false);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (spectral.lambda(i) <= floor)
            continue;
        model.f_basis.col(i) = view.y * spectral.u.col(i) / std::sqrt(dof * spectral.lambda(i));
        model.f_retained[static_cast<std::size_t>(i)] = true;
    }
    return model;
}

}  // namespace osc
