#include "osc/spectral.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace osc {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kTieTol = 1e-12;

bool lex_greater(const Matrix& u, Eigen::Index a, Eigen::Index b)
{
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        if (u(i, a) != u(i, b))
            return u(i, a) > u(i, b);
    }
    return false;
}

}  // namespace

void canonicalize_sign(Eigen::Ref<Vector> v)
{
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > best) {
            best = mag;
            pivot = i;
        }
    }
    if (v.size() > 0 && v(pivot) < 0.0)
        v = -v;
}

SpectralDecomposition eigendecompose_symmetric(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw Error(Errc::InvalidArgument, "matrix is not square");
    if (!a.allFinite()) {
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                if (!std::isfinite(a(i, j)))
                    throw Error(Errc::NonFinite, "row " + std::to_string(i) + " col " + std::to_string(j),
                                {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    }
    const double asym = a.rows() ? (a - a.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > kSymmetryTol) {
        std::ostringstream msg;
        msg << "max asymmetry " << asym;
        throw Error(Errc::NotSymmetric, msg.str());
    }

    const Eigen::Index n = a.rows();
    SpectralDecomposition out;
    out.source_dim = n;
    if (n == 0)
        return out;

    // Tridiagonal QR on the lower triangle; output ascending.
    const Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw Error(Errc::InvalidArgument, "eigen solver did not converge");

    Matrix u = solver.eigenvectors().rowwise().reverse();
    Vector raw = solver.eigenvalues().reverse();
    for (Eigen::Index j = 0; j < n; ++j)
        canonicalize_sign(u.col(j));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const double tie = kTieTol * std::max(std::abs(raw(0)), std::abs(raw(n - 1)));
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && std::abs(raw(end - 1) - raw(end)) <= tie)
            ++end;
        if (end - start > 1) {
            std::stable_sort(order.begin() + start, order.begin() + end,
                             [&](Eigen::Index x, Eigen::Index y) { return lex_greater(u, x, y); });
        }
        start = end;
    }

    out.u.resize(n, n);
    out.lambda.resize(n);
    out.lambda_raw.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.u.col(j) = u.col(src);
        // Values keep their sorted slots; tie groups differ by at most the tie tolerance.
        out.lambda_raw(j) = raw(j);
        out.lambda(j) = std::max(raw(j), 0.0);
        if (raw(j) < 0.0)
            ++out.clamped;
    }
    return out;
}

}  // namespace osc
