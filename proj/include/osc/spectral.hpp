#pragma once

#include "osc/matrix.hpp"

namespace osc {

/// Eigenpairs of a symmetric matrix, largest eigenvalue first.
///
/// Determinism rules applied on top of the raw solver output:
///   * each eigenvector is negated when its largest-magnitude entry (first
///     one on ties) is negative;
///   * eigenvalues within 1e-12 * lambda_1 of each other form a tie group
///     ordered by descending lexicographic order of the canonical vectors;
///   * negative eigenvalues are clamped to zero in `lambda`; the unclamped
///     values stay in `lambda_raw` for trace checks and spectral norms.
struct SpectralDecomposition {
    Matrix u;          ///< N x N, orthonormal columns
    Vector lambda;     ///< non-increasing, clamped at zero
    Vector lambda_raw; ///< same order, before clamping
    Eigen::Index source_dim = 0;
    Eigen::Index clamped = 0; ///< number of eigenvalues raised to zero
};

/// Throws Error{NotSymmetric} if max |a - a^T| > 1e-10, Error{NonFinite} on
/// NaN/Inf entries.
SpectralDecomposition eigendecompose_symmetric(const Matrix& a);

/// Flips `v` so its largest-magnitude entry is positive.
void canonicalize_sign(Eigen::Ref<Vector> v);

}  // namespace osc
