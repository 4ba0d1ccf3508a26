#include "osc/theorem_lab.hpp"

#include "osc/error.hpp"
#include "osc/parallel.hpp"
#include "osc/rng.hpp"
#include "osc/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace osc::lab {

int SubspaceModel::total_samples() const
{
    return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), 0);
}

int SubspaceModel::union_dim() const
{
    return std::accumulate(subspace_dims.begin(), subspace_dims.end(), 0);
}

double TheoremVerdict::within_diag_min() const
{
    return within_diag_obs.empty() ? 0.0 : *std::min_element(within_diag_obs.begin(), within_diag_obs.end());
}

void check_model(const SubspaceModel& model)
{
    const auto k = model.subspace_dims.size();
    if (k == 0)
        throw Error(Errc::InvalidArgument, "model has no clusters");
    if (model.cluster_sizes.size() != k || model.noise_sigmas.size() != k || model.signal_min_eig.size() != k)
        throw Error(Errc::InvalidArgument, "per-cluster lists must all have k entries");
    for (std::size_t i = 0; i < k; ++i) {
        if (model.subspace_dims[i] < 1)
            throw Error(Errc::InvalidArgument, "subspace dimensions must be >= 1");
        if (model.cluster_sizes[i] < 1)
            throw Error(Errc::InvalidArgument, "cluster sizes must be >= 1");
        if (!(model.noise_sigmas[i] >= 0.0))
            throw Error(Errc::InvalidArgument, "noise sigmas must be >= 0");
        if (!(model.signal_min_eig[i] > 0.0))
            throw Error(Errc::InvalidArgument, "signal eigenvalue floors must be > 0");
    }
    if (!(model.overlap >= 0.0 && model.overlap < 1.0))
        throw Error(Errc::InvalidArgument, "overlap must lie in [0, 1)");
    if (model.union_dim() > model.p)
        throw Error(Errc::InfeasibleDims, "sum of subspace dimensions " + std::to_string(model.union_dim()) +
                                              " exceeds p = " + std::to_string(model.p));
}

DataMatrix SyntheticSample::as_data(const std::string& name) const
{
    return osc::validate(y.transpose(), labels, name);
}

SyntheticSample generate(const SubspaceModel& model)
{
    check_model(model);
    Rng rng(model.seed);
    const int p = model.p;
    const int total_dim = model.union_dim();
    const int n = model.total_samples();

    Matrix gauss(p, total_dim);
    for (Eigen::Index j = 0; j < gauss.cols(); ++j)
        for (Eigen::Index i = 0; i < gauss.rows(); ++i)
            gauss(i, j) = rng.normal();
    const Eigen::HouseholderQR<Matrix> qr(gauss);
    SyntheticSample out;
    out.union_basis = qr.householderQ() * Matrix::Identity(p, total_dim);

    const double angle = model.overlap * std::numbers::pi / 2.0;
    int offset = 0;
    for (int i = 0; i < model.k(); ++i) {
        const int dim = model.subspace_dims[static_cast<std::size_t>(i)];
        Matrix basis = out.union_basis.middleCols(offset, dim);
        if (i > 0 && angle > 0.0) {
            const int prev_dim = model.subspace_dims[static_cast<std::size_t>(i - 1)];
            const Matrix prev = out.union_basis.middleCols(offset - prev_dim, prev_dim);
            for (int c = 0; c < std::min(dim, prev_dim); ++c)
                basis.col(c) = std::cos(angle) * basis.col(c) + std::sin(angle) * prev.col(c);
        }
        out.bases.push_back(std::move(basis));
        offset += dim;
    }

    out.y.resize(p, n);
    out.signal.resize(p, n);
    out.noise.resize(p, n);
    out.labels.resize(static_cast<std::size_t>(n));
    Eigen::Index col = 0;
    for (int i = 0; i < model.k(); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const Matrix& basis = out.bases[idx];
        const double spread = std::sqrt(model.signal_min_eig[idx]);
        const double sigma = model.noise_sigmas[idx];
        Vector coords(basis.cols());
        for (int s = 0; s < model.cluster_sizes[idx]; ++s, ++col) {
            for (Eigen::Index c = 0; c < coords.size(); ++c)
                coords(c) = spread * rng.normal();
            coords(0) += model.signal_mean;
            out.signal.col(col) = basis * coords;
            for (int r = 0; r < p; ++r)
                out.noise(r, col) = sigma * rng.normal();
            out.labels[static_cast<std::size_t>(col)] = i;
        }
    }
    out.y = out.signal + out.noise;
    return out;
}

double subspace_separation(const std::vector<Matrix>& bases)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bases.size(); ++i) {
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            double gap = 1.0;
            // Equal dimensions: ||P_i - P_j||_2 is the sine of the largest principal angle.
            if (bases[i].cols() == bases[j].cols()) {
                const Eigen::JacobiSVD<Matrix> svd(bases[i].transpose() * bases[j]);
                const double cos_max = std::min(1.0, svd.singularValues().minCoeff());
                gap = std::sqrt(std::max(0.0, 1.0 - cos_max * cos_max));
            }
            best = std::min(best, gap);
        }
    }
    return bases.size() < 2 ? 0.0 : best;
}

namespace {

// Top-m left singular vectors of y, through whichever Gram matrix is smaller.
Matrix leading_left_basis(const Matrix& y, int m)
{
    const Eigen::Index p = y.rows();
    const Eigen::Index n = y.cols();
    if (n < p) {
        Matrix gram = Matrix::Zero(n, n);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose());
        gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
        const auto spectral = eigendecompose_symmetric(gram);
        const double floor = 1e-12 * spectral.lambda(0);
        if (m <= n && spectral.lambda(m - 1) > floor) {
            Matrix basis = y * spectral.u.leftCols(m);
            for (int c = 0; c < m; ++c)
                basis.col(c) /= std::sqrt(spectral.lambda(c));
            return basis;
        }
    }
    Matrix gram = Matrix::Zero(p, p);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(y);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return eigendecompose_symmetric(gram).u.leftCols(m);
}

struct TrialOutcome {
    double orthonormality_err = 0.0;
    double residual_orth_err = 0.0;
    double idempotence_err = 0.0;
    double residual_norm = 0.0;
    double offdiag_max = 0.0;
    double offdiag_rms = 0.0;
    double delta = 0.0;
    double ms = 0.0;
    Matrix gram; // lower triangle of residual^T residual
};

TrialOutcome run_trial(const SubspaceModel& model, int m, std::vector<Eigen::Index> const& starts)
{
    const auto t0 = std::chrono::steady_clock::now();
    const SyntheticSample sample = generate(model);
    const Matrix& y = sample.y;

    TrialOutcome out;
    const Matrix basis = leading_left_basis(y, m);
    const Matrix coords = basis.transpose() * y;
    const Matrix residual = y - basis * coords;

    out.orthonormality_err = (basis.transpose() * basis - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
    out.residual_orth_err = (basis.transpose() * residual).cwiseAbs().maxCoeff();
    const Matrix projector = basis * basis.transpose();
    out.idempotence_err = (projector * projector - projector).cwiseAbs().maxCoeff();
    out.residual_norm = residual.norm();
    out.delta = subspace_separation(sample.bases);

    const Eigen::Index n = y.cols();
    out.gram = Matrix::Zero(n, n);
    out.gram.selfadjointView<Eigen::Lower>().rankUpdate(residual.transpose());

    // Deviation from the ideal residual inside each cluster's diagonal block.
    const Matrix ideal = sample.noise - sample.union_basis * (sample.union_basis.transpose() * sample.noise);
    double sum_sq = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
        const Eigen::Index begin = starts[i];
        const Eigen::Index size = starts[i + 1] - begin;
        const Matrix ideal_gram = ideal.middleCols(begin, size).transpose() * ideal.middleCols(begin, size);
        for (Eigen::Index b = 0; b < size; ++b) {
            for (Eigen::Index a = b + 1; a < size; ++a) {
                const double dev = out.gram(begin + a, begin + b) - ideal_gram(a, b);
                out.offdiag_max = std::max(out.offdiag_max, std::abs(dev));
                sum_sq += dev * dev;
                count += 1.0;
            }
        }
    }
    out.offdiag_rms = count > 0.0 ? std::sqrt(sum_sq / count) : 0.0;
    out.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace

TheoremVerdict validate(const SubspaceModel& model, int m, int trials)
{
    check_model(model);
    if (trials < 1)
        throw Error(Errc::InvalidArgument, "trials must be >= 1");
    if (m < model.union_dim() || m > model.p)
        throw Error(Errc::InvalidArgument, "m must satisfy union dimension <= m <= p; got m = " + std::to_string(m));

    const int k = model.k();
    std::vector<Eigen::Index> starts{0};
    for (int size : model.cluster_sizes)
        starts.push_back(starts.back() + size);
    const Eigen::Index n = starts.back();

    // Trials run concurrently in batches; sums are folded in trial order.
    TheoremVerdict verdict;
    verdict.trials = trials;
    verdict.m = m;
    verdict.m_union = model.union_dim();
    verdict.delta_hat = std::numeric_limits<double>::infinity();
    Matrix sum = Matrix::Zero(n, n);

    const auto batch = static_cast<std::size_t>(max_threads());
    for (std::size_t first = 0; first < static_cast<std::size_t>(trials); first += batch) {
        const std::size_t count = std::min(batch, static_cast<std::size_t>(trials) - first);
        std::vector<TrialOutcome> outcomes(count);
        parallel_for(count, [&](std::size_t i) {
            SubspaceModel trial_model = model;
            trial_model.seed = derive_seed(model.seed, first + i);
            outcomes[i] = run_trial(trial_model, m, starts);
        });
        for (auto& o : outcomes) {
            verdict.orthonormality_err = std::max(verdict.orthonormality_err, o.orthonormality_err);
            verdict.residual_orth_err = std::max(verdict.residual_orth_err, o.residual_orth_err);
            verdict.idempotence_err = std::max(verdict.idempotence_err, o.idempotence_err);
            verdict.residual_norm_max = std::max(verdict.residual_norm_max, o.residual_norm);
            verdict.delta_hat = std::min(verdict.delta_hat, o.delta);
            verdict.max_trial_ms = std::max(verdict.max_trial_ms, o.ms);
            verdict.within_offdiag_max += o.offdiag_max / trials;
            verdict.within_offdiag_rms += o.offdiag_rms / trials;
            sum.triangularView<Eigen::Lower>() += o.gram;
        }
    }
    sum /= static_cast<double>(trials);

    for (int i = 0; i < k; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const Eigen::Index begin = starts[idx];
        const Eigen::Index size = starts[idx + 1] - begin;
        verdict.within_diag_obs.push_back(sum.diagonal().segment(begin, size).mean());
        const double var = model.noise_sigmas[idx] * model.noise_sigmas[idx];
        verdict.within_diag_pred.push_back(var * (model.p - model.subspace_dims[idx]));
        verdict.within_diag_pred_union.push_back(var * (model.p - model.union_dim()));
    }
    for (int j = 0; j < k; ++j) {
        for (int i = j + 1; i < k; ++i) {
            // Lower triangle holds block (i, j) with i > j.
            const auto block = sum.block(starts[static_cast<std::size_t>(i)], starts[static_cast<std::size_t>(j)],
                                         starts[static_cast<std::size_t>(i) + 1] - starts[static_cast<std::size_t>(i)],
                                         starts[static_cast<std::size_t>(j) + 1] - starts[static_cast<std::size_t>(j)]);
            verdict.cross_block_max = std::max(verdict.cross_block_max, std::abs(block.mean()));
            verdict.cross_entry_max = std::max(verdict.cross_entry_max, block.cwiseAbs().maxCoeff());
        }
    }
    return verdict;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw Error(Errc::InvalidArgument, "slope needs at least two matching points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

DecayStudy error_decay_study(const SubspaceModel& base, const std::vector<int>& n_grid, int trials)
{
    check_model(base);
    if (n_grid.empty() || !std::is_sorted(n_grid.begin(), n_grid.end()) ||
        std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
        throw Error(Errc::InvalidArgument, "N grid must be strictly increasing");

    const double base_total = base.total_samples();
    DecayStudy study;
    std::vector<double> ns, maxes, rmses;
    for (int n : n_grid) {
        SubspaceModel model = base;
        int assigned = 0;
        for (int i = 0; i + 1 < model.k(); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            model.cluster_sizes[idx] =
                std::max(1, static_cast<int>(std::lround(n * base.cluster_sizes[idx] / base_total)));
            assigned += model.cluster_sizes[idx];
        }
        model.cluster_sizes.back() = n - assigned;
        if (model.cluster_sizes.back() < 1)
            throw Error(Errc::InvalidArgument, "N = " + std::to_string(n) + " too small for " +
                                                   std::to_string(model.k()) + " clusters");

        const auto verdict = validate(model, model.union_dim(), trials);
        study.rows.push_back({n, verdict.cross_block_max, verdict.within_offdiag_max, verdict.within_offdiag_rms});
        ns.push_back(n);
        maxes.push_back(verdict.within_offdiag_max);
        rmses.push_back(verdict.within_offdiag_rms);
    }
    if (ns.size() >= 2) {
        study.slope_rms = loglog_slope(ns, rmses);
        study.slope_max = loglog_slope(ns, maxes);
    }
    return study;
}

}  // namespace osc::lab
