#include "osc/pipeline.hpp"

#include "osc/error.hpp"
#include "osc/spectral.hpp"

#include <chrono>

namespace osc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void check_k(const DataMatrix& data, const KMeansConfig& cfg)
{
    if (cfg.k < 2 || cfg.k > data.samples())
        throw Error(Errc::InvalidArgument,
                    "k must lie in [2, N]; got k = " + std::to_string(cfg.k) + ", N = " + std::to_string(data.samples()));
}

void attach_metrics(const DataMatrix& data, OscReport& report)
{
    if (data.labels())
        report.metrics = evaluate(*data.labels(), report.clusters.assignments);
}

}  // namespace

OscReport run_osc(const DataMatrix& data, double theta0, const KMeansConfig& cfg)
{
    return run_osc(data, theta0, cfg, nullptr);
}

OscReport run_osc(const DataMatrix& data, double theta0, const KMeansConfig& cfg, FactorModel* model_out)
{
    check_k(data, cfg);
    OscReport report;
    report.dataset = data.name();
    report.n = data.samples();
    report.p = data.features();
    report.theta0 = theta0;
    report.seed = cfg.seed;

    const auto start = Clock::now();
    auto stage = Clock::now();
    const StandardizedView view = standardize(data);
    report.timings.standardize = elapsed_ms(stage);

    stage = Clock::now();
    FactorModel model = fit(view, theta0);
    report.timings.eigen = elapsed_ms(stage);

    stage = Clock::now();
    report.clusters = kmeans(model.embedding, cfg);
    report.timings.kmeans = elapsed_ms(stage);
    report.timings.total = elapsed_ms(start);

    report.m = model.m;
    report.theta_of_m = model.theta_of_m();
    attach_metrics(data, report);
    if (model_out)
        *model_out = std::move(model);
    return report;
}

std::string_view baseline_name(Baseline b)
{
    return b == Baseline::RawKMeans ? "raw-kmeans" : "pca-kmeans";
}

std::optional<Baseline> parse_baseline(std::string_view name)
{
    if (name == "raw-kmeans")
        return Baseline::RawKMeans;
    if (name == "pca-kmeans")
        return Baseline::PcaKMeans;
    return std::nullopt;
}

Matrix pca_scores(const Matrix& x, Eigen::Index m)
{
    const Matrix centered = x.rowwise() - x.colwise().mean();
    m = std::clamp<Eigen::Index>(m, 1, std::min(x.rows(), x.cols()));
    if (x.cols() <= x.rows()) {
        Matrix cov = Matrix::Zero(x.cols(), x.cols());
        cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
        cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
        const auto spectral = eigendecompose_symmetric(cov);
        return centered * spectral.u.leftCols(m);
    }
    // Wide data: scores are U_m S_m from the N x N Gram matrix.
    Matrix gram = Matrix::Zero(x.rows(), x.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(centered);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    const auto spectral = eigendecompose_symmetric(gram);
    return spectral.u.leftCols(m) * spectral.lambda.head(m).cwiseSqrt().asDiagonal();
}

OscReport run_baseline(const DataMatrix& data, Baseline which, Eigen::Index m, const KMeansConfig& cfg)
{
    check_k(data, cfg);
    OscReport report;
    report.dataset = data.name();
    report.n = data.samples();
    report.p = data.features();
    report.seed = cfg.seed;

    const auto start = Clock::now();
    auto stage = Clock::now();
    Matrix points;
    if (which == Baseline::RawKMeans) {
        report.m = data.features();
        report.timings.eigen = 0.0;
        report.clusters = kmeans(data.values(), cfg);
    } else {
        points = pca_scores(data.values(), m);
        report.m = points.cols();
        report.timings.eigen = elapsed_ms(stage);
        stage = Clock::now();
        report.clusters = kmeans(points, cfg);
    }
    report.timings.kmeans = elapsed_ms(stage);
    report.timings.total = elapsed_ms(start);
    attach_metrics(data, report);
    return report;
}

}  // namespace osc
