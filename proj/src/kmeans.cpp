#include "osc/kmeans.hpp"

#include "osc/error.hpp"
#include "osc/parallel.hpp"
#include "osc/rng.hpp"

#include <cmath>
#include <limits>

namespace osc {

namespace {

// Points are stored one per column so distance loops walk contiguous memory.
struct Lloyd {
    const Matrix& pts; // m x N
    int k;
    int max_iter;
    double tol;

    Matrix seed_centroids(Rng& rng) const
    {
        const Eigen::Index n = pts.cols();
        Matrix centers(pts.rows(), k);
        const auto first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
        centers.col(0) = pts.col(first);

        Vector nearest(n);
        for (Eigen::Index i = 0; i < n; ++i)
            nearest(i) = (pts.col(i) - centers.col(0)).squaredNorm();

        for (int c = 1; c < k; ++c) {
            const double total = nearest.sum();
            Eigen::Index pick = 0;
            if (total > 0.0) {
                const double target = rng.uniform() * total;
                double acc = 0.0;
                pick = n - 1;
                for (Eigen::Index i = 0; i < n; ++i) {
                    acc += nearest(i);
                    if (acc > target && nearest(i) > 0.0) {
                        pick = i;
                        break;
                    }
                }
                while (nearest(pick) == 0.0 && pick > 0)
                    --pick;
            } else {
                pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
            }
            centers.col(c) = pts.col(pick);
            for (Eigen::Index i = 0; i < n; ++i)
                nearest(i) = std::min(nearest(i), (pts.col(i) - centers.col(c)).squaredNorm());
        }
        return centers;
    }

    // Returns the per-point squared distance to the chosen centroid.
    Vector assign(const Matrix& centers, std::vector<int>& labels) const
    {
        const Eigen::Index n = pts.cols();
        Vector dist(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int c = 0; c < k; ++c) {
                const double d = (pts.col(i) - centers.col(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            labels[static_cast<std::size_t>(i)] = arg;
            dist(i) = best;
        }
        return dist;
    }

    void repair_empty(std::vector<int>& labels, Vector& dist) const
    {
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
        for (int label : labels)
            ++counts[static_cast<std::size_t>(label)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0)
                continue;
            Eigen::Index far = -1;
            for (Eigen::Index i = 0; i < dist.size(); ++i) {
                if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2)
                    continue;
                if (far < 0 || dist(i) > dist(far))
                    far = i;
            }
            --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
            labels[static_cast<std::size_t>(far)] = c;
            counts[static_cast<std::size_t>(c)] = 1;
            dist(far) = 0.0;
        }
    }

    Matrix means(const std::vector<int>& labels) const
    {
        Matrix centers = Matrix::Zero(pts.rows(), k);
        std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
        for (Eigen::Index i = 0; i < pts.cols(); ++i) {
            const int c = labels[static_cast<std::size_t>(i)];
            centers.col(c) += pts.col(i);
            counts[static_cast<std::size_t>(c)] += 1.0;
        }
        for (int c = 0; c < k; ++c)
            centers.col(c) /= counts[static_cast<std::size_t>(c)];
        return centers;
    }

    double objective(const Matrix& centers, const std::vector<int>& labels) const
    {
        double total = 0.0;
        for (Eigen::Index i = 0; i < pts.cols(); ++i)
            total += (pts.col(i) - centers.col(labels[static_cast<std::size_t>(i)])).squaredNorm();
        return total;
    }

    ClusterResult run(std::uint64_t seed) const
    {
        Rng rng(seed);
        Matrix centers = seed_centroids(rng);
        std::vector<int> labels(static_cast<std::size_t>(pts.cols()), -1);
        std::vector<int> previous;

        ClusterResult out;
        out.seed_used = seed;
        for (int iter = 0; iter < max_iter; ++iter) {
            previous = labels;
            Vector dist = assign(centers, labels);
            repair_empty(labels, dist);
            centers = means(labels);
            const double value = objective(centers, labels);
            out.objective_trace.push_back(value);
            ++out.iterations;

            if (labels == previous)
                break;
            if (out.objective_trace.size() >= 2) {
                const double before = out.objective_trace[out.objective_trace.size() - 2];
                if (before - value <= tol * before)
                    break;
            }
        }
        out.assignments = std::move(labels);
        out.centroids = centers.transpose();
        return out;
    }
};

}  // namespace

double kmeans_objective(const Matrix& points, const Matrix& centroids, const std::vector<int>& assignments)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        total += (points.row(i) - centroids.row(assignments[static_cast<std::size_t>(i)])).squaredNorm();
    return total;
}

ClusterResult kmeans(const Matrix& points, const KMeansConfig& cfg)
{
    if (cfg.k < 1 || cfg.restarts < 1 || cfg.max_iter < 1 || !(cfg.tol >= 0.0))
        throw Error(Errc::InvalidArgument, "k, restarts and max_iter must be positive and tol non-negative");
    if (points.rows() < cfg.k)
        throw Error(Errc::TooFewPoints, std::to_string(points.rows()) + " points for k = " + std::to_string(cfg.k));
    if (!points.allFinite())
        throw Error(Errc::NonFinite, "points contain NaN or Inf");

    const Matrix pts = points.transpose();
    const Lloyd lloyd{pts, cfg.k, cfg.max_iter, cfg.tol};

    std::vector<ClusterResult> runs(static_cast<std::size_t>(cfg.restarts));
    parallel_for(runs.size(), [&](std::size_t r) {
        runs[r] = lloyd.run(derive_seed(cfg.seed, r));
        runs[r].restart_index = static_cast<int>(r);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].objective() < runs[best].objective())
            best = r;
    }
    ClusterResult winner = std::move(runs[best]);
    winner.rng = std::string(Rng::name());
    return winner;
}

}  // namespace osc
