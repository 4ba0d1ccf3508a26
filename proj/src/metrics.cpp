#include "osc/metrics.hpp"

#include "osc/error.hpp"
#include "osc/hungarian.hpp"

#include <algorithm>
#include <cmath>

namespace osc {

namespace {

void check_lengths(std::span<const int> truth, std::span<const int> pred)
{
    if (truth.size() != pred.size())
        throw Error(Errc::LengthMismatch,
                    std::to_string(truth.size()) + " true labels vs " + std::to_string(pred.size()) + " predicted");
    if (truth.empty())
        throw Error(Errc::Empty, "no labels");
}

std::vector<int> distinct(std::span<const int> labels)
{
    std::vector<int> values(labels.begin(), labels.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::size_t index_of(const std::vector<int>& sorted, int value)
{
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

double entropy(const std::vector<std::int64_t>& sums, double n)
{
    double h = 0.0;
    for (auto s : sums) {
        if (s > 0) {
            const double q = static_cast<double>(s) / n;
            h -= q * std::log(q);
        }
    }
    return h;
}

__extension__ using Wide = __int128;

Wide pairs(std::int64_t count)
{
    return static_cast<Wide>(count) * (count - 1) / 2;
}

}  // namespace

ContingencyTable contingency(std::span<const int> truth, std::span<const int> pred)
{
    check_lengths(truth, pred);
    ContingencyTable table;
    table.true_labels = distinct(truth);
    table.pred_labels = distinct(pred);
    const auto r = static_cast<Eigen::Index>(table.true_labels.size());
    const auto c = static_cast<Eigen::Index>(table.pred_labels.size());
    table.counts.setZero(r, c);
    for (std::size_t s = 0; s < truth.size(); ++s) {
        const auto i = static_cast<Eigen::Index>(index_of(table.true_labels, truth[s]));
        const auto j = static_cast<Eigen::Index>(index_of(table.pred_labels, pred[s]));
        ++table.counts(i, j);
    }
    table.row_sums.resize(static_cast<std::size_t>(r));
    table.col_sums.resize(static_cast<std::size_t>(c));
    for (Eigen::Index i = 0; i < r; ++i)
        table.row_sums[static_cast<std::size_t>(i)] = table.counts.row(i).sum();
    for (Eigen::Index j = 0; j < c; ++j)
        table.col_sums[static_cast<std::size_t>(j)] = table.counts.col(j).sum();
    table.n = static_cast<std::int64_t>(truth.size());
    return table;
}

bool same_partition(std::span<const int> a, std::span<const int> b)
{
    if (a.size() != b.size())
        return false;
    const auto table = contingency(a, b);
    // Identical partitions give a permutation-shaped table: one nonzero per row and column.
    if (table.counts.rows() != table.counts.cols())
        return false;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        if ((table.counts.row(i).array() > 0).count() != 1)
            return false;
    }
    return true;
}

double acc(std::span<const int> truth, std::span<const int> pred, std::map<int, int>* mapping)
{
    const auto table = contingency(truth, pred);
    const Matrix cost = -table.counts.cast<double>();
    const auto match = hungarian(cost);

    std::int64_t hits = 0;
    for (std::size_t i = 0; i < match.row_to_col.size(); ++i) {
        const int j = match.row_to_col[i];
        if (j < 0)
            continue;
        hits += table.counts(static_cast<Eigen::Index>(i), j);
        if (mapping)
            (*mapping)[table.pred_labels[static_cast<std::size_t>(j)]] = table.true_labels[i];
    }
    return static_cast<double>(hits) / static_cast<double>(table.n);
}

double nmi(std::span<const int> truth, std::span<const int> pred)
{
    const auto table = contingency(truth, pred);
    const double n = static_cast<double>(table.n);
    const double hx = entropy(table.row_sums, n);
    const double hy = entropy(table.col_sums, n);
    if (hx == 0.0 || hy == 0.0)
        return same_partition(truth, pred) ? 1.0 : 0.0;

    double mi = 0.0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
            const auto nij = table.counts(i, j);
            if (nij == 0)
                continue;
            const double joint = static_cast<double>(nij) / n;
            const double ai = static_cast<double>(table.row_sums[static_cast<std::size_t>(i)]);
            const double bj = static_cast<double>(table.col_sums[static_cast<std::size_t>(j)]);
            mi += joint * std::log(static_cast<double>(nij) * n / (ai * bj));
        }
    }
    return std::clamp(mi / std::sqrt(hx * hy), 0.0, 1.0);
}

double ari(std::span<const int> truth, std::span<const int> pred)
{
    check_lengths(truth, pred);
    if (truth.size() < 2)
        throw Error(Errc::TooFew, "ARI needs at least 2 samples");
    const auto table = contingency(truth, pred);

    Wide index = 0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j)
            index += pairs(table.counts(i, j));
    Wide row_pairs = 0, col_pairs = 0;
    for (auto s : table.row_sums)
        row_pairs += pairs(s);
    for (auto s : table.col_sums)
        col_pairs += pairs(s);
    const Wide total = pairs(table.n);

    // (index - E) / (max - E) scaled through by total pairs, exact in integers.
    const Wide numerator = total * index - row_pairs * col_pairs;
    const Wide denominator = total * (row_pairs + col_pairs) - 2 * row_pairs * col_pairs;
    if (denominator == 0)
        return same_partition(truth, pred) ? 1.0 : 0.0;
    return 2.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

MetricsReport evaluate(std::span<const int> truth, std::span<const int> pred)
{
    MetricsReport report;
    report.acc = acc(truth, pred, &report.mapping);
    report.nmi = nmi(truth, pred);
    report.ari = truth.size() >= 2 ? ari(truth, pred) : (same_partition(truth, pred) ? 1.0 : 0.0);
    report.n = static_cast<std::int64_t>(truth.size());
    report.clusters_true = distinct(truth).size();
    report.clusters_pred = distinct(pred).size();
    return report;
}

}  // namespace osc
