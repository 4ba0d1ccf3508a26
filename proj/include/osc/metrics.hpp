#pragma once

#include "osc/matrix.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace osc {

/// counts(i, j) = number of samples with the i-th distinct true label and the
/// j-th distinct predicted label (distinct labels in ascending order).
struct ContingencyTable {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t n = 0;
    std::vector<int> true_labels; ///< distinct values, row order
    std::vector<int> pred_labels; ///< distinct values, column order
};

/// Throws Error{LengthMismatch} or Error{Empty}.
ContingencyTable contingency(std::span<const int> truth, std::span<const int> pred);

struct MetricsReport {
    double acc = 0.0;
    double nmi = 0.0;
    double ari = 0.0;
    std::map<int, int> mapping; ///< predicted label -> true label used by acc
    std::int64_t n = 0;
    std::size_t clusters_true = 0;
    std::size_t clusters_pred = 0;
};

/// Best fraction of matches over bijective relabelings (Hungarian assignment
/// on the negated contingency table). Fills `mapping` when non-null.
double acc(std::span<const int> truth, std::span<const int> pred, std::map<int, int>* mapping = nullptr);

/// Mutual information over sqrt(H(truth) H(pred)), natural logs.
/// If either entropy is zero: 1 for identical partitions, else 0.
double nmi(std::span<const int> truth, std::span<const int> pred);

/// Pair-counting adjusted Rand index. Needs n >= 2 (Error{TooFew}). When the
/// expected and maximal index coincide: 1 for identical partitions, else 0.
double ari(std::span<const int> truth, std::span<const int> pred);

MetricsReport evaluate(std::span<const int> truth, std::span<const int> pred);

/// True when the two labelings induce the same partition.
bool same_partition(std::span<const int> a, std::span<const int> b);

}  // namespace osc
