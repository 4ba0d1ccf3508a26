#pragma once

#include "osc/matrix.hpp"

#include <vector>

namespace osc {

struct Assignment {
    std::vector<int> row_to_col; ///< -1 for rows left unmatched (r > c)
    double cost = 0.0;
};

/// Minimum-cost matching of an r x c cost matrix covering min(r, c) rows.
/// Rectangular inputs are padded to square with zero-cost dummies.
/// O(n^3) shortest augmenting path with row/column potentials.
/// Throws Error{NonFinite}.
Assignment hungarian(const Matrix& cost);

}  // namespace osc
