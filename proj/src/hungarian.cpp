#include "osc/hungarian.hpp"

#include "osc/error.hpp"

#include <algorithm>
#include <limits>

namespace osc {

Assignment hungarian(const Matrix& cost)
{
    if (!cost.allFinite())
        throw Error(Errc::NonFinite, "cost matrix contains NaN or Inf");

    const auto rows = static_cast<std::size_t>(cost.rows());
    const auto cols = static_cast<std::size_t>(cost.cols());
    const std::size_t n = std::max(rows, cols);
    auto at = [&](std::size_t i, std::size_t j) {
        return (i < rows && j < cols) ? cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
    };

    // 1-based potentials; match[j] is the row currently holding column j.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double reduced = at(i0 - 1, j - 1) - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Assignment out;
    out.row_to_col.assign(rows, -1);
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t i = match[j];
        if (i == 0 || i > rows || j > cols)
            continue;
        out.row_to_col[i - 1] = static_cast<int>(j - 1);
        out.cost += cost(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
    }
    return out;
}

}  // namespace osc
