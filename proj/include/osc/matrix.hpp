#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace osc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

/// Samples in rows, features in columns. Construct through validate() so the
/// invariants (N, p >= 2, finite entries, consistent labels) always hold.
class DataMatrix {
public:
    const Matrix& values() const noexcept { return values_; }
    const std::optional<Labels>& labels() const noexcept { return labels_; }
    const std::string& name() const noexcept { return name_; }

    Eigen::Index samples() const noexcept { return values_.rows(); }
    Eigen::Index features() const noexcept { return values_.cols(); }

    /// Rows in `rows` order, labels carried along.
    DataMatrix select_rows(const std::vector<Eigen::Index>& rows) const;

    /// Same data multiplied by `factor` (labels and name kept).
    DataMatrix scaled(double factor) const;

private:
    friend DataMatrix validate(Matrix raw, std::optional<Labels> labels, std::string name);

    Matrix values_;
    std::optional<Labels> labels_;
    std::string name_;
};

/// Checks shape, finiteness and label consistency.
/// Throws Error{TooSmall | NonFinite | LabelLengthMismatch}.
DataMatrix validate(Matrix raw, std::optional<Labels> labels = std::nullopt, std::string name = "data");

/// Per-sample centering and scaling plus the N x N sample correlation matrix.
struct StandardizedView {
    Vector mu;        ///< row means over the p features
    Vector sigma;     ///< row standard deviations, (p - 1) divisor
    Vector d_inv;     ///< 1 / sigma
    Matrix y;         ///< p x N, y(j, k) = (x(k, j) - mu(k)) / sigma(k)
    Matrix r_samples; ///< N x N, Y^T Y / (p - 1); unit diagonal
};

/// Throws Error{ConstantRow} listing every zero-variance row.
StandardizedView standardize(const DataMatrix& data);

}  // namespace osc
