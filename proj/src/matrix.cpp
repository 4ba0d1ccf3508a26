#include "osc/matrix.hpp"

#include "osc/error.hpp"

#include <cmath>
#include <sstream>

namespace osc {

DataMatrix validate(Matrix raw, std::optional<Labels> labels, std::string name)
{
    if (raw.rows() < 2 || raw.cols() < 2) {
        std::ostringstream msg;
        msg << "need at least 2 samples and 2 features, got " << raw.rows() << "x" << raw.cols();
        throw Error(Errc::TooSmall, msg.str());
    }
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
        for (Eigen::Index j = 0; j < raw.cols(); ++j) {
            if (!std::isfinite(raw(i, j))) {
                std::ostringstream msg;
                msg << "row " << i << " col " << j;
                throw Error(Errc::NonFinite, msg.str(),
                            {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
            }
        }
    }
    if (labels) {
        if (static_cast<Eigen::Index>(labels->size()) != raw.rows()) {
            std::ostringstream msg;
            msg << labels->size() << " labels for " << raw.rows() << " samples";
            throw Error(Errc::LabelLengthMismatch, msg.str());
        }
        for (std::size_t i = 0; i < labels->size(); ++i) {
            if ((*labels)[i] < 0)
                throw Error(Errc::InvalidArgument, "negative label at index " + std::to_string(i));
        }
    }

    DataMatrix out;
    out.values_ = std::move(raw);
    out.labels_ = std::move(labels);
    out.name_ = std::move(name);
    return out;
}

DataMatrix DataMatrix::select_rows(const std::vector<Eigen::Index>& rows) const
{
    Matrix picked(static_cast<Eigen::Index>(rows.size()), values_.cols());
    std::optional<Labels> picked_labels;
    if (labels_)
        picked_labels.emplace();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        picked.row(static_cast<Eigen::Index>(i)) = values_.row(rows[i]);
        if (labels_)
            picked_labels->push_back((*labels_)[static_cast<std::size_t>(rows[i])]);
    }
    return validate(std::move(picked), std::move(picked_labels), name_);
}

DataMatrix DataMatrix::scaled(double factor) const
{
    DataMatrix out = *this;
    out.values_ *= factor;
    return out;
}

StandardizedView standardize(const DataMatrix& data)
{
    const Matrix& x = data.values();
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    const double dof = static_cast<double>(p - 1);

    StandardizedView view;
    view.mu = x.rowwise().mean();
    view.sigma.resize(n);
    view.d_inv.resize(n);
    view.y.resize(p, n);

    std::vector<std::size_t> constant;
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto centered = (x.row(k).array() - view.mu(k)).eval();
        const double sigma = std::sqrt(centered.square().sum() / dof);
        const double scale = x.row(k).cwiseAbs().maxCoeff();
        // Rows whose spread is pure rounding noise are constant for our purposes.
        if (!(sigma > 1e-13 * scale)) {
            constant.push_back(static_cast<std::size_t>(k));
            continue;
        }
        view.sigma(k) = sigma;
        view.d_inv(k) = 1.0 / sigma;
        view.y.col(k) = centered.transpose().matrix() / sigma;
    }
    if (!constant.empty()) {
        std::ostringstream msg;
        msg << "zero-variance rows [";
        for (std::size_t i = 0; i < constant.size(); ++i)
            msg << (i ? "," : "") << constant[i];
        msg << "]";
        throw Error(Errc::ConstantRow, msg.str(), std::move(constant));
    }

    view.r_samples = Matrix::Zero(n, n);
    view.r_samples.selfadjointView<Eigen::Lower>().rankUpdate(view.y.transpose(), 1.0 / dof);
    view.r_samples.triangularView<Eigen::StrictlyUpper>() = view.r_samples.transpose();
    return view;
}

}  // namespace osc
