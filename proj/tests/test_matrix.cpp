#include "osc/error.hpp"
#include "osc/matrix.hpp"
#include "osc/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace osc;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = rng.normal();
    return m;
}

Errc code_of(const auto& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an osc::Error");
    return Errc::Io;
}

}  // namespace

TEST_CASE("validate accepts the minimal 2x2 matrix")
{
    Matrix raw(2, 2);
    raw << 1, 2, 3, 4;
    const auto data = validate(raw);
    CHECK(data.samples() == 2);
    CHECK(data.features() == 2);
    CHECK_FALSE(data.labels().has_value());
}

TEST_CASE("validate reports the position of a non-finite entry")
{
    Matrix raw(2, 2);
    raw << 1, std::numeric_limits<double>::quiet_NaN(), 3, 4;
    try {
        validate(raw);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonFinite);
        REQUIRE(e.indices().size() == 2);
        CHECK(e.indices()[0] == 0);
        CHECK(e.indices()[1] == 1);
    }
}

TEST_CASE("validate rejects bad shapes and labels")
{
    CHECK(code_of([] { validate(Matrix::Ones(4, 3), Labels{0, 1, 2}); }) == Errc::LabelLengthMismatch);
    CHECK(code_of([] { validate(Matrix::Ones(1, 3)); }) == Errc::TooSmall);
    CHECK(code_of([] { validate(Matrix::Ones(3, 1)); }) == Errc::TooSmall);
    CHECK(code_of([] { validate(Matrix::Ones(2, 2), Labels{0, -1}); }) == Errc::InvalidArgument);
}

TEST_CASE("standardize follows the per-row formulas")
{
    Matrix raw(2, 3);
    raw << 1, 2, 3, 2, 4, 9;
    const auto view = standardize(validate(raw));
    CHECK(view.mu(0) == doctest::Approx(2.0));
    CHECK(view.sigma(0) == doctest::Approx(1.0));
    CHECK(view.y(0, 0) == doctest::Approx(-1.0));
    CHECK(view.y(1, 0) == doctest::Approx(0.0));
    CHECK(view.y(2, 0) == doctest::Approx(1.0));
    CHECK(view.d_inv(1) == doctest::Approx(1.0 / view.sigma(1)));
    CHECK(view.y.rows() == 3);
    CHECK(view.y.cols() == 2);
}

TEST_CASE("identical rows correlate perfectly")
{
    Matrix raw(3, 5);
    raw << 1, 5, 2, 8, 3, 1, 5, 2, 8, 3, 0, 1, 0, 2, 7;
    const auto view = standardize(validate(raw));
    CHECK(std::abs(view.r_samples(0, 1) - 1.0) < 1e-12);
}

TEST_CASE("constant rows are listed in the error")
{
    Matrix raw(4, 3);
    raw << 1, 2, 3, 5, 5, 5, 4, 1, 0, 0.1, 0.1, 0.1;
    try {
        standardize(validate(raw));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConstantRow);
        CHECK(e.indices() == std::vector<std::size_t>{1, 3});
    }
}

TEST_CASE("correlation matrix invariants on random data")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto data = validate(random_matrix(12, 40, seed));
        const auto view = standardize(data);
        const auto& r = view.r_samples;
        CHECK((r.diagonal().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.maxCoeff() <= 1.0 + 1e-10);
        CHECK(r.minCoeff() >= -1.0 - 1e-10);
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(r);
        CHECK(eig.eigenvalues()(0) >= -1e-8 * eig.eigenvalues().maxCoeff());

        // sigma_k * y(., k) + mu_k recovers row k.
        for (Eigen::Index k = 0; k < data.samples(); ++k) {
            const Vector back = view.sigma(k) * view.y.col(k).array() + view.mu(k);
            const Vector row = data.values().row(k).transpose();
            CHECK((back - row).norm() <= 1e-10 * row.norm());
        }
    }
}

TEST_CASE("standardized rows ignore positive affine transforms")
{
    Matrix raw = random_matrix(6, 25, 9);
    const auto before = standardize(validate(raw));
    raw.row(2) = 3.5 * raw.row(2).array() + 17.0;
    raw.row(4) = 0.01 * raw.row(4).array() - 2.0;
    const auto after = standardize(validate(raw));
    CHECK((before.y - after.y).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("select_rows carries labels along")
{
    Matrix raw(3, 2);
    raw << 1, 2, 3, 4, 5, 6;
    const auto data = validate(raw, Labels{7, 8, 9});
    const auto picked = data.select_rows({2, 0});
    CHECK(picked.values()(0, 0) == 5);
    CHECK(*picked.labels() == Labels{9, 7});
}
