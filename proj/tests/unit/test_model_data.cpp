#include <doctest.h>

#include <Eigen/Dense>
#include <sstream>

#include "ars/errors.hpp"
#include "ars/model_data.hpp"
#include "ars/rng.hpp"

using namespace ars;

namespace {

LabeledTable synthetic_table(Eigen::Index rows, std::uint64_t seed) {
    PhiloxStream rng(seed, 0, 0);
    LabeledTable t;
    t.names = {"y", "x1", "x2"};
    t.values.resize(rows, 3);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < 3; ++c) t.values(r, c) = rng.next_normal();
    }
    return t;
}

}  // namespace

TEST_CASE("consume_head moves the first p rows into the presample") {
    const LabeledTable t = synthetic_table(103, 1);
    const Dataset d = load_dataset(t, "y", {"x1"}, 3, PresamplePolicy::ConsumeHead);
    CHECK(d.n() == 100);
    CHECK(d.s() == 1);
    CHECK(d.presample.size() == 3);
    CHECK(d.presample[0] == t.values(0, 0));
    CHECK(d.presample[2] == t.values(2, 0));
    CHECK(d.response[0] == t.values(3, 0));
    CHECK(d.regressors(0, 0) == t.values(3, 1));
}

TEST_CASE("p = 0 leaves n unchanged with an empty presample") {
    const LabeledTable t = synthetic_table(50, 2);
    const Dataset d = load_dataset(t, "y", {"x1", "x2"}, 0, PresamplePolicy::ConsumeHead);
    CHECK(d.n() == 50);
    CHECK(d.presample.size() == 0);
}

TEST_CASE("explicit presample is taken verbatim") {
    const LabeledTable t = synthetic_table(40, 3);
    Eigen::VectorXd pre(2);
    pre << -1.0, 2.0;
    const Dataset d = load_dataset(t, "y", {"x1"}, 2, PresamplePolicy::Explicit, pre);
    CHECK(d.n() == 40);
    CHECK(d.presample == pre);
    CHECK_THROWS_AS(
        load_dataset(t, "y", {"x1"}, 2, PresamplePolicy::Explicit, Eigen::VectorXd::Zero(1)),
        DataError);
}

TEST_CASE("validation errors carry row and column locations") {
    LabeledTable t = synthetic_table(30, 4);
    t.values(6, 1) = std::numeric_limits<double>::quiet_NaN();  // row 7, column x1
    try {
        load_dataset(t, "y", {"x1"}, 1, PresamplePolicy::ConsumeHead);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 7") != std::string::npos);
        CHECK(msg.find("x1") != std::string::npos);
    }
    CHECK_THROWS_AS(load_dataset(t, "nope", {"x1"}, 0, PresamplePolicy::ConsumeHead),
                    DataError);
    const LabeledTable tiny = synthetic_table(4, 5);
    CHECK_THROWS_AS(load_dataset(tiny, "y", {"x1"}, 2, PresamplePolicy::ConsumeHead),
                    DataError);
}

TEST_CASE("lagged design layout") {
    Dataset d;
    d.ar_order = 1;
    d.presample = Eigen::VectorXd::Constant(1, 5.0);
    d.response.resize(3);
    d.response << 1.0, 2.0, 3.0;
    d.regressors = Eigen::MatrixXd::Zero(3, 0);
    const AutoregressionDesign ar = build_ar_design(d);
    REQUIRE(ar.design.rows() == 3);
    REQUIRE(ar.design.cols() == 2);
    CHECK(ar.design(0, 0) == 1.0);
    CHECK(ar.design(0, 1) == 5.0);
    CHECK(ar.design(1, 1) == 1.0);
    CHECK(ar.design(2, 1) == 2.0);
    CHECK(ar.response == d.response);
}

TEST_CASE("p = 0 gives the all-ones design") {
    Dataset d;
    d.ar_order = 0;
    d.presample.resize(0);
    d.response = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
    d.regressors = Eigen::MatrixXd::Zero(5, 0);
    const AutoregressionDesign ar = build_ar_design(d);
    CHECK(ar.design == Eigen::MatrixXd::Ones(5, 1));
}

TEST_CASE("constant response with a lag is singular") {
    Dataset d;
    d.ar_order = 1;
    d.presample = Eigen::VectorXd::Constant(1, 2.0);
    d.response = Eigen::VectorXd::Constant(6, 2.0);
    d.regressors = Eigen::MatrixXd::Zero(6, 0);
    CHECK_THROWS_AS(build_ar_design(d), SingularDesignError);
}

TEST_CASE("lag columns shift consistently on random data") {
    PhiloxStream rng(77, 0, 1);
    Dataset d;
    d.ar_order = 3;
    d.presample.resize(3);
    for (Eigen::Index i = 0; i < 3; ++i) d.presample[i] = rng.next_normal();
    d.response.resize(24);
    for (Eigen::Index i = 0; i < 24; ++i) d.response[i] = rng.next_normal();
    d.regressors = Eigen::MatrixXd::Zero(24, 0);
    const AutoregressionDesign ar = build_ar_design(d);

    // Dropping the intercept column reproduces the pure lag matrix shape.
    CHECK(ar.design.rightCols(3).rows() == 24);
    // Each lag column is the previous one shifted by one observation.
    for (Eigen::Index t = 1; t < 24; ++t) {
        for (Eigen::Index j = 1; j < 3; ++j) {
            CHECK(ar.design(t, j + 1) == ar.design(t - 1, j));
        }
    }
    // Lag 1 is the response shifted by one.
    for (Eigen::Index t = 1; t < 24; ++t) CHECK(ar.design(t, 1) == d.response[t - 1]);
    CHECK(ar.design(0, 1) == d.presample[2]);
    CHECK(ar.design(0, 3) == d.presample[0]);
}

TEST_CASE("regression design carries the intercept") {
    const LabeledTable t = synthetic_table(20, 9);
    const Dataset d = load_dataset(t, "y", {"x1", "x2"}, 0, PresamplePolicy::ConsumeHead);
    const RegressionDesign r = make_regression_design(d);
    CHECK(r.xstar == d.regressors);
    CHECK(r.with_intercept.col(0) == Eigen::VectorXd::Ones(20));
    CHECK(r.with_intercept.rightCols(2) == d.regressors);
}

TEST_CASE("design diagnostics on hand-computable cases") {
    RegressionDesign r;
    r.xstar.resize(2, 2);
    r.xstar << 1.0, 0.0, 0.0, 1.0;
    r.with_intercept.resize(2, 3);
    const DesignDiagnostics diag = design_diagnostics(r);
    CHECK(diag.min_eigen_an == doctest::Approx(0.5).epsilon(1e-12));

    // Duplicated column: singular A_n, warning attached.
    RegressionDesign dup;
    dup.xstar.resize(4, 2);
    dup.xstar.col(0) = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
    dup.xstar.col(1) = dup.xstar.col(0);
    const DesignDiagnostics ddiag = design_diagnostics(dup);
    CHECK(ddiag.min_eigen_an == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(!diagnostic_warnings(ddiag, dup).empty());

    // A single constant regressor has leverage exactly 1/n.
    RegressionDesign ones;
    ones.xstar = Eigen::MatrixXd::Ones(8, 1);
    const DesignDiagnostics odiag = design_diagnostics(ones);
    CHECK(odiag.max_leverage == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(odiag.fourth_moment_avg == doctest::Approx(1.0).epsilon(1e-12));
}
