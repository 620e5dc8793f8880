#include <doctest.h>

#include <Eigen/Dense>
#include <type_traits>

#include "ars/errors.hpp"
#include "ars/rng.hpp"
#include "ars/simulation.hpp"
#include "ars/test_engine.hpp"

using namespace ars;

namespace {

SimulationConfig base_config() {
    SimulationConfig cfg;
    cfg.n = 200;
    cfg.s = 2;
    cfg.p = 1;
    cfg.phi.resize(1);
    cfg.phi << 0.5;
    cfg.beta0 = 1.0;
    cfg.beta_x = Eigen::VectorXd::Zero(2);
    cfg.innovation = InnovationDistribution::normal(1.0);
    cfg.score_kind = ScoreKind::Wilcoxon;
    cfg.seed = 991;
    return cfg;
}

}  // namespace

TEST_CASE("projection with p = 0 is column centering") {
    PhiloxStream rng(41, 0, 0);
    const Eigen::Index n = 25;
    Dataset d;
    d.ar_order = 0;
    d.presample.resize(0);
    d.response.resize(n);
    d.regressors.resize(n, 2);
    for (Eigen::Index t = 0; t < n; ++t) {
        d.response[t] = rng.next_normal();
        d.regressors(t, 0) = rng.next_normal();
        d.regressors(t, 1) = 2.0 + 3.0 * rng.next_normal();
    }
    const AutoregressionDesign ar = build_ar_design(d);
    const RegressionDesign reg = make_regression_design(d);
    const ProjectedDesign pd = project_design(ar, reg);

    for (Eigen::Index j = 0; j < 2; ++j) {
        const double mean = d.regressors.col(j).mean();
        CHECK((pd.xhat.col(j).array() - mean).abs().maxCoeff() < 1e-10);
    }
    const Eigen::MatrixXd centered =
        d.regressors.rowwise() - d.regressors.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    CHECK((pd.qn - cov).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projection residuals are orthogonal to the lag span") {
    const Dataset d = gen_dataset(base_config(), 3);
    const AutoregressionDesign ar = build_ar_design(d);
    const RegressionDesign reg = make_regression_design(d);
    const ProjectedDesign pd = project_design(ar, reg, d.regressor_names);
    const Eigen::MatrixXd cross = ar.design.transpose() * pd.residual_design;
    CHECK(cross.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((pd.qn - pd.qn.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pd.xhat + pd.residual_design - reg.xstar).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a regressor inside the lag span trips the collinearity error") {
    Dataset d = gen_dataset(base_config(), 5);
    const AutoregressionDesign ar = build_ar_design(d);
    RegressionDesign reg = make_regression_design(d);
    reg.xstar.col(1) = ar.design.col(1);  // copy the first lag
    try {
        project_design(ar, reg, d.regressor_names);
        FAIL("expected SingularDesignError");
    } catch (const SingularDesignError& e) {
        CHECK(std::string(e.what()).find("x2") != std::string::npos);
    }
}

TEST_CASE("statistic: zero scores give a zero statistic") {
    const Dataset d = gen_dataset(base_config(), 7);
    const AutoregressionDesign ar = build_ar_design(d);
    const ProjectedDesign pd = project_design(ar, make_regression_design(d));
    ScoreVector sv;
    sv.kind = ScoreKind::Wilcoxon;
    sv.a2 = score_variance(ScoreKind::Wilcoxon);
    sv.values = Eigen::VectorXd::Zero(d.n());
    const auto [s_n, t_n] = compute_statistic(pd, sv);
    CHECK(s_n.cwiseAbs().maxCoeff() == 0.0);
    CHECK(t_n == 0.0);
}

TEST_CASE("statistic: scalar identity for s = 1") {
    SimulationConfig cfg = base_config();
    cfg.s = 1;
    cfg.beta_x = Eigen::VectorXd::Zero(1);
    const Dataset d = gen_dataset(cfg, 11);
    const AutoregressionDesign ar = build_ar_design(d);
    const RankScorePath path = solve_rank_score_path(ar);
    const ScoreVector sv = generate_scores(path, ScoreKind::Wilcoxon);
    const ProjectedDesign pd = project_design(ar, make_regression_design(d));
    const auto [s_n, t_n] = compute_statistic(pd, sv);

    const Eigen::VectorXd r = pd.residual_design.col(0);
    const double n = static_cast<double>(d.n());
    const double q = r.squaredNorm() / n;
    const double expect = std::pow(r.dot(sv.values), 2) / (n * q * sv.a2);
    CHECK(t_n == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("statistic matches the dense-inverse oracle") {
    SimulationConfig cfg = base_config();
    cfg.n = 30;
    cfg.s = 3;
    cfg.beta_x = Eigen::VectorXd::Zero(3);
    for (Eigen::Index rep = 0; rep < 5; ++rep) {
        const Dataset d = gen_dataset(cfg, rep);
        const AutoregressionDesign ar = build_ar_design(d);
        const RankScorePath path = solve_rank_score_path(ar);
        const ScoreVector sv = generate_scores(path, ScoreKind::VanDerWaerden);
        const ProjectedDesign pd = project_design(ar, make_regression_design(d));
        const auto [s_n, t_n] = compute_statistic(pd, sv);
        const double brute = s_n.dot(pd.qn.inverse() * s_n) / sv.a2;
        CHECK(t_n == doctest::Approx(brute).epsilon(1e-8));
    }
}

TEST_CASE("run_test contract on a null dataset") {
    const Dataset d = gen_dataset(base_config(), 0);
    const TestReport report = run_test(d, ScoreKind::Wilcoxon, 0.05);
    CHECK(report.dof == 2);
    CHECK(report.n_effective == 200);
    CHECK(std::isfinite(report.statistic));
    CHECK(report.statistic >= 0.0);
    CHECK(report.p_value >= 0.0);
    CHECK(report.p_value <= 1.0);
    CHECK(report.s_n.size() == 2);
    CHECK(report.q_condition >= 1.0);
    CHECK(report.reject == (report.p_value < 0.05));

    // Strict decision boundary: at level == p_value the test does not reject.
    const TestReport at_boundary = run_test(d, ScoreKind::Wilcoxon, report.p_value);
    CHECK_FALSE(at_boundary.reject);

    CHECK_THROWS_AS(run_test(d, ScoreKind::Wilcoxon, 0.0), std::domain_error);
    CHECK_THROWS_AS(run_test(d, ScoreKind::Wilcoxon, 1.0), std::domain_error);
}

TEST_CASE("T_n is invariant to location and scale of the series") {
    const Dataset d = gen_dataset(base_config(), 13);
    const TestReport base = run_test(d, ScoreKind::Wilcoxon, 0.05);
    Dataset moved = d;
    const double c = 11.0, m = -40.0;
    moved.response = c * d.response.array() + m;
    moved.presample = c * d.presample.array() + m;
    const TestReport shifted = run_test(moved, ScoreKind::Wilcoxon, 0.05);
    CHECK(shifted.statistic == doctest::Approx(base.statistic).epsilon(1e-8));
}

TEST_CASE("T_n is invariant to a regressor basis change") {
    SimulationConfig cfg = base_config();
    cfg.beta_x << 1.0, -1.0;  // under an alternative the statistic is nonzero
    const Dataset d = gen_dataset(cfg, 17);
    const TestReport base = run_test(d, ScoreKind::VanDerWaerden, 0.05);
    Eigen::MatrixXd mix(2, 2);
    mix << 2.0, 0.5, -1.0, 1.5;
    Dataset mixed = d;
    mixed.regressors = d.regressors * mix;
    const TestReport remapped = run_test(mixed, ScoreKind::VanDerWaerden, 0.05);
    CHECK(remapped.statistic == doctest::Approx(base.statistic).epsilon(1e-8));
}

TEST_CASE("tied responses are flagged") {
    Dataset d = gen_dataset(base_config(), 19);
    d.response[4] = d.response[10];
    const TestReport report = run_test(d, ScoreKind::Wilcoxon, 0.05);
    bool found = false;
    for (const auto& w : report.warnings) {
        if (w.find("tied") != std::string::npos) found = true;
    }
    CHECK(found);
}

// Structural audit: the pipeline consumes only (data, score kind, level) and
// the report exposes no estimate of phi, beta0, sigma^2, or F. Adding such a
// field forces this exhaustive-field construction to be revisited.
TEST_CASE("API audit: no nuisance-parameter estimates anywhere") {
    static_assert(std::is_same_v<decltype(&run_test),
                                 TestReport (*)(const Dataset&, ScoreKind, double)>);
    const TestReport audit{
        /*statistic*/ 0.0,
        /*dof*/ 0,
        /*p_value*/ 1.0,
        /*level*/ 0.05,
        /*reject*/ false,
        /*score_kind*/ ScoreKind::Wilcoxon,
        /*s_n*/ Eigen::VectorXd(),
        /*q_condition*/ 0.0,
        /*n_effective*/ 0,
        /*warnings*/ {},
    };
    CHECK_FALSE(audit.reject);

    // The quantile-fit diagnostic exposes autoregression coefficients, but it
    // is not reachable from run_test's signature: the full pipeline is rank
    // scores -> scores -> projection -> statistic, none of which return
    // coefficient estimates.
    static_assert(std::is_same_v<decltype(&generate_scores),
                                 ScoreVector (*)(const RankScorePath&, ScoreKind)>);
    static_assert(
        std::is_same_v<decltype(&compute_statistic),
                       std::pair<Eigen::VectorXd, double> (*)(const ProjectedDesign&,
                                                              const ScoreVector&)>);
}
