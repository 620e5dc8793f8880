#include "ars/test_engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ars/asymptotics.hpp"
#include "ars/errors.hpp"
#include "ars/rank_scores.hpp"

namespace ars {

ProjectedDesign project_design(const AutoregressionDesign& ar, const RegressionDesign& reg,
                               const std::vector<std::string>& regressor_names) {
    const Eigen::Index n = ar.n();
    const Eigen::Index m = ar.p + 1;
    if (reg.xstar.rows() != n) {
        throw DataError("project_design: X* has " + std::to_string(reg.xstar.rows()) +
                        " rows, design has " + std::to_string(n));
    }
    if (n <= m) {
        throw DataError("project_design: need n > p+1");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ar.design);
    qr.setThreshold(1e-10);
    if (qr.rank() < m) {
        throw SingularDesignError("project_design: lagged design is rank deficient");
    }
    // Thin-Q projection: xhat = Q1 (Q1' X*).
    Eigen::MatrixXd q1 = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    ProjectedDesign pd;
    pd.xhat = q1 * (q1.transpose() * reg.xstar);
    pd.residual_design = reg.xstar - pd.xhat;
    pd.qn = (pd.residual_design.transpose() * pd.residual_design) / static_cast<double>(n);
    pd.qn = 0.5 * (pd.qn + pd.qn.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd.qn);
    const double min_eig = es.eigenvalues().minCoeff();
    // Reference scale: the second moment of X* itself, so the guard still
    // fires when the lag span absorbs every column and trace(Q_n) ~ 0.
    const double ref = std::max(pd.qn.trace(),
                                reg.xstar.squaredNorm() / static_cast<double>(n));
    if (min_eig < 1e-12 * ref) {
        // Name the combination of regressors that the lag space absorbs.
        const Eigen::VectorXd dir = es.eigenvectors().col(0);
        std::string combo;
        for (Eigen::Index j = 0; j < dir.size(); ++j) {
            if (std::fabs(dir[j]) < 1e-3) continue;
            if (!combo.empty()) combo += " + ";
            std::string name = j < static_cast<Eigen::Index>(regressor_names.size())
                                   ? regressor_names[static_cast<std::size_t>(j)]
                                   : ("x" + std::to_string(j + 1));
            combo += std::to_string(dir[j]) + "*" + name;
        }
        throw SingularDesignError(
            "project_design: Q_n is numerically singular; the combination " + combo +
            " lies in the span of the lagged design");
    }
    return pd;
}

std::pair<Eigen::VectorXd, double> compute_statistic(const ProjectedDesign& pd,
                                                     const ScoreVector& sv) {
    const Eigen::Index n = pd.residual_design.rows();
    Eigen::VectorXd s_n =
        pd.residual_design.transpose() * sv.values / std::sqrt(static_cast<double>(n));
    Eigen::LLT<Eigen::MatrixXd> llt(pd.qn);
    if (llt.info() != Eigen::Success) {
        throw SingularDesignError("compute_statistic: Q_n is not positive definite");
    }
    const double t_n = s_n.dot(llt.solve(s_n)) / sv.a2;
    return {std::move(s_n), t_n};
}

TestReport run_test(const Dataset& d, ScoreKind kind, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("run_test: level must lie in (0,1)");
    }
    const AutoregressionDesign ar = build_ar_design(d);
    const RegressionDesign reg = make_regression_design(d);

    TestReport report;
    report.level = level;
    report.score_kind = kind;
    report.dof = d.s();
    report.n_effective = d.n();

    const DesignDiagnostics diag = design_diagnostics(reg);
    report.warnings = diagnostic_warnings(diag, reg);
    {
        Eigen::VectorXd sorted = d.response;
        std::sort(sorted.begin(), sorted.end());
        for (Eigen::Index t = 0; t + 1 < sorted.size(); ++t) {
            if (sorted[t] == sorted[t + 1]) {
                report.warnings.push_back(
                    "response contains tied values; rank-score ties were resolved "
                    "by lexicographic pivoting");
                break;
            }
        }
    }

    const RankScorePath path = solve_rank_score_path(ar);
    const ScoreVector sv = generate_scores(path, kind);
    const ProjectedDesign pd = project_design(ar, reg, d.regressor_names);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd.qn);
    const double max_eig = es.eigenvalues().maxCoeff();
    const double min_eig = std::max(es.eigenvalues().minCoeff(), 0.0);
    report.q_condition = min_eig > 0.0 ? max_eig / min_eig
                                       : std::numeric_limits<double>::infinity();
    if (!(report.q_condition < 1e12)) {
        throw SingularDesignError("run_test: Q_n condition number " +
                                  std::to_string(report.q_condition) + " exceeds 1e12");
    }

    auto [s_n, t_n] = compute_statistic(pd, sv);
    report.s_n = std::move(s_n);
    report.statistic = t_n;
    report.p_value = chi2_sf(t_n, report.dof);
    report.reject = report.p_value < level;
    return report;
}

}  // namespace ars
