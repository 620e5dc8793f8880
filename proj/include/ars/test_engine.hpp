#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "ars/model_data.hpp"
#include "ars/scores.hpp"

namespace ars {

/// Projection of the exogenous design onto the column span of the lagged
/// design, plus the residual cross-moment matrix Q_n.
struct ProjectedDesign {
    Eigen::MatrixXd xhat;             ///< n x s projection of X* onto span(Y)
    Eigen::MatrixXd residual_design;  ///< X* - xhat
    Eigen::MatrixXd qn;               ///< n^-1 (X*-xhat)'(X*-xhat), s x s
};

/// Outcome of the no-regression test.
struct TestReport {
    double statistic = 0.0;   ///< T_n
    Eigen::Index dof = 0;     ///< s
    double p_value = 1.0;
    double level = 0.05;      ///< tau
    bool reject = false;      ///< p_value < level (strict)
    ScoreKind score_kind = ScoreKind::Wilcoxon;
    Eigen::VectorXd s_n;      ///< the linear rank statistic, length s
    double q_condition = 0.0; ///< condition number of Q_n
    Eigen::Index n_effective = 0;
    std::vector<std::string> warnings;
};

/// Project X* onto span(Y) by a stable orthogonal decomposition of Y (the
/// n x n hat matrix is never formed). Throws SingularDesignError for a rank
/// deficient Y and a collinearity error, naming the offending regressor
/// combination, when Q_n is numerically singular.
ProjectedDesign project_design(const AutoregressionDesign& ar, const RegressionDesign& reg,
                               const std::vector<std::string>& regressor_names = {});

/// S_n = n^{-1/2} (X*-xhat)' b and T_n = S_n' Q_n^{-1} S_n / A^2(J), with the
/// solve done through an SPD factorization of Q_n.
std::pair<Eigen::VectorXd, double> compute_statistic(const ProjectedDesign& pd,
                                                     const ScoreVector& sv);

/// Full pipeline: lagged design, rank-score path, scores, projection,
/// statistic, chi-square p-value with s degrees of freedom. Rejects when
/// p_value < level, strictly.
TestReport run_test(const Dataset& d, ScoreKind kind, double level);

}  // namespace ars
