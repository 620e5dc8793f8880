#pragma once

#include <Eigen/Core>
#include <vector>

#include "ars/model_data.hpp"

namespace ars {

/// Solution of the rank-score linear program at one quantile level:
///
///   maximize   y'a
///   subject to Y'(a - (1-alpha) 1) = 0,   a in [0,1]^n
///
/// where Y is the lagged design including the intercept column (whose row of
/// the constraint system carries the centering condition sum(a - (1-alpha)) = 0).
/// Entries off the basis are exactly 0 or 1; the p+1 basic entries are the
/// fractional ones, sitting on observations with zero primal residual.
struct RankScoreVector {
    double alpha = 0.0;
    Eigen::VectorXd values;            ///< n rank scores in [0,1]
    std::vector<Eigen::Index> basis;   ///< sorted, size p+1
};

/// The exact solution path alpha -> a(alpha) over [0,1]: piecewise affine,
/// a(0) = 1 and a(1) = 0 exactly, with one node column per breakpoint and
/// the optimal basis of every segment.
struct RankScorePath {
    Eigen::VectorXd breakpoints;   ///< K+1 increasing values, first 0, last 1
    Eigen::MatrixXd node_values;   ///< n x (K+1), column k = a(breakpoints[k])
    std::vector<std::vector<Eigen::Index>> bases;  ///< size K, one per segment

    Eigen::Index n() const { return node_values.rows(); }
    Eigen::Index segments() const { return breakpoints.size() - 1; }
};

/// Primal companion of the rank-score LP: the autoregression quantile fit.
struct QuantileFit {
    double alpha = 0.0;
    Eigen::VectorXd coefficients;  ///< p+1, intercept first
    Eigen::VectorXd residuals;     ///< n
};

/// Solve the rank-score LP at a fixed alpha by a cold two-phase
/// bounded-variable simplex with Bland's rule. This is also the grid
/// fallback and the oracle the path solver is tested against.
RankScoreVector solve_rank_scores_at(const AutoregressionDesign& design, double alpha);

/// Compute the exact parametric solution path over alpha in [0,1].
///
/// A cold solve anchors the path at an interior alpha; from there the
/// parametric simplex marches in both directions, performing one dual pivot
/// per breakpoint with (ratio, index)-lexicographic tie breaking. Breakpoint
/// budget defaults to 50 * n * (p+1); exceeding it raises SolverError and the
/// caller should fall back to per-alpha cold solves on a grid.
RankScorePath solve_rank_score_path(const AutoregressionDesign& design,
                                    Eigen::Index breakpoint_cap = 0);

/// Autoregression quantile fit at alpha in (0,1); strong duality with
/// solve_rank_scores_at holds at the shared basis.
QuantileFit solve_quantile_fit(const AutoregressionDesign& design, double alpha);

/// Evaluate the path at an arbitrary alpha by interpolating the bounding
/// node columns (the process is affine within each segment).
Eigen::VectorXd rank_scores_at(const RankScorePath& path, double alpha);

/// Objective value y'a of a score vector; exposed for duality checks.
double rank_score_objective(const AutoregressionDesign& design,
                            const Eigen::VectorXd& values);

/// Asymmetric absolute loss sum_t rho_alpha(r_t) of a quantile fit.
double quantile_objective(double alpha, const Eigen::VectorXd& residuals);

}  // namespace ars
