#pragma once

#include <Eigen/Core>
#include <string>

#include "ars/rank_scores.hpp"

namespace ars {

/// Score-generating functions J on (0,1): nondecreasing, antisymmetric about
/// 1/2, integrating to zero. The three classical choices are built in; each
/// comes with a closed-form segment integral so scores can be computed
/// exactly from a piecewise-linear rank-score path.
enum class ScoreKind {
    Wilcoxon,       ///< J(u) = u - 1/2, optimal for logistic innovations
    VanDerWaerden,  ///< J(u) = Phi^{-1}(u), asymptotically optimal for normal
    Sign,           ///< J(u) = sign(u - 1/2)/2, median scores
};

std::string to_string(ScoreKind kind);
ScoreKind score_kind_from_string(const std::string& name);

/// J(u) for u in (0,1). Throws std::domain_error outside the open interval.
double eval_score(ScoreKind kind, double u);

/// Closed-form integral of J over [a,b] in [0,1]. The van der Waerden
/// antiderivative -phi(Phi^{-1}(u)) has finite limits 0 at both endpoints,
/// so no trimming is needed.
double integrate_score(ScoreKind kind, double a, double b);

/// A^2(J) = int (J - Jbar)^2 with Jbar = 0: 1/12, 1, 1/4 for the three kinds.
double score_variance(ScoreKind kind);

/// Scores generated by J against a rank-score path.
struct ScoreVector {
    Eigen::VectorXd values;  ///< b_t = -int_0^1 J(u) d a_t(u)
    ScoreKind kind = ScoreKind::Wilcoxon;
    double a2 = 0.0;         ///< A^2(J)
};

/// Integrate J exactly against every coordinate of the path: on segment k
/// each a_t is affine with slope m_{t,k}, so
///   b_t = -sum_k m_{t,k} * int_{alpha_k}^{alpha_{k+1}} J(u) du.
ScoreVector generate_scores(const RankScorePath& path, ScoreKind kind);

}  // namespace ars
