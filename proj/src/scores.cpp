#include "ars/scores.hpp"

#include <cmath>
#include <stdexcept>

#include "ars/errors.hpp"
#include "ars/special_functions.hpp"

namespace ars {

std::string to_string(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::Wilcoxon: return "wilcoxon";
        case ScoreKind::VanDerWaerden: return "van_der_waerden";
        case ScoreKind::Sign: return "sign";
    }
    return "unknown";
}

ScoreKind score_kind_from_string(const std::string& name) {
    if (name == "wilcoxon") return ScoreKind::Wilcoxon;
    if (name == "van_der_waerden" || name == "van-der-waerden" || name == "normal") {
        return ScoreKind::VanDerWaerden;
    }
    if (name == "sign" || name == "median") return ScoreKind::Sign;
    throw ConfigError("unknown score kind \"" + name +
                      "\" (expected wilcoxon, van_der_waerden, or sign)");
}

double eval_score(ScoreKind kind, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error("eval_score: u must lie in (0,1)");
    }
    switch (kind) {
        case ScoreKind::Wilcoxon: return u - 0.5;
        case ScoreKind::VanDerWaerden: return inv_norm_cdf(u);
        case ScoreKind::Sign: return u == 0.5 ? 0.0 : (u < 0.5 ? -0.5 : 0.5);
    }
    throw std::logic_error("eval_score: unhandled kind");
}

double integrate_score(ScoreKind kind, double a, double b) {
    if (!(0.0 <= a && a <= b && b <= 1.0)) {
        throw std::domain_error("integrate_score: need 0 <= a <= b <= 1");
    }
    switch (kind) {
        case ScoreKind::Wilcoxon:
            return 0.5 * (b * b - a * a) - 0.5 * (b - a);
        case ScoreKind::VanDerWaerden: {
            // Antiderivative of Phi^{-1} is -phi(Phi^{-1}(u)), limit 0 at 0 and 1.
            auto anti = [](double u) {
                if (u <= 0.0 || u >= 1.0) return 0.0;
                return -norm_pdf(inv_norm_cdf(u));
            };
            return anti(b) - anti(a);
        }
        case ScoreKind::Sign: {
            auto anti = [](double u) { return 0.5 * std::fabs(u - 0.5); };
            return anti(b) - anti(a);
        }
    }
    throw std::logic_error("integrate_score: unhandled kind");
}

double score_variance(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::Wilcoxon: return 1.0 / 12.0;
        case ScoreKind::VanDerWaerden: return 1.0;
        case ScoreKind::Sign: return 0.25;
    }
    throw std::logic_error("score_variance: unhandled kind");
}

ScoreVector generate_scores(const RankScorePath& path, ScoreKind kind) {
    const Eigen::Index n = path.n();
    const Eigen::Index segments = path.segments();
    ScoreVector sv;
    sv.kind = kind;
    sv.a2 = score_variance(kind);
    sv.values = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < segments; ++k) {
        const double a = path.breakpoints[k];
        const double b = path.breakpoints[k + 1];
        const double width = b - a;
        if (width <= 0.0) continue;
        const double seg = integrate_score(kind, a, b) / width;
        sv.values.noalias() -=
            (path.node_values.col(k + 1) - path.node_values.col(k)) * seg;
    }
    return sv;
}

}  // namespace ars
