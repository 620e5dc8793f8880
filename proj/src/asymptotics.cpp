#include "ars/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ars/errors.hpp"
#include "ars/special_functions.hpp"

namespace ars {

double chi2_sf(double x, Eigen::Index k) {
    if (k <= 0) throw std::domain_error("chi2_sf: degrees of freedom must be positive");
    if (x < 0.0) throw std::domain_error("chi2_sf: x must be nonnegative");
    if (x == 0.0) return 1.0;
    return gamma_q(0.5 * static_cast<double>(k), 0.5 * x);
}

double chi2_quantile(double prob, Eigen::Index k) {
    if (k <= 0) throw std::domain_error("chi2_quantile: degrees of freedom must be positive");
    if (!(prob > 0.0 && prob < 1.0)) {
        throw std::domain_error("chi2_quantile: prob must lie in (0,1)");
    }
    const double kk = static_cast<double>(k);
    // Wilson-Hilferty start.
    const double z = inv_norm_cdf(prob);
    const double t = 1.0 - 2.0 / (9.0 * kk) + z * std::sqrt(2.0 / (9.0 * kk));
    double x = kk * t * t * t;
    if (!(x > 0.0)) x = 0.5;

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    auto cdf = [&](double v) { return 1.0 - chi2_sf(v, k); };
    auto pdf = [&](double v) {
        return std::exp((0.5 * kk - 1.0) * std::log(v) - 0.5 * v -
                        std::lgamma(0.5 * kk) - 0.5 * kk * std::log(2.0));
    };
    for (int it = 0; it < 200; ++it) {
        const double f = cdf(x) - prob;
        if (f > 0.0) hi = std::min(hi, x);
        else lo = std::max(lo, x);
        if (std::fabs(f) < 1e-14) break;
        const double g = pdf(x);
        double next = g > 0.0 ? x - f / g : x;
        if (!(next > lo && (next < hi))) {
            next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x + 1.0;
        }
        if (std::fabs(next - x) < 1e-13 * (1.0 + x)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

InnovationDistribution::InnovationDistribution(Kind kind, double a, double b, double c)
    : kind_(kind), a_(a), b_(b), c_(c) {}

InnovationDistribution InnovationDistribution::normal(double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("normal innovations need sigma > 0");
    return {Kind::Normal, sigma, 0.0, 0.0};
}

InnovationDistribution InnovationDistribution::logistic(double scale) {
    if (!(scale > 0.0)) throw ConfigError("logistic innovations need scale > 0");
    return {Kind::Logistic, scale, 0.0, 0.0};
}

InnovationDistribution InnovationDistribution::student_t(double nu, double scale) {
    if (!(nu > 2.0)) {
        throw ConfigError("student_t innovations need nu > 2 (finite variance)");
    }
    if (!(scale > 0.0)) throw ConfigError("student_t innovations need scale > 0");
    return {Kind::StudentT, nu, scale, 0.0};
}

InnovationDistribution InnovationDistribution::contaminated_normal(double eps, double sigma1,
                                                                   double sigma2) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw ConfigError("contaminated_normal needs contamination share in [0,1]");
    }
    if (!(sigma1 > 0.0 && sigma2 > 0.0)) {
        throw ConfigError("contaminated_normal needs positive scales");
    }
    return {Kind::ContaminatedNormal, eps, sigma1, sigma2};
}

InnovationDistribution InnovationDistribution::parse(const std::string& text) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw ConfigError("cannot parse innovation \"" + text +
                          "\"; expected e.g. normal(1.0) or student_t(5,1.0)");
    }
    const std::string name = text.substr(0, open);
    std::vector<double> args;
    std::stringstream ss(text.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            args.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad numeric argument \"" + tok + "\" in innovation \"" +
                              text + "\"");
        }
    }
    auto need = [&](std::size_t count) {
        if (args.size() != count) {
            throw ConfigError("innovation " + name + " takes " + std::to_string(count) +
                              " argument(s)");
        }
    };
    if (name == "normal") {
        need(1);
        return normal(args[0]);
    }
    if (name == "logistic") {
        need(1);
        return logistic(args[0]);
    }
    if (name == "student_t") {
        need(2);
        return student_t(args[0], args[1]);
    }
    if (name == "contaminated_normal") {
        need(3);
        return contaminated_normal(args[0], args[1], args[2]);
    }
    throw ConfigError("unknown innovation family \"" + name + "\"");
}

double InnovationDistribution::pdf(double x) const {
    switch (kind_) {
        case Kind::Normal:
            return norm_pdf(x / a_) / a_;
        case Kind::Logistic: {
            const double e = std::exp(-std::fabs(x) / a_);
            const double denom = (1.0 + e) * (1.0 + e);
            return e / (a_ * denom);
        }
        case Kind::StudentT: {
            const double nu = a_, s = b_;
            const double z = x / s;
            const double logc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                                0.5 * std::log(nu * M_PI);
            return std::exp(logc - 0.5 * (nu + 1.0) * std::log1p(z * z / nu)) / s;
        }
        case Kind::ContaminatedNormal:
            return (1.0 - a_) * norm_pdf(x / b_) / b_ + a_ * norm_pdf(x / c_) / c_;
    }
    return 0.0;
}

double InnovationDistribution::cdf(double x) const {
    switch (kind_) {
        case Kind::Normal:
            return norm_cdf(x / a_);
        case Kind::Logistic:
            return 1.0 / (1.0 + std::exp(-x / a_));
        case Kind::StudentT: {
            const double nu = a_, s = b_;
            const double z = x / s;
            if (z == 0.0) return 0.5;
            const double w = nu / (nu + z * z);
            const double half_tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, w);
            return z > 0.0 ? 1.0 - half_tail : half_tail;
        }
        case Kind::ContaminatedNormal:
            return (1.0 - a_) * norm_cdf(x / b_) + a_ * norm_cdf(x / c_);
    }
    return 0.0;
}

double InnovationDistribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error("InnovationDistribution::quantile: u must lie in (0,1)");
    }
    switch (kind_) {
        case Kind::Normal:
            return a_ * inv_norm_cdf(u);
        case Kind::Logistic:
            return a_ * std::log(u / (1.0 - u));
        case Kind::StudentT:
        case Kind::ContaminatedNormal: {
            // Safeguarded Newton on the CDF; the bracket grows until it
            // encloses the root.
            double sd = std::sqrt(variance());
            double lo = -8.0 * sd, hi = 8.0 * sd;
            while (cdf(lo) > u) lo *= 2.0;
            while (cdf(hi) < u) hi *= 2.0;
            double x = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                const double f = cdf(x) - u;
                if (std::fabs(f) < 1e-15) return x;
                if (f > 0.0) hi = x;
                else lo = x;
                const double g = pdf(x);
                double next = g > 0.0 ? x - f / g : 0.5 * (lo + hi);
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (std::fabs(next - x) < 1e-13 * (1.0 + std::fabs(x))) return next;
                x = next;
            }
            return x;
        }
    }
    return 0.0;
}

double InnovationDistribution::pdf_derivative(double x) const {
    switch (kind_) {
        case Kind::Normal:
            return -x / (a_ * a_) * pdf(x);
        case Kind::Logistic: {
            const double f = cdf(x);
            return pdf(x) * (1.0 - 2.0 * f) / a_;
        }
        case Kind::StudentT: {
            const double nu = a_, s = b_;
            return -pdf(x) * (nu + 1.0) * x / (nu * s * s + x * x);
        }
        case Kind::ContaminatedNormal:
            return (1.0 - a_) * (-x / (b_ * b_)) * norm_pdf(x / b_) / b_ +
                   a_ * (-x / (c_ * c_)) * norm_pdf(x / c_) / c_;
    }
    return 0.0;
}

double InnovationDistribution::variance() const {
    switch (kind_) {
        case Kind::Normal:
            return a_ * a_;
        case Kind::Logistic:
            return a_ * a_ * M_PI * M_PI / 3.0;
        case Kind::StudentT:
            return b_ * b_ * a_ / (a_ - 2.0);
        case Kind::ContaminatedNormal:
            return (1.0 - a_) * b_ * b_ + a_ * c_ * c_;
    }
    return 0.0;
}

std::string InnovationDistribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Normal: os << "normal(" << a_ << ")"; break;
        case Kind::Logistic: os << "logistic(" << a_ << ")"; break;
        case Kind::StudentT: os << "student_t(" << a_ << "," << b_ << ")"; break;
        case Kind::ContaminatedNormal:
            os << "contaminated_normal(" << a_ << "," << b_ << "," << c_ << ")";
            break;
    }
    return os.str();
}

double gamma_jf(ScoreKind kind, const InnovationDistribution& dist) {
    // gamma = -int J(F(x)) f'(x) dx; the substitution x = F^{-1}(v) folds the
    // score back onto the quantile scale. Tails beyond u = 1e-13 contribute
    // below the accuracy target for every supported family.
    const double lo = dist.quantile(1e-13);
    const double hi = dist.quantile(1.0 - 1e-13);
    const double mid = dist.quantile(0.5);
    auto integrand = [&](double x) {
        double u = dist.cdf(x);
        u = std::min(1.0 - 1e-16, std::max(1e-16, u));
        return -eval_score(kind, u) * dist.pdf_derivative(x);
    };
    const double tol = 5e-9;
    return integrate_gk(integrand, lo, mid, tol) + integrate_gk(integrand, mid, hi, tol);
}

double noncentrality(const Eigen::VectorXd& beta_x, const Eigen::MatrixXd& q,
                     ScoreKind kind, const InnovationDistribution& dist) {
    if (q.rows() != beta_x.size() || q.cols() != beta_x.size()) {
        throw DataError("noncentrality: Q must be s x s with s = len(beta_x)");
    }
    const double quad = beta_x.dot(q * beta_x);
    if (quad < -1e-12 * (1.0 + beta_x.squaredNorm())) {
        throw std::domain_error("noncentrality: Q is not positive semidefinite");
    }
    const double g = gamma_jf(kind, dist);
    return std::max(quad, 0.0) * g * g / score_variance(kind);
}

double predicted_power(double eta2, Eigen::Index s, double tau) {
    if (eta2 < 0.0) throw std::domain_error("predicted_power: eta2 must be nonnegative");
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::domain_error("predicted_power: tau must lie in (0,1)");
    }
    if (eta2 == 0.0) return tau;

    const double xcrit = chi2_quantile(1.0 - tau, s);
    const double lambda = 0.5 * eta2;
    const long cap = 200000;
    if (lambda > static_cast<double>(cap) / 4.0) return 1.0;  // saturated

    double log_weight = -lambda;  // log Poisson(0)
    double cum = 0.0;
    double power = 0.0;
    for (long j = 0; j < cap; ++j) {
        const double w = std::exp(log_weight);
        power += w * chi2_sf(xcrit, s + 2 * j);
        cum += w;
        if (1.0 - cum < 1e-12 && j > lambda) break;
        log_weight += std::log(lambda) - std::log1p(static_cast<double>(j));
    }
    return std::min(power, 1.0);
}

PowerPrediction predict_power(const Eigen::VectorXd& beta_x, const Eigen::MatrixXd& q,
                              ScoreKind kind, const InnovationDistribution& dist,
                              Eigen::Index s, double tau) {
    PowerPrediction out;
    out.eta2 = noncentrality(beta_x, q, kind, dist);
    out.dof = s;
    out.level = tau;
    out.power = predicted_power(out.eta2, s, tau);
    return out;
}

}  // namespace ars
