#include "ars/simulation.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "ars/errors.hpp"

namespace ars {

std::string to_string(DesignGenerator g) {
    switch (g) {
        case DesignGenerator::IidNormal: return "iid_normal";
        case DesignGenerator::IidUniform: return "iid_uniform";
        case DesignGenerator::FixedMatrix: return "fixed_matrix";
    }
    return "unknown";
}

DesignGenerator design_generator_from_string(const std::string& name) {
    if (name == "iid_normal") return DesignGenerator::IidNormal;
    if (name == "iid_uniform") return DesignGenerator::IidUniform;
    if (name == "fixed_matrix") return DesignGenerator::FixedMatrix;
    throw ConfigError("unknown design generator \"" + name + "\"");
}

void validate_config(const SimulationConfig& cfg) {
    if (cfg.n < cfg.p + cfg.s + 2) {
        throw ConfigError("config: n must be at least p + s + 2");
    }
    if (cfg.s < 1) throw ConfigError("config: s must be positive");
    if (cfg.p < 0) throw ConfigError("config: p must be nonnegative");
    if (cfg.phi.size() != cfg.p) {
        throw ConfigError("config: phi must have length p = " + std::to_string(cfg.p));
    }
    if (cfg.beta_x.size() != cfg.s) {
        throw ConfigError("config: beta_x must have length s = " + std::to_string(cfg.s));
    }
    if (cfg.replications < 1) throw ConfigError("config: replications must be >= 1");
    if (cfg.burn_in < 50) throw ConfigError("config: burn_in must be >= 50");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) {
        throw ConfigError("config: level must lie in (0,1)");
    }
    if (cfg.design_gen == DesignGenerator::FixedMatrix &&
        (cfg.fixed_design.rows() != cfg.n || cfg.fixed_design.cols() != cfg.s)) {
        throw ConfigError("config: fixed_matrix design must be n x s");
    }

    // Stationarity: all eigenvalues of the companion matrix of
    // z^p - phi_1 z^{p-1} - ... - phi_p strictly inside the unit circle.
    if (cfg.p > 0) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(cfg.p, cfg.p);
        comp.row(0) = cfg.phi.transpose();
        for (Eigen::Index i = 1; i < cfg.p; ++i) comp(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
        if (!(rho < 1.0 - 1e-10)) {
            throw ConfigError("config: AR coefficients are not stationary (spectral radius " +
                              std::to_string(rho) + ")");
        }
    }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gen_ar_errors(
    double phi0, const Eigen::VectorXd& phi, const InnovationDistribution& dist,
    Eigen::Index n, Eigen::Index burn_in, PhiloxStream& stream) {
    const Eigen::Index p = phi.size();
    if (burn_in < p) throw ConfigError("gen_ar_errors: burn_in must be at least p");
    const Eigen::Index total = burn_in + n;
    Eigen::VectorXd eps(total);
    for (Eigen::Index t = 0; t < total; ++t) {
        double value = phi0 + dist.quantile(stream.next_double());
        for (Eigen::Index j = 1; j <= p; ++j) {
            value += phi[j - 1] * (t - j >= 0 ? eps[t - j] : 0.0);
        }
        eps[t] = value;
    }
    return {eps.segment(burn_in - p, p), eps.tail(n)};
}

Dataset gen_dataset(const SimulationConfig& cfg, Eigen::Index replicate_index) {
    const Eigen::Index n = cfg.n;
    const Eigen::Index s = cfg.s;

    PhiloxStream err_stream(cfg.seed, static_cast<std::uint64_t>(replicate_index), 0);
    auto [presample_eps, errors] =
        gen_ar_errors(cfg.phi0, cfg.phi, cfg.innovation, n, cfg.burn_in, err_stream);

    Eigen::MatrixXd x(n, s);
    if (cfg.design_gen == DesignGenerator::FixedMatrix) {
        x = cfg.fixed_design;
    } else {
        PhiloxStream x_stream(cfg.seed, static_cast<std::uint64_t>(replicate_index), 1);
        for (Eigen::Index t = 0; t < n; ++t) {
            for (Eigen::Index j = 0; j < s; ++j) {
                x(t, j) = cfg.design_gen == DesignGenerator::IidNormal
                              ? x_stream.next_normal()
                              : x_stream.next_double() - 0.5;
            }
        }
        // Standardize columns to mean 0, variance 1 per replicate.
        for (Eigen::Index j = 0; j < s; ++j) {
            const double mean = x.col(j).mean();
            x.col(j).array() -= mean;
            const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(n));
            if (sd > 0.0) x.col(j) /= sd;
        }
    }

    const Eigen::VectorXd beta_local = cfg.beta_x / std::sqrt(static_cast<double>(n));

    Dataset d;
    d.ar_order = cfg.p;
    d.presample = cfg.beta0 + presample_eps.array();
    d.response = cfg.beta0 + (x * beta_local + errors).array();
    d.regressors = x;
    d.regressor_names.reserve(static_cast<std::size_t>(s));
    for (Eigen::Index j = 0; j < s; ++j) d.regressor_names.push_back("x" + std::to_string(j + 1));
    return d;
}

namespace {

struct ReplicateOutcome {
    double p_value = std::numeric_limits<double>::quiet_NaN();
    double statistic = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd qn;
    bool failed = false;
    std::string error;
};

double ks_distance(Eigen::VectorXd sample, Eigen::Index dof) {
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
        const double f = 1.0 - chi2_sf(std::max(sample[i], 0.0), dof);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

}  // namespace

StudyReport run_study(const SimulationConfig& cfg, int threads) {
    validate_config(cfg);
    const Eigen::Index reps = cfg.replications;
    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(reps));

    int worker_count = threads > 0
                           ? threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (worker_count < 1) worker_count = 1;
    worker_count = static_cast<int>(
        std::min<Eigen::Index>(worker_count, reps));

    std::atomic<Eigen::Index> cursor{0};
    auto worker = [&]() {
        while (true) {
            const Eigen::Index r = cursor.fetch_add(1);
            if (r >= reps) break;
            auto& out = outcomes[static_cast<std::size_t>(r)];
            try {
                const Dataset d = gen_dataset(cfg, r);
                const AutoregressionDesign ar = build_ar_design(d);
                const RegressionDesign reg = make_regression_design(d);
                const RankScorePath path = solve_rank_score_path(ar);
                const ScoreVector sv = generate_scores(path, cfg.score_kind);
                const ProjectedDesign pd = project_design(ar, reg, d.regressor_names);
                auto [s_n, t_n] = compute_statistic(pd, sv);
                out.statistic = t_n;
                out.p_value = chi2_sf(t_n, cfg.s);
                out.qn = pd.qn;
            } catch (const std::exception& e) {
                out.failed = true;
                out.error = e.what();
            }
        }
    };

    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Aggregation runs in replicate-index order so reports are bitwise
    // stable under any thread count.
    StudyReport report;
    report.config = cfg;
    Eigen::Index ok = 0;
    Eigen::Index rejections = 0;
    Eigen::MatrixXd q_sum = Eigen::MatrixXd::Zero(cfg.s, cfg.s);
    std::vector<double> pvals;
    std::vector<double> stats;
    std::string first_error;
    for (Eigen::Index r = 0; r < reps; ++r) {
        const auto& out = outcomes[static_cast<std::size_t>(r)];
        if (out.failed) {
            ++report.failures;
            if (first_error.empty()) first_error = out.error;
            continue;
        }
        ++ok;
        pvals.push_back(out.p_value);
        stats.push_back(out.statistic);
        q_sum += out.qn;
        if (out.p_value < cfg.level) ++rejections;
    }
    if (report.failures * 100 > reps) {
        throw SolverError("run_study: " + std::to_string(report.failures) + " of " +
                          std::to_string(reps) + " replicates failed; first error: " +
                          first_error);
    }
    if (ok == 0) throw SolverError("run_study: no replicate succeeded");

    report.p_values = Eigen::Map<Eigen::VectorXd>(pvals.data(),
                                                  static_cast<Eigen::Index>(pvals.size()));
    report.statistics = Eigen::Map<Eigen::VectorXd>(stats.data(),
                                                    static_cast<Eigen::Index>(stats.size()));
    report.rejection_rate = static_cast<double>(rejections) / static_cast<double>(ok);
    report.mc_stderr = std::sqrt(report.rejection_rate * (1.0 - report.rejection_rate) /
                                 static_cast<double>(ok));
    report.ks_distance_to_chi2 = ks_distance(report.statistics, cfg.s);

    if (cfg.beta_x.isZero(0.0)) {
        report.eta2 = 0.0;
        report.predicted = cfg.level;
    } else {
        const Eigen::MatrixXd q_bar = q_sum / static_cast<double>(ok);
        report.eta2 = noncentrality(cfg.beta_x, q_bar, cfg.score_kind, cfg.innovation);
        report.predicted = predicted_power(report.eta2, cfg.s, cfg.level);
    }
    return report;
}

}  // namespace ars
