#include "ars/model_data.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ars/errors.hpp"

namespace ars {

namespace {

void check_finite_column(const Eigen::VectorXd& col, const std::string& name) {
    for (Eigen::Index r = 0; r < col.size(); ++r) {
        if (!std::isfinite(col[r])) {
            throw DataError("load_dataset: non-finite value at (row " +
                            std::to_string(r + 1) + ", \"" + name + "\")");
        }
    }
}

}  // namespace

Dataset load_dataset(const LabeledTable& table, const std::string& response_name,
                     const std::vector<std::string>& regressor_names,
                     Eigen::Index ar_order, PresamplePolicy policy,
                     const Eigen::VectorXd& explicit_presample) {
    if (ar_order < 0) throw DataError("load_dataset: ar_order must be nonnegative");
    const Eigen::Index y_col = table.column(response_name);
    std::vector<Eigen::Index> x_cols;
    x_cols.reserve(regressor_names.size());
    for (const auto& name : regressor_names) x_cols.push_back(table.column(name));

    check_finite_column(table.values.col(y_col), response_name);
    for (std::size_t j = 0; j < regressor_names.size(); ++j) {
        check_finite_column(table.values.col(x_cols[j]), regressor_names[j]);
    }

    const Eigen::Index rows = table.rows();
    const Eigen::Index s = static_cast<Eigen::Index>(regressor_names.size());
    const Eigen::Index p = ar_order;

    Dataset d;
    d.ar_order = p;
    d.regressor_names = regressor_names;

    Eigen::Index first_row = 0;
    if (policy == PresamplePolicy::ConsumeHead) {
        if (rows <= p) {
            throw DataError("load_dataset: table has " + std::to_string(rows) +
                            " rows, cannot consume a presample of length " +
                            std::to_string(p));
        }
        d.presample = table.values.col(y_col).head(p);
        first_row = p;
    } else {
        if (explicit_presample.size() != p) {
            throw DataError("load_dataset: explicit presample has length " +
                            std::to_string(explicit_presample.size()) + ", expected " +
                            std::to_string(p));
        }
        for (Eigen::Index i = 0; i < p; ++i) {
            if (!std::isfinite(explicit_presample[i])) {
                throw DataError("load_dataset: non-finite presample value at index " +
                                std::to_string(i + 1));
            }
        }
        d.presample = explicit_presample;
    }

    const Eigen::Index n = rows - first_row;
    if (n < p + s + 2) {
        throw DataError("load_dataset: effective n = " + std::to_string(n) +
                        " is below the minimum p + s + 2 = " + std::to_string(p + s + 2));
    }
    d.response = table.values.col(y_col).segment(first_row, n);
    d.regressors.resize(n, s);
    for (Eigen::Index j = 0; j < s; ++j) {
        d.regressors.col(j) = table.values.col(x_cols[static_cast<std::size_t>(j)])
                                  .segment(first_row, n);
    }
    return d;
}

AutoregressionDesign build_ar_design(const Dataset& d) {
    const Eigen::Index n = d.n();
    const Eigen::Index p = d.ar_order;
    if (d.presample.size() != p) {
        throw DataError("build_ar_design: presample length " +
                        std::to_string(d.presample.size()) + " does not match ar_order " +
                        std::to_string(p));
    }

    AutoregressionDesign ar;
    ar.p = p;
    ar.response = d.response;
    ar.design.resize(n, p + 1);
    ar.design.col(0).setOnes();
    // Value of y at time index t (1-based); t <= 0 reads the presample.
    auto y_at = [&](Eigen::Index t) -> double {
        return t >= 1 ? d.response[t - 1] : d.presample[p - 1 + t];
    };
    for (Eigen::Index t = 1; t <= n; ++t) {
        for (Eigen::Index j = 1; j <= p; ++j) {
            ar.design(t - 1, j) = y_at(t - j);
        }
    }

    // Fail early on a rank-deficient lag design rather than inside the LP.
    Eigen::MatrixXd gram = ar.design.transpose() * ar.design;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double tol = 1e-10 * gram.trace();
    if (es.eigenvalues().minCoeff() <= tol) {
        throw SingularDesignError(
            "build_ar_design: lagged design is singular (a lag column is collinear "
            "with the intercept or another lag)");
    }
    return ar;
}

RegressionDesign make_regression_design(const Dataset& d) {
    RegressionDesign r;
    r.xstar = d.regressors;
    r.with_intercept.resize(d.n(), d.s() + 1);
    r.with_intercept.col(0).setOnes();
    r.with_intercept.rightCols(d.s()) = d.regressors;
    return r;
}

DesignDiagnostics design_diagnostics(const RegressionDesign& r) {
    const Eigen::Index n = r.xstar.rows();
    DesignDiagnostics diag;
    Eigen::MatrixXd an = (r.xstar.transpose() * r.xstar) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(an);
    diag.min_eigen_an = std::max(0.0, es.eigenvalues().minCoeff());
    diag.fourth_moment_avg =
        r.xstar.rowwise().squaredNorm().array().square().sum() / static_cast<double>(n);

    // Leverage through the pseudoinverse so a singular A_n stays computable.
    Eigen::VectorXd evals = es.eigenvalues();
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(an.rows(), an.cols());
    const double cutoff = 1e-14 * std::max(1.0, evals.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
        if (evals[k] > cutoff) {
            pinv += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose() / evals[k];
        }
    }
    double max_lev = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        double lev = r.xstar.row(t) * pinv * r.xstar.row(t).transpose();
        max_lev = std::max(max_lev, lev / static_cast<double>(n));
    }
    diag.max_leverage = max_lev;
    return diag;
}

std::vector<std::string> diagnostic_warnings(const DesignDiagnostics& diag,
                                             const RegressionDesign& r) {
    std::vector<std::string> warnings;
    const Eigen::Index n = r.xstar.rows();
    Eigen::MatrixXd an = (r.xstar.transpose() * r.xstar) / static_cast<double>(n);
    if (diag.min_eigen_an < 1e-10 * an.trace()) {
        warnings.push_back("regressor matrix is near singular (min eigenvalue " +
                           std::to_string(diag.min_eigen_an) + ")");
    }
    if (diag.max_leverage > 0.5) {
        warnings.push_back("a regressor row has leverage " +
                           std::to_string(diag.max_leverage) +
                           " > 0.5; asymptotics may be unreliable");
    }
    return warnings;
}

}  // namespace ars
