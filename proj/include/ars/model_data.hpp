#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ars/table.hpp"

namespace ars {

/// How load_dataset obtains the p starting values of the response.
enum class PresamplePolicy {
    Explicit,     ///< caller supplies the presample vector alongside the table
    ConsumeHead,  ///< the first p table rows become the presample
};

/// Observed data: a response series with its presample, and the exogenous
/// regressor block. Immutable after construction.
struct Dataset {
    Eigen::VectorXd presample;               ///< y_{-p+1}, ..., y_0
    Eigen::VectorXd response;                ///< y_1, ..., y_n
    Eigen::MatrixXd regressors;              ///< n x s, no intercept column
    std::vector<std::string> regressor_names;
    Eigen::Index ar_order = 0;

    Eigen::Index n() const { return response.size(); }
    Eigen::Index s() const { return regressors.cols(); }
};

/// The lagged design: row t is (1, y_{t-1}, ..., y_{t-p}), with presample
/// values filling indices at or below zero. Full column rank by construction.
struct AutoregressionDesign {
    Eigen::MatrixXd design;    ///< n x (p+1), first column identically 1
    Eigen::VectorXd response;  ///< y_1, ..., y_n
    Eigen::Index p = 0;

    Eigen::Index n() const { return response.size(); }
};

/// The exogenous design, with and without the intercept column.
struct RegressionDesign {
    Eigen::MatrixXd xstar;           ///< n x s
    Eigen::MatrixXd with_intercept;  ///< n x (s+1), [1 | xstar]
};

/// Advisory conditioning summaries of the regressor block.
struct DesignDiagnostics {
    double min_eigen_an = 0.0;      ///< smallest eigenvalue of A_n = n^-1 X*'X*
    double fourth_moment_avg = 0.0; ///< n^-1 sum_t ||x_t||^4
    double max_leverage = 0.0;      ///< max_t n^-1 x_t' A_n^-1 x_t
};

/// Assemble a Dataset from a labeled table. Under ConsumeHead the first
/// ar_order response rows become the presample and those rows are dropped
/// from the regressors, so the effective n shrinks by ar_order. Under
/// Explicit the caller passes the presample in `explicit_presample`.
///
/// Errors: missing column, non-finite cell (reported with 1-based data row
/// and column name), or too few rows for the model dimensions.
Dataset load_dataset(const LabeledTable& table, const std::string& response_name,
                     const std::vector<std::string>& regressor_names,
                     Eigen::Index ar_order, PresamplePolicy policy,
                     const Eigen::VectorXd& explicit_presample = Eigen::VectorXd());

/// Build the lagged autoregression design from a dataset. Fails with
/// SingularDesignError when the design is column-rank deficient (e.g. a
/// constant response with p >= 1).
AutoregressionDesign build_ar_design(const Dataset& d);

/// The exogenous design matrices of a dataset.
RegressionDesign make_regression_design(const Dataset& d);

/// Conditioning diagnostics of X*. Always computable; a singular A_n yields
/// min_eigen_an = 0.
DesignDiagnostics design_diagnostics(const RegressionDesign& r);

/// Human-readable warnings derived from diagnostics; empty when the design
/// looks well conditioned.
std::vector<std::string> diagnostic_warnings(const DesignDiagnostics& diag,
                                             const RegressionDesign& r);

}  // namespace ars
