#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

namespace ars {

/// In-memory labeled numeric table: a header row of unique column names and
/// a dense numeric body. Row order is exactly the input order.
struct LabeledTable {
    std::vector<std::string> names;
    Eigen::MatrixXd values;  // rows x columns

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Index of a named column, or DataError if absent.
    Eigen::Index column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

/// Parse delimiter-separated values with a mandatory header row.
/// Decimal point is '.', empty cells and non-numeric cells are errors
/// reported with their line number. Scientific notation is accepted.
LabeledTable parse_table(std::istream& in, char delimiter = ',');

/// Read a table from a file path. Throws IoError when the file cannot be
/// opened and DataError on malformed content.
LabeledTable read_table(const std::string& path, char delimiter = ',');

}  // namespace ars
