#include "ars/table.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "ars/errors.hpp"

namespace ars {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == delimiter) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_cell(const std::string& cell, long line_no, const std::string& col) {
    if (cell.empty()) {
        throw DataError("read_table: empty cell at line " + std::to_string(line_no) +
                        ", column \"" + col + "\"");
    }
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + cell.size()) {
        throw DataError("read_table: non-numeric cell \"" + cell + "\" at line " +
                        std::to_string(line_no) + ", column \"" + col + "\"");
    }
    return v;
}

}  // namespace

Eigen::Index LabeledTable::column(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw DataError("table: no column named \"" + name + "\"");
    }
    return static_cast<Eigen::Index>(it - names.begin());
}

bool LabeledTable::has_column(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

LabeledTable parse_table(std::istream& in, char delimiter) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("read_table: parse error at line 1: missing header row");
    }
    LabeledTable table;
    table.names = split_line(strip_cr(line), delimiter);
    for (auto& n : table.names) {
        if (n.empty()) throw DataError("read_table: parse error at line 1: empty header name");
    }
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        for (std::size_t j = i + 1; j < table.names.size(); ++j) {
            if (table.names[i] == table.names[j]) {
                throw DataError("read_table: duplicate header name \"" + table.names[i] + "\"");
            }
        }
    }
    // A header of non-numeric tokens is required; a purely numeric first line
    // is almost certainly a missing header.
    {
        bool all_numeric = true;
        for (const auto& n : table.names) {
            char* end = nullptr;
            std::strtod(n.c_str(), &end);
            if (end != n.c_str() + n.size()) all_numeric = false;
        }
        if (all_numeric) {
            throw DataError("read_table: parse error at line 1: header row looks numeric");
        }
    }

    const auto ncol = static_cast<Eigen::Index>(table.names.size());
    std::vector<double> body;
    long line_no = 1;
    Eigen::Index nrow = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = strip_cr(line);
        if (stripped.empty()) continue;  // tolerate a trailing blank line
        auto cells = split_line(stripped, delimiter);
        if (static_cast<Eigen::Index>(cells.size()) != ncol) {
            throw DataError("read_table: parse error at line " + std::to_string(line_no) +
                            ": expected " + std::to_string(ncol) + " cells, got " +
                            std::to_string(cells.size()));
        }
        for (Eigen::Index c = 0; c < ncol; ++c) {
            body.push_back(parse_cell(cells[static_cast<std::size_t>(c)], line_no,
                                      table.names[static_cast<std::size_t>(c)]));
        }
        ++nrow;
    }
    table.values.resize(nrow, ncol);
    for (Eigen::Index r = 0; r < nrow; ++r) {
        for (Eigen::Index c = 0; c < ncol; ++c) {
            table.values(r, c) = body[static_cast<std::size_t>(r * ncol + c)];
        }
    }
    return table;
}

LabeledTable read_table(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("read_table: cannot open \"" + path + "\"");
    }
    return parse_table(in, delimiter);
}

}  // namespace ars
