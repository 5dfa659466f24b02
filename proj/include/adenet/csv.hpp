#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "adenet/simulation.hpp"
#include "adenet/types.hpp"

namespace adenet {

// Carries the 1-based line and column of the offending cell.
struct CsvParseError : std::runtime_error {
    int line = 0;
    int column = 0;
    CsvParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg), line(line_), column(column_) {}
};

struct CsvData {
    std::vector<std::string> column_names;
    Eigen::MatrixXd values;  // one row per data line
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

// Strict numeric CSV: a header line of column names, then rows of numbers.
// Any non-numeric cell raises CsvParseError naming its line and column.
inline CsvData parse_numeric_csv(std::istream& in) {
    CsvData out;
    std::string line;
    int lineno = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (out.column_names.empty()) {
            out.column_names = cells;
            if (out.column_names.size() < 2)
                throw CsvParseError("header must name a response and at least one predictor",
                                    lineno, 1);
            continue;
        }
        if (cells.size() != out.column_names.size())
            throw CsvParseError("expected " + std::to_string(out.column_names.size()) +
                                    " cells, found " + std::to_string(cells.size()),
                                lineno, 1);
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            double v = 0.0;
            const auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw CsvParseError("cell '" + cell + "' is not numeric", lineno,
                                    static_cast<int>(c) + 1);
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }
    if (out.column_names.empty())
        throw CsvParseError("empty input: missing header line", 1, 1);
    if (rows.empty())
        throw CsvParseError("no data rows after the header", lineno, 1);
    out.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(out.column_names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < rows[i].size(); ++c)
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                rows[i][c];
    return out;
}

// First column is the response, the rest are predictors.
inline Dataset dataset_from_csv(const CsvData& csv) {
    Dataset data;
    data.y = csv.values.col(0);
    data.X = csv.values.rightCols(csv.values.cols() - 1);
    data.centered = false;
    return data;
}

inline std::string format_fixed(double v, int decimals = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

// Stable study-table serialization: fixed column order, 4-decimal metrics,
// LF line endings.
inline void write_metrics_csv_header(std::ostream& os) {
    os << "n,p,a_size,rho,method,mse_mean,mse_se,c_mean,ic_mean,exact_support_rate\n";
}

inline void write_metrics_csv_rows(std::ostream& os, const MetricsTable& table) {
    for (const MetricsRow& row : table.rows) {
        os << table.n << ',' << table.p << ',' << table.support_size << ','
           << format_fixed(table.rho, 2) << ',' << row.method << ','
           << format_fixed(row.mse_mean) << ',' << format_fixed(row.mse_se) << ','
           << format_fixed(row.c_mean) << ',' << format_fixed(row.ic_mean) << ','
           << format_fixed(row.exact_support_rate) << '\n';
    }
}

}  // namespace adenet
