#pragma once

/**
 * @file result_table.hpp
 * @brief Rectangular result tables with a reproducibility-grade CSV dialect:
 *        comma separators, '.' decimals, 17 significant digits (lossless
 *        double round-trip), one header row, '#'-prefixed metadata lines.
 *
 * Metadata is emitted in sorted key order so identical runs produce
 * byte-identical files; the timestamp is isolated in its own metadata key
 * for consumers that diff outputs.
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadfrac {

/// Shortest decimal string that parses back to exactly v.
inline std::string shortest_double_string(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns)
        : columns_(std::move(columns)) {}

    void set_metadata(const std::string& key, const std::string& value) {
        metadata_[key] = value;
    }
    const std::map<std::string, std::string>& metadata() const {
        return metadata_;
    }

    void add_row(std::vector<double> row) {
        if (row.size() != columns_.size()) {
            throw std::invalid_argument("ResultTable: row width mismatch");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument(
                    "ResultTable: non-finite value in row");
            }
        }
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }

    std::string to_csv() const {
        std::ostringstream os;
        for (const auto& [key, value] : metadata_) {
            os << "# " << key << ": " << value << '\n';
        }
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (c) os << ',';
            os << columns_[c];
        }
        os << '\n';
        char buf[64];
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) os << ',';
                std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
                os << buf;
            }
            os << '\n';
        }
        return os.str();
    }

    void write_csv(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open '" + path +
                                     "' for writing");
        }
        const std::string text = to_csv();
        out.write(text.data(),
                  static_cast<std::streamsize>(text.size()));
        if (!out) {
            throw std::runtime_error("write failed for '" + path + "'");
        }
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::map<std::string, std::string> metadata_;
};

/// CSV text with the timestamp metadata line removed, for byte comparisons.
inline std::string csv_without_timestamp(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# timestamp:", 0) == 0) continue;
        out << line << '\n';
    }
    return out.str();
}

}  // namespace hadfrac
