// table.hpp — Column-oriented output table, written as CSV or JSON with a
// stable cell format so identical runs produce byte-identical files.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "eitcool/errors.hpp"

namespace eitcool::cli {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static std::string cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    void write_csv(std::ostream& out) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? "," : "");
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << row[c] << (c + 1 < row.size() ? "," : "");
            out << "\n";
        }
    }

    void write_json(std::ostream& out) const {
        out << "{\n  \"columns\": [";
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << "\"" << columns[c] << "\"" << (c + 1 < columns.size() ? ", " : "");
        out << "],\n  \"rows\": [\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out << "    [";
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                const std::string& v = rows[r][c];
                char* end = nullptr;
                const double x = v.empty() ? 0.0 : std::strtod(v.c_str(), &end);
                const bool numeric =
                    !v.empty() && end == v.c_str() + v.size() && std::isfinite(x);
                if (v.empty())
                    out << "null";
                else if (numeric)
                    out << v;
                else
                    out << "\"" << v << "\"";
                out << (c + 1 < rows[r].size() ? ", " : "");
            }
            out << "]" << (r + 1 < rows.size() ? "," : "") << "\n";
        }
        out << "  ]\n}\n";
    }

    void write_file(const std::string& path, bool json) const {
        std::ofstream out(path);
        if (!out) throw IoError("cannot open output file: " + path);
        if (json)
            write_json(out);
        else
            write_csv(out);
        out.flush();
        if (!out) throw IoError("failed writing output file: " + path);
    }
};

}  // namespace eitcool::cli
