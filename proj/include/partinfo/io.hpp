// Text input: whitespace-delimited matrix files and flat key/value configs.
//
// Matrix files hold one row per line, entries separated by blanks; '#'
// starts a comment. Config files hold `key = value` lines. Both report
// malformed content with the offending line number.

#ifndef PARTINFO_IO_HPP
#define PARTINFO_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "partinfo/errors.hpp"
#include "partinfo/matrix.hpp"

namespace partinfo {

inline Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open matrix file '" + path + "'", 0);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<double> row;
        std::string token;
        while (fields >> token) {
            double value = 0.0;
            const char* begin = token.data();
            const char* end = begin + token.size();
            if (begin != end && *begin == '+') ++begin;  // from_chars rejects leading '+'
            const auto result = std::from_chars(begin, end, value);
            if (result.ec != std::errc{} || result.ptr != end)
                throw parse_error("matrix file '" + path + "': bad number '" + token + "'", line_no);
            row.push_back(value);
        }
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw parse_error("matrix file '" + path + "': row width differs from first row", line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error("matrix file '" + path + "': no data", line_no);

    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

/// Locale-independent float formatting, 12 significant digits.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void save_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open matrix file '" + path + "' for writing", 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_number(m(i, j));
        }
        out << '\n';
    }
}

/// Ordered key/value pairs from a flat config file. Later duplicates win.
struct ConfigFile {
    std::map<std::string, std::string> values;
    std::string path;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    const std::string& get(const std::string& key) const {
        const auto it = values.find(key);
        if (it == values.end()) throw config_error("config '" + path + "': missing key '" + key + "'");
        return it->second;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace detail

inline ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");

    ConfigFile cfg;
    cfg.path = path;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw parse_error("config file '" + path + "': expected 'key = value'", line_no);
        const std::string key = detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("config file '" + path + "': empty key or value", line_no);
        cfg.values[key] = value;
    }
    return cfg;
}

}  // namespace partinfo

#endif  // PARTINFO_IO_HPP
