#include "io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "precnet/error.hpp"

namespace precnet::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

bool blank(const std::string& line) { return trim(line).empty(); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path.string());
    return out;
}

}  // namespace

std::vector<std::string> default_names(std::size_t p) {
    std::vector<std::string> names(p);
    for (std::size_t j = 0; j < p; ++j) names[j] = "v" + std::to_string(j + 1);
    return names;
}

Table read_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    std::size_t first = 0;
    while (first < lines.size() && blank(lines[first])) ++first;
    if (first == lines.size()) throw EmptyInput(path.string() + ": no data");

    Table t;
    std::vector<std::string> head = split_cells(lines[first]);
    double dummy;
    for (const std::string& c : head)
        if (!parse_number(c, dummy)) t.had_header = true;
    const std::size_t p = head.size();
    if (t.had_header) {
        t.names = head;
        ++first;
    } else {
        t.names = default_names(p);
    }

    std::vector<double> values;
    std::size_t rows = 0;
    for (std::size_t i = first; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const std::vector<std::string> cells = split_cells(lines[i]);
        if (cells.size() != p)
            throw ParseError(path.string() + ":" + std::to_string(i + 1) + ": expected " + std::to_string(p) +
                             " columns, found " + std::to_string(cells.size()));
        for (std::size_t j = 0; j < p; ++j) {
            double v;
            if (!parse_number(cells[j], v))
                throw ParseError(path.string() + ":" + std::to_string(i + 1) + ":" + std::to_string(j + 1) +
                                 ": not a number: '" + cells[j] + "'");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw EmptyInput(path.string() + ": header but no data rows");
    t.values = Matrix(rows, p);
    std::copy(values.begin(), values.end(), t.values.values().begin());
    return t;
}

Labels read_labels(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    Labels labels;
    bool first_content = true;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        const std::string cell = trim(lines[i]);
        double v;
        if (!parse_number(cell, v)) {
            if (first_content) {
                first_content = false;
                continue;
            }
            throw ParseError(path.string() + ":" + std::to_string(i + 1) + ":1: not a label: '" + cell + "'");
        }
        first_content = false;
        if (v != 1.0 && v != 2.0)
            throw ParseError(path.string() + ":" + std::to_string(i + 1) + ":1: labels must be 1 or 2");
        labels.push_back(static_cast<int>(v));
    }
    if (labels.empty()) throw EmptyInput(path.string() + ": no labels");
    return labels;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string header_line(const std::vector<std::string>& names) {
    std::string h;
    for (std::size_t j = 0; j < names.size(); ++j) h += (j ? "," : "") + names[j];
    return h + "\n";
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& names) {
    std::ofstream out = open_out(path);
    out << header_line(names);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
}

void write_sym_csv(const std::filesystem::path& path, const SymMatrix& m, const std::vector<std::string>& names) {
    write_matrix_csv(path, m.to_dense(), names);
}

void write_mask_csv(const std::filesystem::path& path, const Mask& m, const std::vector<std::string>& names) {
    std::ofstream out = open_out(path);
    out << header_line(names);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) out << (j ? "," : "") << (m(i, j) ? 1 : 0);
        out << '\n';
    }
}

void write_labels_csv(const std::filesystem::path& path, const Labels& labels) {
    std::ofstream out = open_out(path);
    out << "label\n";
    for (int l : labels) out << l << '\n';
}

void write_dot(const std::filesystem::path& path, const SymMatrix& omega, const Mask& pattern,
               const std::vector<std::string>& names) {
    std::ofstream out = open_out(path);
    const auto quoted = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q += '\\';
            q += c;
        }
        return q + "\"";
    };
    out << "graph precision {\n";
    for (const std::string& n : names) out << "  " << quoted(n) << ";\n";
    for (std::size_t i = 0; i < omega.dim(); ++i)
        for (std::size_t j = i + 1; j < omega.dim(); ++j)
            if (pattern(i, j))
                out << "  " << quoted(names[i]) << " -- " << quoted(names[j]) << " [weight=" << format_double(omega(i, j))
                    << "];\n";
    out << "}\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
}

}  // namespace precnet::cli
