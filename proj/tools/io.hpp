#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "precnet/applications.hpp"
#include "precnet/estimator.hpp"
#include "precnet/linalg.hpp"

namespace precnet::cli {

struct Table {
    Matrix values;
    std::vector<std::string> names;  // from the header row, or v1..vp
    bool had_header = false;
};

// Comma-separated numbers, one observation per row. A first row containing
// any non-numeric cell is taken as the header. Throws EmptyInput or
// ParseError (with line and column).
Table read_csv(const std::filesystem::path& path);

// One label per row (1 or 2); a non-numeric first row is skipped.
Labels read_labels(const std::filesystem::path& path);

std::string format_double(double v);  // 17 significant digits

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& names);
void write_sym_csv(const std::filesystem::path& path, const SymMatrix& m, const std::vector<std::string>& names);
void write_mask_csv(const std::filesystem::path& path, const Mask& m, const std::vector<std::string>& names);
void write_labels_csv(const std::filesystem::path& path, const Labels& labels);

// Undirected graph with one edge per off-diagonal entry set in `pattern`,
// weight = omega_ij.
void write_dot(const std::filesystem::path& path, const SymMatrix& omega, const Mask& pattern,
               const std::vector<std::string>& names);

void write_text(const std::filesystem::path& path, const std::string& text);

std::vector<std::string> default_names(std::size_t p);

}  // namespace precnet::cli
