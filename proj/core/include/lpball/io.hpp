#pragma once

#include <lpball/types.hpp>

#include <filesystem>

namespace lpball {

// Dense comma-separated matrix, one row per line. A leading non-numeric
// row is taken as a header and skipped.
Matrix read_matrix_csv(const std::filesystem::path &path);

// Accepts one value per line or a single comma-separated row.
Vector read_vector_csv(const std::filesystem::path &path);

// One value per line at 17 significant digits.
void write_vector_csv(const Vector &v, const std::filesystem::path &path);

} // namespace lpball
