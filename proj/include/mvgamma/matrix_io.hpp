#pragma once

#include "mvgamma/linalg.hpp"

#include <iosfwd>
#include <string>

namespace mvgamma::io {

// Matrix text format: first line p, then p rows of p whitespace-separated
// decimal entries. Writers emit 17 significant digits.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

// Sample tables: CSV with header x1,...,xp and one row per draw.
void write_sample_csv(std::ostream& out, const Matrix& samples);
void write_sample_csv_file(const std::string& path, const Matrix& samples);
Matrix read_sample_csv(std::istream& in);
Matrix read_sample_csv_file(const std::string& path);

/// Shortest round-trip-exact text for a double (%.17g).
std::string format_double(double v);

}  // namespace mvgamma::io
