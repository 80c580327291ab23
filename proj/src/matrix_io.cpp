#include "mvgamma/matrix_io.hpp"

#include "mvgamma/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mvgamma::io {

namespace {

double parse_number(const std::string& token, const std::string& where) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ParseError(where + ": invalid number '" + token + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix read_matrix(std::istream& in) {
  std::string line;
  // Skip blank lines before the dimension.
  while (std::getline(in, line) && trim(line).empty()) {}
  if (trim(line).empty()) throw ParseError("matrix: missing dimension line");
  std::istringstream head(line);
  std::string token;
  head >> token;
  const double pd = parse_number(token, "matrix dimension");
  if (pd < 1 || pd != static_cast<double>(static_cast<long>(pd)) || pd > 10000)
    throw ParseError("matrix: dimension must be a positive integer, got '" + token + "'");
  if (head >> token) throw ParseError("matrix: trailing tokens on dimension line");
  const auto p = static_cast<Eigen::Index>(pd);

  Matrix m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!std::getline(in, line))
      throw ParseError("matrix: expected " + std::to_string(p) + " rows, got " + std::to_string(i));
    std::istringstream row(line);
    Eigen::Index j = 0;
    while (row >> token) {
      if (j >= p) throw ParseError("matrix: row " + std::to_string(i + 1) + " has too many entries");
      m(i, j++) = parse_number(token, "matrix row " + std::to_string(i + 1));
    }
    if (j != p)
      throw ParseError("matrix: row " + std::to_string(i + 1) + " has " + std::to_string(j) +
                       " entries, expected " + std::to_string(p));
  }
  while (std::getline(in, line))
    if (!trim(line).empty()) throw ParseError("matrix: trailing content after last row");
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write matrix file '" + path + "'");
  write_matrix(out, m);
}

void write_sample_csv(std::ostream& out, const Matrix& samples) {
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j)
      out << (j ? "," : "") << format_double(samples(i, j));
    out << '\n';
  }
}

void write_sample_csv_file(const std::string& path, const Matrix& samples) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write sample file '" + path + "'");
  write_sample_csv(out, samples);
}

Matrix read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header");
  const auto header = split(trim(line), ',');
  const auto p = static_cast<Eigen::Index>(header.size());
  for (Eigen::Index j = 0; j < p; ++j)
    if (trim(header[static_cast<std::size_t>(j)]) != "x" + std::to_string(j + 1))
      throw ParseError("csv: header must be x1..xp");

  std::vector<double> values;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (static_cast<Eigen::Index>(cells.size()) != p)
      throw ParseError("csv: row " + std::to_string(rows + 1) + " has wrong column count");
    for (const auto& c : cells) values.push_back(parse_number(trim(c), "csv row " + std::to_string(rows + 1)));
    ++rows;
  }
  Matrix out(rows, p);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < p; ++j) out(i, j) = values[static_cast<std::size_t>(i * p + j)];
  return out;
}

Matrix read_sample_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sample file '" + path + "'");
  return read_sample_csv(in);
}

}  // namespace mvgamma::io
