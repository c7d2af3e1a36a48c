#include "ldpustat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ldpustat/errors.hpp"

namespace ldpustat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

struct Row {
  std::size_t line = 0;
  std::vector<double> values;
};

std::vector<Row> parse_rows(std::string_view text, bool allow_header) {
  std::vector<Row> rows;
  std::size_t line_no = 0, start = 0;
  bool seen_content = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    Row row;
    row.line = line_no;
    bool ok = true;
    std::string bad;
    for (const auto field : split(line, ',')) {
      double v = 0.0;
      if (!parse_double(field, v)) {
        ok = false;
        bad = std::string(trim(field));
        break;
      }
      row.values.push_back(v);
    }
    if (!ok) {
      if (allow_header && !seen_content) {
        seen_content = true;
        if (end == text.size()) break;
        continue;
      }
      throw ParseError("cannot parse '" + bad + "' as a number", line_no);
    }
    seen_content = true;
    rows.push_back(std::move(row));
    if (end == text.size()) break;
  }
  return rows;
}

Matrix square_matrix(const std::vector<Row>& rows, std::size_t first) {
  const std::size_t n = rows.size() - first;
  if (n == 0) throw ParseError("no matrix rows found", 0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Row& r = rows[first + i];
    if (r.values.size() != n)
      throw ParseError("expected " + std::to_string(n) + " values, found " + std::to_string(r.values.size()), r.line);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(r.values[j])) throw ParseError("non-finite entry", r.line);
      m(i, j) = r.values[j];
    }
  }
  return m;
}

bool is_index(double v) { return v >= 0.0 && v == std::floor(v) && v < 1e15; }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> parse_csv_numbers(std::string_view text, bool allow_header) {
  std::vector<std::vector<double>> out;
  for (auto& r : parse_rows(text, allow_header)) out.push_back(std::move(r.values));
  return out;
}

Matrix parse_matrix_csv(std::string_view text) { return square_matrix(parse_rows(text, false), 0); }

SymmetricMatrix parse_symmetric_csv(std::string_view text, double tol) {
  const auto rows = parse_rows(text, false);
  Matrix m = square_matrix(rows, 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw ParseError("matrix is not symmetric: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") differs from (" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")",
                         rows[i].line);
  return SymmetricMatrix(std::move(m), tol);
}

StepKernel parse_kernel_csv(std::string_view text) {
  const auto rows = parse_rows(text, false);
  if (rows.empty()) throw ParseError("no kernel rows found", 0);
  if (rows.size() >= 2 && rows.front().values.size() == rows.size() && rows[1].values.size() == rows.size() - 1) {
    // First row holds the m + 1 breakpoints of the m remaining rows.
    Matrix values = square_matrix(rows, 1);
    try {
      return StepKernel(rows.front().values, std::move(values));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), rows.front().line);
    }
  }
  Matrix values = square_matrix(rows, 0);
  if (!values.is_symmetric()) throw ParseError("kernel values are not symmetric", rows.front().line);
  return StepKernel::uniform(std::move(values));
}

DataVector parse_data_csv(std::string_view text) {
  DataVector x;
  for (const auto& r : parse_rows(text, false))
    for (double v : r.values) {
      if (!is_index(v)) throw ParseError("atom indices must be nonnegative integers", r.line);
      x.indices.push_back(static_cast<std::size_t>(v));
    }
  if (x.indices.empty()) throw ParseError("no data entries found", 0);
  return x;
}

FiniteBaseMeasure parse_measure_csv(std::string_view text) {
  std::vector<double> atoms, probs;
  for (const auto& r : parse_rows(text, true)) {
    if (r.values.size() != 2) throw ParseError("expected two columns 'atom,prob'", r.line);
    atoms.push_back(r.values[0]);
    probs.push_back(r.values[1]);
  }
  if (atoms.empty()) throw ParseError("no atoms found", 0);
  return FiniteBaseMeasure(std::move(atoms), std::move(probs));
}

PhiKernel parse_phi_table_csv(std::string_view text) {
  const auto rows = parse_rows(text, true);
  if (rows.empty()) throw ParseError("empty phi table", 0);
  const std::size_t width = rows.front().values.size();
  if (width < 2) throw ParseError("phi rows need at least one index and a value", rows.front().line);
  const std::size_t arity = width - 1;
  std::size_t atoms = 0;
  for (const auto& r : rows) {
    if (r.values.size() != width) throw ParseError("inconsistent column count", r.line);
    for (std::size_t a = 0; a < arity; ++a) {
      if (!is_index(r.values[a])) throw ParseError("atom indices must be nonnegative integers", r.line);
      atoms = std::max(atoms, static_cast<std::size_t>(r.values[a]) + 1);
    }
  }
  std::size_t size = 1;
  for (std::size_t a = 0; a < arity; ++a) size *= atoms;
  if (size != rows.size())
    throw ParseError("phi table lists " + std::to_string(rows.size()) + " tuples but " + std::to_string(atoms) + "^" +
                         std::to_string(arity) + " = " + std::to_string(size) + " are required",
                     0);
  std::vector<double> values(size);
  std::vector<char> seen(size, 0);
  for (const auto& r : rows) {
    std::size_t pos = 0;
    for (std::size_t a = 0; a < arity; ++a) pos = pos * atoms + static_cast<std::size_t>(r.values[a]);
    if (seen[pos]) throw ParseError("duplicate atom tuple", r.line);
    seen[pos] = 1;
    values[pos] = r.values[arity];
  }
  return PhiKernel::table(arity, atoms, std::move(values));
}

Matrix parse_profile_csv(std::string_view text) {
  const auto rows = parse_rows(text, true);
  if (rows.empty()) throw ParseError("empty profile", 0);
  const std::size_t cols = rows.front().values.size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != cols) throw ParseError("inconsistent column count", rows[i].line);
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i].values[j];
  }
  return m;
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace ldpustat
