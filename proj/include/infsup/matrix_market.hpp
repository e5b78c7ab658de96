#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "infsup/types.hpp"

namespace infsup {
namespace mm {

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

/// Whitespace-separated tokens with %-comment lines skipped.
class Tokenizer {
 public:
  Tokenizer(std::istream& in, std::string where) : in_(in), where_(std::move(where)) {}

  std::string next() {
    for (;;) {
      if (!(line_ >> token_)) {
        std::string raw;
        for (;;) {
          if (!std::getline(in_, raw)) throw IoError(where_ + ": unexpected end of file");
          const auto pos = raw.find_first_not_of(" \t\r");
          if (pos == std::string::npos || raw[pos] == '%') continue;
          break;
        }
        line_.clear();
        line_.str(raw);
        continue;
      }
      return token_;
    }
  }

  Index next_index() {
    std::string t = next();
    try {
      return static_cast<Index>(std::stoll(t));
    } catch (const std::exception&) {
      throw IoError(where_ + ": expected an integer, got '" + t + "'");
    }
  }

  double next_real() {
    std::string t = next();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw IoError(where_ + ": expected a number, got '" + t + "'");
    }
    if (used != t.size()) throw IoError(where_ + ": expected a number, got '" + t + "'");
    return v;
  }

 private:
  std::istream& in_;
  std::string where_;
  std::istringstream line_;
  std::string token_;
};

}  // namespace detail

/// Parse a dense matrix from a Matrix Market stream. Accepts `array` and
/// `coordinate` formats with a real (or integer) field and `general` or
/// `symmetric` symmetry; symmetric storage is expanded before use.
inline Matrix read_matrix(std::istream& in, const std::string& where = "<stream>") {
  std::string header;
  if (!std::getline(in, header)) throw IoError(where + ": empty Matrix Market input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (detail::lower(banner) != "%%matrixmarket" || detail::lower(object) != "matrix") {
    throw IoError(where + ": not a Matrix Market matrix file");
  }
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (format != "array" && format != "coordinate") {
    throw IoError(where + ": unsupported Matrix Market format '" + format + "'");
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw IoError(where + ": unsupported Matrix Market field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw IoError(where + ": unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  detail::Tokenizer tok(in, where);

  if (format == "array") {
    const Index rows = tok.next_index();
    const Index cols = tok.next_index();
    if (rows < 0 || cols < 0) throw IoError(where + ": negative dimensions");
    if (symmetric && rows != cols) throw IoError(where + ": symmetric array must be square");
    Matrix out(rows, cols);
    // Column-major; symmetric files store the lower triangle only.
    for (Index j = 0; j < cols; ++j) {
      for (Index i = symmetric ? j : 0; i < rows; ++i) {
        const double v = tok.next_real();
        out(i, j) = v;
        if (symmetric) out(j, i) = v;
      }
    }
    return out;
  }

  const Index rows = tok.next_index();
  const Index cols = tok.next_index();
  const Index nnz = tok.next_index();
  if (rows < 0 || cols < 0 || nnz < 0) throw IoError(where + ": malformed coordinate size line");
  if (symmetric && rows != cols) throw IoError(where + ": symmetric matrix must be square");
  Matrix out = Matrix::Zero(rows, cols);
  for (Index e = 0; e < nnz; ++e) {
    const Index i = tok.next_index();
    const Index j = tok.next_index();
    const double v = tok.next_real();
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw IoError(where + ": coordinate entry out of range");
    }
    out(i - 1, j - 1) += v;
    if (symmetric && i != j) out(j - 1, i - 1) += v;
  }
  return out;
}

inline Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
  return read_matrix(in, path.string());
}

/// A vector is a one-column (or one-row) matrix.
inline Vector read_vector_file(const std::filesystem::path& path) {
  Matrix m = read_matrix_file(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw IoError("expected a vector in '" + path.string() + "', got " +
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << "\n";
    }
  }
}

inline void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file '" + path.string() + "'");
  write_matrix(out, m);
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

inline void write_vector_file(const std::filesystem::path& path, const Vector& v) {
  write_matrix_file(path, Matrix(v));
}

}  // namespace mm
}  // namespace infsup
