#include "scr/io.hpp"

#include "scr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace scr {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

bool is_real(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).imag() != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

void save_matrix(std::ostream& out, const Matrix& m) {
  const bool complex_flag = !is_real(m);
  out << m.rows() << ' ' << m.cols() << ' ' << (complex_flag ? 1 : 0) << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << m(i, j).real();
      if (complex_flag) out << ' ' << m(i, j).imag();
    }
    out << '\n';
  }
  if (!out) throw IoError("matrix write failed");
}

void save_matrix(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  save_matrix(out, m);
}

Matrix load_matrix(std::istream& in) {
  Index rows = 0, cols = 0;
  int complex_flag = 0;
  if (!(in >> rows >> cols >> complex_flag) || rows < 1 || cols < 1 ||
      (complex_flag != 0 && complex_flag != 1)) {
    throw IoError("malformed matrix header");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re)) throw IoError("truncated matrix file");
      if (complex_flag && !(in >> im)) throw IoError("truncated matrix file");
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Matrix load_matrix(const std::string& path) {
  auto in = open_in(path);
  return load_matrix(in);
}

Dictionary load_dictionary(const std::string& path, const std::string& label) {
  return Dictionary(load_matrix(path), label);
}

void save_dictionary(const std::string& path, const Dictionary& d) {
  save_matrix(path, d.entries());
}

void save_sparse_vector(std::ostream& out, const SparseVector& v) {
  out << "# n=" << v.size() << '\n';
  out << "index,re,im\n";
  out << std::setprecision(17);
  for (Index k : v.support()) {
    out << k << ',' << v.dense()(k).real() << ',' << v.dense()(k).imag()
        << '\n';
  }
  if (!out) throw IoError("sparse vector write failed");
}

void save_sparse_vector(const std::string& path, const SparseVector& v) {
  auto out = open_out(path);
  save_sparse_vector(out, v);
}

SparseVector load_sparse_vector(std::istream& in) {
  std::string line;
  Index n = -1;
  if (!std::getline(in, line) || line.rfind("# n=", 0) != 0) {
    throw IoError("sparse vector file missing the dimension comment");
  }
  n = static_cast<Index>(std::stoll(line.substr(4)));
  if (n < 0) throw IoError("invalid sparse vector dimension");
  if (!std::getline(in, line) || line != "index,re,im") {
    throw IoError("sparse vector file missing the CSV header");
  }
  IndexSet support;
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    if (!std::getline(row, field, ',')) throw IoError("bad CSV row");
    const Index idx = static_cast<Index>(std::stoll(field));
    if (!std::getline(row, field, ',')) throw IoError("bad CSV row");
    const double re = std::stod(field);
    if (!std::getline(row, field, ',')) throw IoError("bad CSV row");
    const double im = std::stod(field);
    support.push_back(idx);
    values.emplace_back(re, im);
  }
  Vector vals(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    vals(static_cast<Index>(i)) = values[i];
  }
  return SparseVector(n, std::move(support), vals);
}

SparseVector load_sparse_vector(const std::string& path) {
  auto in = open_in(path);
  return load_sparse_vector(in);
}

void save_vector(const std::string& path, const Vector& v) {
  save_matrix(path, Matrix(v));
}

Vector load_vector(const std::string& path) {
  const Matrix m = load_matrix(path);
  if (m.cols() != 1) throw IoError("expected a single-column matrix file");
  return m.col(0);
}

RealMatrix read_pgm(const std::string& path) {
  auto in = open_in(path, true);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError("expected a binary PGM (P5) file");
  auto next_token = [&in]() {
    std::string tok;
    for (;;) {
      if (!(in >> tok)) throw IoError("truncated PGM header");
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
  };
  const Index cols = static_cast<Index>(std::stoll(next_token()));
  const Index rows = static_cast<Index>(std::stoll(next_token()));
  const int maxval = std::stoi(next_token());
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 255) {
    throw IoError("unsupported PGM geometry (need 8-bit)");
  }
  in.get();  // single whitespace after maxval
  std::vector<unsigned char> buffer(
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  in.read(reinterpret_cast<char*>(buffer.data()),
          static_cast<std::streamsize>(buffer.size()));
  if (static_cast<std::size_t>(in.gcount()) != buffer.size()) {
    throw IoError("truncated PGM pixel data");
  }
  RealMatrix image(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      image(r, c) = static_cast<double>(
          buffer[static_cast<std::size_t>(r * cols + c)]);
    }
  }
  return image;
}

void write_pgm(const std::string& path, const RealMatrix& image,
               const std::string& comment) {
  auto out = open_out(path, true);
  out << "P5\n";
  if (!comment.empty()) out << "# " << comment << '\n';
  out << image.cols() << ' ' << image.rows() << "\n255\n";
  std::vector<unsigned char> buffer(
      static_cast<std::size_t>(image.rows()) *
      static_cast<std::size_t>(image.cols()));
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 255.0);
      buffer[static_cast<std::size_t>(r * image.cols() + c)] =
          static_cast<unsigned char>(std::lround(v));
    }
  }
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size()));
  if (!out) throw IoError("PGM write failed");
}

}  // namespace scr
