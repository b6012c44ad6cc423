#pragma once

#include "scr/dictionary.hpp"
#include "scr/signals.hpp"

#include <iosfwd>
#include <string>

namespace scr {

// Textual matrix file: one header line "rows cols complex_flag", then entries
// in row-major order ("re" per entry when the flag is 0, "re im" when 1).
// Values round-trip doubles exactly.
void save_matrix(std::ostream& out, const Matrix& m);
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(std::istream& in);
Matrix load_matrix(const std::string& path);

Dictionary load_dictionary(const std::string& path, const std::string& label);
void save_dictionary(const std::string& path, const Dictionary& d);

// Sparse vector CSV: header "index,re,im", one row per support entry,
// 0-based indices. The dimension travels in a leading "# n=<N>" comment.
void save_sparse_vector(std::ostream& out, const SparseVector& v);
void save_sparse_vector(const std::string& path, const SparseVector& v);
SparseVector load_sparse_vector(std::istream& in);
SparseVector load_sparse_vector(const std::string& path);

// Dense complex vectors reuse the matrix format as an N x 1 matrix.
void save_vector(const std::string& path, const Vector& v);
Vector load_vector(const std::string& path);

// Binary PGM (P5, 8-bit). Pixels map to doubles in [0, 255].
RealMatrix read_pgm(const std::string& path);
void write_pgm(const std::string& path, const RealMatrix& image,
               const std::string& comment = {});

}  // namespace scr
