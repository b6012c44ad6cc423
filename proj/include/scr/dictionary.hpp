#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace scr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;  // sorted, 0-based

// A dictionary is a dense complex matrix whose columns all have unit l2-norm.
// Columns are renormalized at construction; a numerically zero column is an
// error. Instances are immutable and safe to share across threads.
class Dictionary {
 public:
  Dictionary(Matrix entries, std::string label);

  const Matrix& entries() const { return entries_; }
  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  const std::string& label() const { return label_; }

  Vector column(Index k) const { return entries_.col(k); }

  // Columns restricted to a support set.
  Matrix columns(const IndexSet& support) const;

 private:
  Matrix entries_;
  std::string label_;
};

// Coherence parameters of a dictionary pair (A, B):
//   mu_a, mu_b  coherence of each dictionary alone,
//   mu_m        mutual coherence across the pair,
//   mu_d        coherence of the concatenation [A B] = max of the three.
struct CoherenceProfile {
  double mu_a = 0.0;
  double mu_b = 0.0;
  double mu_m = 0.0;
  double mu_d = 0.0;
};

// Builders. The 2-D transforms act on row-major vectorized side x side
// images, i.e. they are side^2 x side^2 synthesis matrices whose columns are
// the basis images.
Dictionary build_dft(Index m);
Dictionary build_identity(Index m);
Dictionary build_hadamard(Index m);              // m must be a power of two
Dictionary build_dct2d(Index side);
Dictionary build_haar2d(Index side, int octaves = 3);  // side a power of two

// Approximate equiangular tight frame via alternating projections between
// the tight-frame constraint and clipped off-diagonal Gram entries.
// Deterministic for a fixed seed; non-convergence is not an error.
Dictionary build_etf_approx(Index m, Index n, int iterations = 5000,
                            std::uint64_t seed = 0);

double coherence(const Dictionary& a);
double mutual_coherence(const Dictionary& a, const Dictionary& b);
CoherenceProfile profile(const Dictionary& a, const Dictionary& b);
Dictionary concat(const Dictionary& a, const Dictionary& b);

}  // namespace scr
