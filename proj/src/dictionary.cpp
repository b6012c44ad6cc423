#include "scr/dictionary.hpp"

#include "scr/errors.hpp"
#include "scr/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <utility>

namespace scr {

namespace {

bool is_power_of_two(Index m) { return m >= 1 && (m & (m - 1)) == 0; }

void check_finite(const Matrix& m, const std::string& label) {
  if (!m.allFinite()) {
    throw PreconditionError("dictionary '" + label +
                            "' contains non-finite entries");
  }
}

}  // namespace

Dictionary::Dictionary(Matrix entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DimensionError("dictionary '" + label_ + "' must be at least 1x1");
  }
  check_finite(entries_, label_);
  for (Index k = 0; k < entries_.cols(); ++k) {
    const double norm = entries_.col(k).norm();
    if (norm < 1e-14) {
      throw PreconditionError("dictionary '" + label_ + "' column " +
                              std::to_string(k) + " is numerically zero");
    }
    // Leave already-unit columns untouched so that rebuilding a dictionary
    // from its own entries is bit-exact.
    if (std::abs(norm - 1.0) > 1e-12) entries_.col(k) /= norm;
  }
}

Matrix Dictionary::columns(const IndexSet& support) const {
  Matrix out(rows(), static_cast<Index>(support.size()));
  Index prev = -1;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index k = support[i];
    if (k < 0 || k >= cols()) {
      throw PreconditionError("support index " + std::to_string(k) +
                              " out of range for dictionary '" + label_ + "'");
    }
    if (k <= prev) {
      throw PreconditionError("support sets must be sorted and duplicate-free");
    }
    prev = k;
    out.col(static_cast<Index>(i)) = entries_.col(k);
  }
  return out;
}

Dictionary build_dft(Index m) {
  if (m < 1) throw DimensionError("dft size must be >= 1");
  Matrix f(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < m; ++l) {
      const double angle = -2.0 * EIGEN_PI *
                           static_cast<double>((k * l) % m) /
                           static_cast<double>(m);
      f(k, l) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return Dictionary(std::move(f), "dft:" + std::to_string(m));
}

Dictionary build_identity(Index m) {
  if (m < 1) throw DimensionError("identity size must be >= 1");
  return Dictionary(Matrix::Identity(m, m), "identity:" + std::to_string(m));
}

Dictionary build_hadamard(Index m) {
  if (!is_power_of_two(m)) {
    throw DimensionError("hadamard size must be a power of two, got " +
                         std::to_string(m));
  }
  RealMatrix h(1, 1);
  h(0, 0) = 1.0;
  for (Index n = 1; n < m; n *= 2) {
    RealMatrix next(2 * n, 2 * n);
    next.topLeftCorner(n, n) = h;
    next.topRightCorner(n, n) = h;
    next.bottomLeftCorner(n, n) = h;
    next.bottomRightCorner(n, n) = -h;
    h = std::move(next);
  }
  h /= std::sqrt(static_cast<double>(m));
  return Dictionary(h.cast<Complex>(), "hadamard:" + std::to_string(m));
}

namespace {

// Orthonormal DCT-II analysis matrix.
RealMatrix dct_matrix(Index s) {
  RealMatrix c(s, s);
  const double a0 = std::sqrt(1.0 / static_cast<double>(s));
  const double ak = std::sqrt(2.0 / static_cast<double>(s));
  for (Index k = 0; k < s; ++k) {
    for (Index n = 0; n < s; ++n) {
      const double angle = EIGEN_PI * static_cast<double>(k) *
                           (2.0 * static_cast<double>(n) + 1.0) /
                           (2.0 * static_cast<double>(s));
      c(k, n) = (k == 0 ? a0 : ak) * std::cos(angle);
    }
  }
  return c;
}

// Multilevel orthonormal Haar analysis matrix: each level halves the
// approximation band, details stack behind it (coarse first).
RealMatrix haar_matrix(Index s, int octaves) {
  RealMatrix w = RealMatrix::Identity(s, s);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Index band = s;
  for (int level = 0; level < octaves; ++level) {
    RealMatrix step = RealMatrix::Identity(s, s);
    const Index half = band / 2;
    step.topLeftCorner(band, band).setZero();
    for (Index j = 0; j < half; ++j) {
      step(j, 2 * j) = inv_sqrt2;
      step(j, 2 * j + 1) = inv_sqrt2;
      step(half + j, 2 * j) = inv_sqrt2;
      step(half + j, 2 * j + 1) = -inv_sqrt2;
    }
    w = step * w;
    band = half;
  }
  return w;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Dictionary build_dct2d(Index side) {
  if (side < 1) throw DimensionError("dct2d side must be >= 1");
  const RealMatrix c = dct_matrix(side);
  // Synthesis operator on row-major vectorized images: transpose of the
  // separable analysis C (x) C.
  RealMatrix synthesis = kron(c, c).transpose();
  return Dictionary(synthesis.cast<Complex>(),
                    "dct2d:" + std::to_string(side));
}

Dictionary build_haar2d(Index side, int octaves) {
  if (!is_power_of_two(side)) {
    throw DimensionError("haar2d side must be a power of two, got " +
                         std::to_string(side));
  }
  if (octaves < 1 || (side >> octaves) < 1) {
    throw DimensionError("haar2d octaves must satisfy 2^octaves <= side");
  }
  const RealMatrix w = haar_matrix(side, octaves);
  RealMatrix synthesis = kron(w, w).transpose();
  return Dictionary(synthesis.cast<Complex>(),
                    "haar2d:" + std::to_string(side));
}

Dictionary build_etf_approx(Index m, Index n, int iterations,
                            std::uint64_t seed) {
  if (m < 1 || n < m) {
    throw DimensionError("etf requires n >= m >= 1");
  }
  if (iterations < 1) throw PreconditionError("etf iterations must be >= 1");

  RandomStream rng(derive_seed(seed, 0xe7f, m, n));
  RealMatrix d(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) d(i, j) = rng.next_gaussian();
    d.col(j).normalize();
  }

  const double welch =
      n == m ? 0.0
             : std::sqrt(static_cast<double>(n - m) /
                         (static_cast<double>(m) * static_cast<double>(n - 1)));

  RealMatrix gram = d.transpose() * d;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig;
  for (int it = 0; it < iterations; ++it) {
    // Structural projection: unit diagonal, off-diagonal magnitudes clipped
    // at the Welch bound.
    for (Index i = 0; i < n; ++i) {
      gram(i, i) = 1.0;
      for (Index j = i + 1; j < n; ++j) {
        double g = gram(i, j);
        if (g > welch) g = welch;
        if (g < -welch) g = -welch;
        gram(i, j) = g;
        gram(j, i) = g;
      }
    }
    // Spectral projection onto rank-m Gram matrices with trace n.
    eig.compute(gram);
    RealVector lambda = eig.eigenvalues();
    for (Index i = 0; i < n - m; ++i) lambda(i) = 0.0;
    for (Index i = n - m; i < n; ++i) lambda(i) = std::max(lambda(i), 0.0);
    const double total = lambda.sum();
    if (total > 0.0) lambda *= static_cast<double>(n) / total;
    gram = eig.eigenvectors() * lambda.asDiagonal() *
           eig.eigenvectors().transpose();
  }

  eig.compute(gram);
  RealMatrix frame(m, n);
  for (Index i = 0; i < m; ++i) {
    const Index src = n - 1 - i;
    const double lam = std::max(eig.eigenvalues()(src), 0.0);
    frame.row(i) = std::sqrt(lam) * eig.eigenvectors().col(src).transpose();
  }
  for (Index j = 0; j < n; ++j) {
    const double norm = frame.col(j).norm();
    if (norm < 1e-14) {
      // Rank collapse along the way; refill the dead column from the stream.
      for (Index i = 0; i < m; ++i) frame(i, j) = rng.next_gaussian();
    }
    frame.col(j).normalize();
  }
  return Dictionary(frame.cast<Complex>(), "etf:" + std::to_string(m) + "x" +
                                               std::to_string(n));
}

// Coherences use per-pair column dots rather than one large Gram product:
// the summation order for a pair then depends only on the column length, so
// the coherence of a concatenation matches the max over the partitioned
// index set bit-for-bit.
double coherence(const Dictionary& a) {
  const Index n = a.cols();
  if (n < 2) return 0.0;
  double mu = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      mu = std::max(mu, std::abs(a.entries().col(i).dot(a.entries().col(j))));
    }
  }
  return mu;
}

double mutual_coherence(const Dictionary& a, const Dictionary& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("mutual_coherence: row dimensions differ (" +
                         std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()) + ")");
  }
  double mu = 0.0;
  for (Index i = 0; i < a.cols(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      mu = std::max(mu, std::abs(a.entries().col(i).dot(b.entries().col(j))));
    }
  }
  return mu;
}

CoherenceProfile profile(const Dictionary& a, const Dictionary& b) {
  CoherenceProfile p;
  p.mu_a = coherence(a);
  p.mu_b = coherence(b);
  p.mu_m = mutual_coherence(a, b);
  p.mu_d = std::max({p.mu_a, p.mu_b, p.mu_m});
  return p;
}

Dictionary concat(const Dictionary& a, const Dictionary& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("concat: row dimensions differ");
  }
  Matrix d(a.rows(), a.cols() + b.cols());
  d.leftCols(a.cols()) = a.entries();
  d.rightCols(b.cols()) = b.entries();
  return Dictionary(std::move(d), a.label() + "|" + b.label());
}

}  // namespace scr
