#include <doctest.h>

#include "scr/dictionary.hpp"
#include "scr/errors.hpp"
#include "scr/io.hpp"
#include "scr/rng.hpp"

#include <cmath>
#include <complex>
#include <sstream>

using namespace scr;

namespace {

// Brute-force oracle: max |<c_k, c_l>| over all unordered pairs, written
// independently of the library's Gram-based path.
double coherence_oracle(const Matrix& m) {
  double mu = 0.0;
  for (Index i = 0; i < m.cols(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i == j) continue;
      Complex dot(0.0, 0.0);
      for (Index r = 0; r < m.rows(); ++r) {
        dot += std::conj(m(r, i)) * m(r, j);
      }
      mu = std::max(mu, std::abs(dot));
    }
  }
  return mu;
}

double gram_identity_error(const Dictionary& d) {
  const Matrix g = d.entries().adjoint() * d.entries();
  return (g - Matrix::Identity(d.cols(), d.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dft at trivial sizes matches the closed form") {
  const Dictionary f1 = build_dft(1);
  CHECK(f1.entries()(0, 0) == Complex(1.0, 0.0));

  const Dictionary f2 = build_dft(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2.entries()(0, 0) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(f2.entries()(0, 1) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(f2.entries()(1, 0) - Complex(s, 0)) < 1e-15);
  CHECK(std::abs(f2.entries()(1, 1) - Complex(-s, 0)) < 1e-15);
}

TEST_CASE("dft64 is unitary") {
  const Dictionary f = build_dft(64);
  CHECK(gram_identity_error(f) < 1e-10);
}

TEST_CASE("onb builders have orthonormal columns") {
  CHECK(gram_identity_error(build_identity(4)) == 0.0);
  CHECK(gram_identity_error(build_hadamard(16)) < 1e-10);
  CHECK(gram_identity_error(build_dct2d(8)) < 1e-10);
  CHECK(gram_identity_error(build_haar2d(8, 3)) < 1e-10);
}

TEST_CASE("hadamard 2x2 matches the closed form") {
  const Dictionary h = build_hadamard(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(h.entries()(0, 0).real() - s) < 1e-15);
  CHECK(std::abs(h.entries()(1, 1).real() + s) < 1e-15);
  CHECK(coherence(h) < 1e-12);
}

TEST_CASE("non-power-of-two sizes are rejected where required") {
  CHECK_THROWS_AS(build_hadamard(3), DimensionError);
  CHECK_THROWS_AS(build_haar2d(6, 1), DimensionError);
  CHECK_THROWS_AS(build_haar2d(4, 3), DimensionError);
}

TEST_CASE("column norms are enforced at construction") {
  Matrix m(2, 2);
  m << Complex(3.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
      Complex(0.0, 2.0);
  const Dictionary d(m, "scaled");
  for (Index k = 0; k < d.cols(); ++k) {
    CHECK(std::abs(d.column(k).norm() - 1.0) < 1e-12);
  }

  Matrix zero_col(2, 2);
  zero_col << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
      Complex(0.0, 0.0);
  CHECK_THROWS_AS(Dictionary(zero_col, "bad"), PreconditionError);
}

TEST_CASE("coherence basics") {
  CHECK(coherence(build_identity(5)) == 0.0);

  Matrix dup(3, 2);
  dup.setZero();
  dup(0, 0) = Complex(1.0, 0.0);
  dup(0, 1) = Complex(1.0, 0.0);
  CHECK(coherence(Dictionary(dup, "dup")) == doctest::Approx(1.0));

  Matrix single(3, 1);
  single.setZero();
  single(1, 0) = Complex(1.0, 0.0);
  CHECK(coherence(Dictionary(single, "one")) == 0.0);
}

TEST_CASE("concatenated DFT/identity coherence is 1/8") {
  const Dictionary f = build_dft(64);
  const Dictionary i = build_identity(64);
  const Dictionary d = concat(f, i);
  CHECK(d.cols() == 128);
  CHECK(coherence(d) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(coherence_oracle(d.entries()) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("mutual coherence") {
  const Dictionary f = build_dft(64);
  const Dictionary i = build_identity(64);
  CHECK(mutual_coherence(f, i) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(mutual_coherence(f, f) == doctest::Approx(1.0));

  const Dictionary h = build_hadamard(64);
  CHECK(mutual_coherence(h, i) == doctest::Approx(0.125).epsilon(1e-12));

  CHECK_THROWS_AS(mutual_coherence(build_dft(8), build_identity(4)),
                  DimensionError);
}

TEST_CASE("profile aggregates the pairwise parameters") {
  const CoherenceProfile p = profile(build_dft(64), build_identity(64));
  CHECK(p.mu_a < 1e-12);
  CHECK(p.mu_b == 0.0);
  CHECK(p.mu_m == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(p.mu_d == doctest::Approx(0.125).epsilon(1e-12));

  const CoherenceProfile q = profile(build_identity(4), build_identity(4));
  CHECK(q.mu_a == 0.0);
  CHECK(q.mu_b == 0.0);
  CHECK(q.mu_m == doctest::Approx(1.0));
  CHECK(q.mu_d == doctest::Approx(1.0));
}

TEST_CASE("concat coherence equals the profile max exactly") {
  RandomStream rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix ma(6, 4), mb(6, 5);
    for (Index j = 0; j < 4; ++j) {
      for (Index i = 0; i < 6; ++i) {
        ma(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
      }
    }
    for (Index j = 0; j < 5; ++j) {
      for (Index i = 0; i < 6; ++i) {
        mb(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
      }
    }
    const Dictionary a(ma, "a"), b(mb, "b");
    const CoherenceProfile p = profile(a, b);
    CHECK(coherence(concat(a, b)) == std::max({p.mu_a, p.mu_b, p.mu_m}));
    CHECK(mutual_coherence(a, b) == mutual_coherence(b, a));
  }
}

TEST_CASE("etf construction is deterministic and near-orthogonal when square") {
  const Dictionary e1 = build_etf_approx(3, 4, 200, 42);
  const Dictionary e2 = build_etf_approx(3, 4, 200, 42);
  CHECK((e1.entries() - e2.entries()).cwiseAbs().maxCoeff() == 0.0);

  const Dictionary sq = build_etf_approx(6, 6, 800, 3);
  CHECK(coherence(sq) < 1e-4);

  CHECK_THROWS_AS(build_etf_approx(8, 4, 100, 1), DimensionError);
}

TEST_CASE("etf 64x160 split halves land near the reported coherences") {
  const Dictionary frame = build_etf_approx(64, 160, 1200, 7);
  Matrix left = frame.entries().leftCols(80);
  Matrix right = frame.entries().rightCols(80);
  const Dictionary a(left, "etf-a"), b(right, "etf-b");
  const CoherenceProfile p = profile(a, b);
  CHECK(p.mu_a == doctest::Approx(0.1258).epsilon(0.16));
  CHECK(p.mu_b == doctest::Approx(0.1319).epsilon(0.16));
  CHECK(p.mu_m == doctest::Approx(0.1321).epsilon(0.16));
  CHECK(std::abs(p.mu_a - 0.1258) < 0.02);
  CHECK(std::abs(p.mu_b - 0.1319) < 0.02);
  CHECK(std::abs(p.mu_m - 0.1321) < 0.02);
}

TEST_CASE("matrix files round-trip") {
  const Dictionary f = build_dft(8);
  std::stringstream buffer;
  save_matrix(buffer, f.entries());
  const Matrix back = load_matrix(buffer);
  CHECK((back - f.entries()).cwiseAbs().maxCoeff() == 0.0);

  // Real matrices use the compact flag.
  std::stringstream real_buffer;
  save_matrix(real_buffer, build_hadamard(4).entries());
  std::string header;
  std::getline(real_buffer, header);
  CHECK(header == "4 4 0");
}
