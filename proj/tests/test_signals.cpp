#include <doctest.h>

#include "scr/errors.hpp"
#include "scr/io.hpp"
#include "scr/signals.hpp"

#include <sstream>

using namespace scr;

TEST_CASE("comb places equidistant unit spikes") {
  const SparseVector c = comb(64, 8);
  CHECK(c.sparsity() == 8);
  CHECK(c.support() == IndexSet{0, 8, 16, 24, 32, 40, 48, 56});
  for (Index k : c.support()) CHECK(c.dense()(k) == Complex(1.0, 0.0));

  const SparseVector tight = comb(4, 4);
  CHECK(tight.sparsity() == 1);
  CHECK(tight.dense()(0) == Complex(1.0, 0.0));

  CHECK_THROWS_AS(comb(5, 2), PreconditionError);
}

TEST_CASE("comb with sqrt-M spacing is a DFT fixed point") {
  const Dictionary f = build_dft(64);
  const SparseVector c = comb(64, 8);
  const Vector transformed = f.entries() * c.dense();
  CHECK((transformed - c.dense()).norm() < 1e-10);
}

TEST_CASE("concentration") {
  Vector r(4);
  r << Complex(1, 0), Complex(1, 0), Complex(1, 0), Complex(1, 0);
  CHECK(concentration(r, {0, 1}) == doctest::Approx(0.5));
  CHECK(concentration(r, {}) == doctest::Approx(1.0));
  CHECK(concentration(r, {0, 1, 2, 3}) == doctest::Approx(0.0));

  const SparseVector c = comb(16, 4);
  CHECK(concentration(c, c.support()) == doctest::Approx(0.0));

  Vector zero = Vector::Zero(3);
  CHECK_THROWS_AS(concentration(zero, {0}), PreconditionError);
}

TEST_CASE("concentration is scale invariant") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto [x, e] = random_instance(12, 12, 5, 3, seed);
    const IndexSet s{0, 3, 7};
    const double base = concentration(x.dense(), s);
    const Vector scaled = x.dense() * Complex(37.5, -2.25);
    CHECK(concentration(scaled, s) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("random_instance honors cardinalities and determinism") {
  const auto [x0, e0] = random_instance(10, 12, 0, 12, 5);
  CHECK(x0.sparsity() == 0);
  CHECK(x0.dense().norm() == 0.0);
  CHECK(e0.sparsity() == 12);
  CHECK(e0.support().front() == 0);
  CHECK(e0.support().back() == 11);

  const auto [x1, e1] = random_instance(10, 12, 4, 2, 77);
  const auto [x2, e2] = random_instance(10, 12, 4, 2, 77);
  CHECK((x1.dense() - x2.dense()).norm() == 0.0);
  CHECK((e1.dense() - e2.dense()).norm() == 0.0);

  const auto [x3, e3] = random_instance(10, 12, 4, 2, 78);
  CHECK((x1.dense() - x3.dense()).norm() > 0.0);

  CHECK_THROWS_AS(random_instance(4, 4, 5, 0, 1), PreconditionError);
}

TEST_CASE("complex instances draw circular Gaussians") {
  InstanceOptions opts;
  opts.complex_values = true;
  const auto [x, e] = random_instance(16, 16, 8, 8, 9, opts);
  bool any_imag = false;
  for (Index k : x.support()) {
    if (x.dense()(k).imag() != 0.0) any_imag = true;
  }
  CHECK(any_imag);
}

TEST_CASE("sparse vectors reject malformed supports") {
  Vector vals(2);
  vals << Complex(1, 0), Complex(2, 0);
  CHECK_THROWS_AS(SparseVector(4, IndexSet{2, 1}, vals), PreconditionError);
  CHECK_THROWS_AS(SparseVector(4, IndexSet{1, 4}, vals), PreconditionError);
  CHECK_THROWS_AS(SparseVector(4, IndexSet{1}, vals), PreconditionError);
}

TEST_CASE("knowledge descriptor validates cardinalities") {
  KnowledgeDescriptor k;
  k.x_support = IndexSet{1, 2};
  k.nx_known = 3;
  CHECK_THROWS_AS(k.validate(), PreconditionError);
  k.nx_known = 2;
  CHECK_NOTHROW(k.validate());
}

TEST_CASE("sparse vector CSV round-trips") {
  const auto [x, e] = random_instance(9, 9, 4, 0, 123);
  std::stringstream buffer;
  save_sparse_vector(buffer, x);
  const SparseVector back = load_sparse_vector(buffer);
  CHECK(back.size() == x.size());
  CHECK(back.support() == x.support());
  CHECK((back.dense() - x.dense()).norm() == 0.0);
}
