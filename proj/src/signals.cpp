#include "scr/signals.hpp"

#include "scr/errors.hpp"
#include "scr/rng.hpp"

#include <algorithm>
#include <cmath>

namespace scr {

SparseVector::SparseVector(Index n, IndexSet support,
                           const Vector& values_on_support)
    : values_(Vector::Zero(n)), support_(std::move(support)) {
  if (static_cast<Index>(support_.size()) != values_on_support.size()) {
    throw PreconditionError("support/value length mismatch");
  }
  Index prev = -1;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const Index k = support_[i];
    if (k < 0 || k >= n) {
      throw PreconditionError("support index out of range");
    }
    if (k <= prev) {
      throw PreconditionError("support must be sorted and duplicate-free");
    }
    prev = k;
    values_(k) = values_on_support(static_cast<Index>(i));
  }
  // Entries that came in as exact zeros leave the support.
  IndexSet pruned;
  pruned.reserve(support_.size());
  for (Index k : support_) {
    if (values_(k) != Complex(0.0, 0.0)) pruned.push_back(k);
  }
  support_ = std::move(pruned);
}

SparseVector SparseVector::from_dense(const Vector& dense, double tol) {
  SparseVector out(dense.size());
  out.values_ = dense;
  for (Index k = 0; k < dense.size(); ++k) {
    if (std::abs(dense(k)) > tol) {
      out.support_.push_back(k);
    } else {
      out.values_(k) = Complex(0.0, 0.0);
    }
  }
  return out;
}

void KnowledgeDescriptor::validate() const {
  if (x_support && nx_known &&
      static_cast<Index>(x_support->size()) != *nx_known) {
    throw PreconditionError("x support cardinality disagrees with nx");
  }
  if (e_support && ne_known &&
      static_cast<Index>(e_support->size()) != *ne_known) {
    throw PreconditionError("e support cardinality disagrees with ne");
  }
}

SparseVector comb(Index m, Index t) {
  if (m < 1 || t < 1 || m % t != 0) {
    throw PreconditionError("comb spacing must divide the dimension");
  }
  IndexSet support;
  Vector ones(m / t);
  for (Index k = 0; k < m; k += t) support.push_back(k);
  ones.setOnes();
  return SparseVector(m, std::move(support), ones);
}

double concentration(const Vector& r, const IndexSet& s) {
  const double total = r.cwiseAbs().sum();
  if (total == 0.0) {
    throw PreconditionError("concentration undefined for the zero vector");
  }
  double on_set = 0.0;
  for (Index k : s) {
    if (k < 0 || k >= r.size()) {
      throw PreconditionError("concentration set index out of range");
    }
    on_set += std::abs(r(k));
  }
  const double eps = 1.0 - on_set / total;
  return std::clamp(eps, 0.0, 1.0);
}

double concentration(const SparseVector& r, const IndexSet& s) {
  return concentration(r.dense(), s);
}

namespace {

IndexSet random_support(Index n, Index k, RandomStream& rng) {
  // Partial Fisher-Yates over an index pool.
  std::vector<Index> pool(n);
  for (Index i = 0; i < n; ++i) pool[i] = i;
  for (Index i = 0; i < k; ++i) {
    const Index j =
        i + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  IndexSet support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  return support;
}

SparseVector random_sparse(Index n, Index k, RandomStream& rng,
                           bool complex_values) {
  IndexSet support = random_support(n, k, rng);
  Vector values(k);
  for (Index i = 0; i < k; ++i) {
    if (complex_values) {
      // Circularly symmetric, unit variance.
      values(i) = Complex(rng.next_gaussian(), rng.next_gaussian()) /
                  std::sqrt(2.0);
    } else {
      values(i) = Complex(rng.next_gaussian(), 0.0);
    }
  }
  return SparseVector(n, std::move(support), values);
}

}  // namespace

std::pair<SparseVector, SparseVector> random_instance(
    Index na, Index nb, Index nx, Index ne, std::uint64_t seed,
    const InstanceOptions& opts) {
  if (nx < 0 || nx > na) {
    throw PreconditionError("nx must lie in [0, Na]");
  }
  if (ne < 0 || ne > nb) {
    throw PreconditionError("ne must lie in [0, Nb]");
  }
  RandomStream rng(derive_seed(seed, 0x1a57, static_cast<std::uint64_t>(nx),
                               static_cast<std::uint64_t>(ne)));
  SparseVector x = random_sparse(na, nx, rng, opts.complex_values);
  SparseVector e = random_sparse(nb, ne, rng, opts.complex_values);
  return {std::move(x), std::move(e)};
}

}  // namespace scr
