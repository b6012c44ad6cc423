#pragma once

#include "scr/dictionary.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace scr {

// Dense coefficient vector with an explicit support set. Every entry outside
// the support is exactly zero.
class SparseVector {
 public:
  explicit SparseVector(Index n) : values_(Vector::Zero(n)) {}
  SparseVector(Index n, IndexSet support, const Vector& values_on_support);

  // Builds the support from the nonzero pattern of a dense vector.
  static SparseVector from_dense(const Vector& dense, double tol = 0.0);

  const Vector& dense() const { return values_; }
  const IndexSet& support() const { return support_; }
  Index size() const { return values_.size(); }
  Index sparsity() const { return static_cast<Index>(support_.size()); }

 private:
  Vector values_;
  IndexSet support_;
};

// Which side information a recovery problem comes with (Cases I-IV).
struct KnowledgeDescriptor {
  std::optional<IndexSet> x_support;
  std::optional<IndexSet> e_support;
  std::optional<Index> nx_known;
  std::optional<Index> ne_known;

  void validate() const;  // support cardinality must match a present count
};

// Equidistant unit spikes with spacing t; t must divide m.
SparseVector comb(Index m, Index t);

// epsilon = 1 - |P_S r|_1 / |r|_1. Zero iff supp(r) is contained in S.
double concentration(const Vector& r, const IndexSet& s);
double concentration(const SparseVector& r, const IndexSet& s);

struct InstanceOptions {
  bool complex_values = false;  // default real Gaussian nonzeros
};

// Supports drawn uniformly at random over all subsets of the requested
// cardinality, nonzero entries i.i.d. Gaussian. Deterministic per seed.
std::pair<SparseVector, SparseVector> random_instance(
    Index na, Index nb, Index nx, Index ne, std::uint64_t seed,
    const InstanceOptions& opts = {});

}  // namespace scr
