#pragma once

#include "scr/dictionary.hpp"
#include "scr/signals.hpp"

namespace scr {

// f(u,v) = [1 - mu_a (u-1)]+ [1 - mu_b (v-1)]+ / mu_m^2.
// Throws if prof.mu_m == 0 (orthogonal-range pairs are a separable case the
// caller must handle upstream).
double f_bound(double u, double v, const CoherenceProfile& prof);

struct UncertaintyCheck {
  double lhs = 0.0;   // |P| |Q|
  double rhs = 0.0;   // concentration-weighted lower bound
  bool holds = false;
  bool equality = false;  // |lhs - rhs| <= 1e-9 relative
  double eps_p = 0.0;
  double eps_q = 0.0;
};

// Uncertainty relation for a pair (p, q) with A p = B q (the caller asserts
// the common-signal property, see verify_common_signal). A single zero vector
// is allowed and treated as perfectly concentrated; both zero is an error.
UncertaintyCheck check_uncertainty(const SparseVector& p,
                                   const SparseVector& q, const IndexSet& P,
                                   const IndexSet& Q,
                                   const CoherenceProfile& prof);

// |A p - B q|_2 <= tol * max(|A p|_2, 1).
bool verify_common_signal(const Dictionary& a, const SparseVector& p,
                          const Dictionary& b, const SparseVector& q,
                          double tol = 1e-10);

}  // namespace scr
