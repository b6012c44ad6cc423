#include "scr/uncertainty.hpp"

#include "scr/errors.hpp"

#include <algorithm>
#include <cmath>

namespace scr {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

double f_bound(double u, double v, const CoherenceProfile& prof) {
  if (prof.mu_m <= 0.0) {
    throw PreconditionError(
        "f undefined for mu_m = 0 (orthogonal ranges are a separable case)");
  }
  const double left = positive_part(1.0 - prof.mu_a * (u - 1.0));
  const double right = positive_part(1.0 - prof.mu_b * (v - 1.0));
  return left * right / (prof.mu_m * prof.mu_m);
}

UncertaintyCheck check_uncertainty(const SparseVector& p,
                                   const SparseVector& q, const IndexSet& P,
                                   const IndexSet& Q,
                                   const CoherenceProfile& prof) {
  if (prof.mu_m <= 0.0) {
    throw PreconditionError("uncertainty relation requires mu_m > 0");
  }
  const bool p_zero = p.sparsity() == 0;
  const bool q_zero = q.sparsity() == 0;
  if (p_zero && q_zero) {
    throw PreconditionError(
        "uncertainty relation excludes the trivial case p = q = 0");
  }
  UncertaintyCheck out;
  // A zero vector is vacuously concentrated to any set.
  out.eps_p = p_zero ? 0.0 : concentration(p, P);
  out.eps_q = q_zero ? 0.0 : concentration(q, Q);
  out.lhs = static_cast<double>(P.size()) * static_cast<double>(Q.size());
  const double left = positive_part((1.0 + prof.mu_a) * (1.0 - out.eps_p) -
                                    static_cast<double>(P.size()) * prof.mu_a);
  const double right = positive_part((1.0 + prof.mu_b) * (1.0 - out.eps_q) -
                                     static_cast<double>(Q.size()) * prof.mu_b);
  out.rhs = left * right / (prof.mu_m * prof.mu_m);
  out.holds = out.lhs >= out.rhs - 1e-9;
  const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), 1.0});
  out.equality = std::abs(out.lhs - out.rhs) <= 1e-9 * scale;
  return out;
}

bool verify_common_signal(const Dictionary& a, const SparseVector& p,
                          const Dictionary& b, const SparseVector& q,
                          double tol) {
  if (a.rows() != b.rows()) {
    throw DimensionError("verify_common_signal: row dimensions differ");
  }
  if (a.cols() != p.size() || b.cols() != q.size()) {
    throw DimensionError("verify_common_signal: coefficient lengths differ");
  }
  const Vector sa = a.entries() * p.dense();
  const Vector sb = b.entries() * q.dense();
  return (sa - sb).norm() <= tol * std::max(sa.norm(), 1.0);
}

}  // namespace scr
