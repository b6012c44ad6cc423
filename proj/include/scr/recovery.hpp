#pragma once

#include "scr/dictionary.hpp"
#include "scr/signals.hpp"
#include "scr/solvers.hpp"

#include <optional>

namespace scr {

enum class Method { bp, omp };

// What to do when a projected dictionary column is annihilated (the Haar
// failure mode): reject the whole construction, or keep the column with unit
// normalizer, report it, and let the solvers ignore it.
enum class DegeneratePolicy { error, zero_and_report };

// The Case II projection machinery: R_E = I - B_E B_E^+, the diagonal
// renormalizer Delta, and the modified dictionary R_E A Delta.
class ProjectedSystem {
 public:
  const IndexSet& known_support() const { return known_support_; }
  const RealVector& normalizer_diag() const { return normalizer_; }
  const Matrix& modified_dict() const { return modified_dict_; }
  const IndexSet& degenerate_columns() const { return degenerate_columns_; }

  // Applies R_E without materializing it.
  Vector apply_projector(const Vector& v) const;

  // Dense M x M projector, materialized on demand (intended for checks at
  // small sizes; costs O(M^2 ne)).
  Matrix projector() const;

  // Least-squares coefficients of w on the known error columns: B_E^+ w.
  Vector error_coefficients(const Vector& w) const;

  Index rows() const { return rows_; }

 private:
  friend ProjectedSystem build_projected_system(const Dictionary&,
                                                const Dictionary&,
                                                const IndexSet&,
                                                DegeneratePolicy);
  Index rows_ = 0;
  IndexSet known_support_;
  Matrix basis_;       // orthonormal basis Q of span(B_E), M x |E|
  Matrix error_cols_;  // B_E itself, M x |E|
  RealVector normalizer_;
  Matrix modified_dict_;
  IndexSet degenerate_columns_;
  bool canonical_basis_ = false;  // B_E is a set of standard unit vectors
  IndexSet canonical_rows_;
};

ProjectedSystem build_projected_system(
    const Dictionary& a, const Dictionary& b, const IndexSet& e_support,
    DegeneratePolicy policy = DegeneratePolicy::error);

struct RecoveryResult {
  SparseVector x;
  SparseVector e;
  double consistency_residual = 0.0;  // |A x + B e - z| / max(|z|, 1)
  bool converged = true;
  int solver_iterations = 0;
};

// Case I: both supports known; least squares on [A_X B_E].
RecoveryResult recover_case_i(const Dictionary& a, const Dictionary& b,
                              const Vector& z, const IndexSet& x_support,
                              const IndexSet& e_support);

// Case II: only the error (resp. signal) support known. OMP requires the
// sparsity of the unknown vector as its iteration count.
RecoveryResult recover_case_ii_e(const Dictionary& a, const Dictionary& b,
                                 const Vector& z, const IndexSet& e_support,
                                 Method method,
                                 std::optional<Index> nx_for_omp = {},
                                 const BasisPursuitOptions& bp_opts = {});
RecoveryResult recover_case_ii_x(const Dictionary& a, const Dictionary& b,
                                 const Vector& z, const IndexSet& x_support,
                                 Method method,
                                 std::optional<Index> ne_for_omp = {},
                                 const BasisPursuitOptions& bp_opts = {});

// Case III: only ne known; combinatorial search, toy scale.
struct CaseIiiResult {
  SparseVector x;
  SparseVector e;
  bool unique = false;
};
CaseIiiResult recover_case_iii(const Dictionary& a, const Dictionary& b,
                               const Vector& z, Index ne, Index max_nx);

// Case IV: nothing known; BP or OMP on the concatenation [A B].
RecoveryResult recover_case_iv(const Dictionary& a, const Dictionary& b,
                               const Vector& z, Method method,
                               std::optional<Index> k_for_omp = {},
                               const BasisPursuitOptions& bp_opts = {});

// Quantities from the projected-system analysis together with their
// analytical bounds; all three inequalities must hold.
struct AppendixBounds {
  double lambda_min = 0.0;       // smallest eigenvalue of B_E^H B_E
  double gersgorin_lb = 0.0;     // [1 - mu_b (ne-1)]+
  double min_colnorm_sq = 0.0;   // min_l |R_E a_l|^2
  double colnorm_lb = 0.0;       // 1 - ne mu_m^2 / C_b
  double eff_coherence = 0.0;    // mu(R_E A Delta)
  double eff_coherence_ub = 0.0; // (mu_a C_b + ne mu_m^2) / (C_b - ne mu_m^2)
  bool all_hold = false;
};

AppendixBounds check_appendix_bounds(const Dictionary& a, const Dictionary& b,
                                     const IndexSet& e_support);

}  // namespace scr
