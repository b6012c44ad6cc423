#pragma once

#include "scr/dictionary.hpp"

namespace scr {

struct SolveReport {
  Vector solution;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Least-squares solution of Dsub s = z. Throws SingularSystemError when Dsub
// is numerically rank-deficient (smallest singular value <= 1e-10 * largest).
SolveReport pinv_solve(const Matrix& dsub, const Vector& z);

// Orthogonal matching pursuit with a predetermined number of iterations.
// Stops early once the residual falls below early_stop_rel * |z|. Correlation
// ties within 1e-12 resolve to the lowest column index.
SolveReport omp(const Matrix& dict, const Vector& z, Index k,
                double early_stop_rel = 1e-12);
SolveReport omp(const Dictionary& dict, const Vector& z, Index k,
                double early_stop_rel = 1e-12);

struct BasisPursuitOptions {
  double feas_tol = 1e-9;   // relative feasibility of the returned solution
  double opt_tol = 1e-7;    // relative duality-gap certificate
  int max_iterations = 100000;
  double rho = 1.0;         // initial ADMM penalty (adapted internally)
};

// Equality-constrained l1 minimization (complex moduli). The returned
// solution is certified by a duality gap <= opt_tol relative; throws
// InfeasibleError when z is not in the range of the dictionary within
// feas_tol. Non-convergence within the iteration cap reports converged=false.
SolveReport basis_pursuit(const Matrix& dict, const Vector& z,
                          const BasisPursuitOptions& opts = {});
SolveReport basis_pursuit(const Dictionary& dict, const Vector& z,
                          const BasisPursuitOptions& opts = {});

struct P0Result {
  Vector solution;
  Index sparsity = 0;
  bool unique = false;
};

// Exhaustive sparsest-representation search over supports of size 0..max_k.
// Guards the combinatorial budget (sum of C(N,k) <= 1e6).
P0Result brute_force_p0(const Matrix& dict, const Vector& z, Index max_k);

struct P0NeResult {
  Vector solution_x;
  IndexSet error_support;
  Index sparsity = 0;
  bool unique = false;
};

// Sparsest x with A x in {z} + span(B_E') over all error supports |E'| <= ne.
P0NeResult brute_force_p0_ne(const Dictionary& a, const Dictionary& b,
                             const Vector& z, Index ne, Index max_nx);

}  // namespace scr
