#include "scr/recovery.hpp"

#include "scr/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace scr {

namespace {

double consistency(const Dictionary& a, const Dictionary& b, const Vector& z,
                   const Vector& x, const Vector& e) {
  const Vector reproduced = a.entries() * x + b.entries() * e;
  return (reproduced - z).norm() / std::max(z.norm(), 1.0);
}

SparseVector sparse_from_support(Index n, const IndexSet& support,
                                 const Vector& values) {
  return SparseVector(n, support, values);
}

}  // namespace

Vector ProjectedSystem::apply_projector(const Vector& v) const {
  if (v.size() != rows_) {
    throw DimensionError("apply_projector: vector length mismatch");
  }
  if (known_support_.empty()) return v;
  if (canonical_basis_) {
    Vector out = v;
    for (Index r : canonical_rows_) out(r) = Complex(0.0, 0.0);
    return out;
  }
  return v - basis_ * (basis_.adjoint() * v);
}

Matrix ProjectedSystem::projector() const {
  Matrix p = Matrix::Identity(rows_, rows_);
  if (known_support_.empty()) return p;
  if (canonical_basis_) {
    for (Index r : canonical_rows_) p(r, r) = Complex(0.0, 0.0);
    return p;
  }
  p.noalias() -= basis_ * basis_.adjoint();
  return p;
}

Vector ProjectedSystem::error_coefficients(const Vector& w) const {
  if (known_support_.empty()) return Vector(0);
  if (canonical_basis_) return error_cols_.adjoint() * w;
  return error_cols_.colPivHouseholderQr().solve(w);
}

ProjectedSystem build_projected_system(const Dictionary& a,
                                       const Dictionary& b,
                                       const IndexSet& e_support,
                                       DegeneratePolicy policy) {
  if (a.rows() != b.rows()) {
    throw DimensionError("projected system: dictionaries have different "
                         "measurement dimensions");
  }
  ProjectedSystem ps;
  ps.rows_ = a.rows();
  ps.known_support_ = e_support;
  const Index ne = static_cast<Index>(e_support.size());

  if (ne == 0) {
    ps.normalizer_ = RealVector::Ones(a.cols());
    ps.modified_dict_ = a.entries();
    return ps;
  }

  ps.error_cols_ = b.columns(e_support);

  // Standard-unit-vector noise columns (the identity dictionary of the
  // inpainting setup) admit a projection that just zeroes rows.
  bool canonical = true;
  IndexSet canonical_rows;
  for (Index j = 0; j < ne && canonical; ++j) {
    Index hot = -1;
    for (Index i = 0; i < ps.rows_; ++i) {
      const double mag = std::abs(ps.error_cols_(i, j));
      if (mag > 1e-15) {
        if (hot >= 0 || std::abs(ps.error_cols_(i, j) - Complex(1.0, 0.0)) >
                            1e-14) {
          hot = -2;
          break;
        }
        hot = i;
      }
    }
    if (hot < 0) {
      canonical = false;
    } else {
      canonical_rows.push_back(hot);
    }
  }
  if (canonical) {
    std::sort(canonical_rows.begin(), canonical_rows.end());
    if (std::adjacent_find(canonical_rows.begin(), canonical_rows.end()) !=
        canonical_rows.end()) {
      throw DependentColumnsError(
          "projected system: repeated error columns are linearly dependent");
    }
    ps.canonical_basis_ = true;
    ps.canonical_rows_ = std::move(canonical_rows);
    ps.basis_ = ps.error_cols_;
    ps.modified_dict_ = a.entries();
    for (Index r : ps.canonical_rows_) ps.modified_dict_.row(r).setZero();
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(ps.error_cols_);
    if (qr.rank() < ne) {
      throw DependentColumnsError(
          "projected system: the known error columns are linearly dependent");
    }
    ps.basis_ = qr.householderQ() * Matrix::Identity(ps.rows_, ne);
    ps.modified_dict_ =
        a.entries() - ps.basis_ * (ps.basis_.adjoint() * a.entries());
  }

  ps.normalizer_ = RealVector::Ones(a.cols());
  for (Index l = 0; l < a.cols(); ++l) {
    const double norm = ps.modified_dict_.col(l).norm();
    if (norm <= 1e-10) {
      if (policy == DegeneratePolicy::error) {
        throw DegenerateColumnError(
            "projected system: column " + std::to_string(l) +
                " of the signal dictionary is annihilated by the projector",
            static_cast<long>(l));
      }
      ps.degenerate_columns_.push_back(l);
      // Left unnormalized; the solvers never select a (near-)zero column.
    } else {
      ps.normalizer_(l) = 1.0 / norm;
      ps.modified_dict_.col(l) *= ps.normalizer_(l);
    }
  }
  return ps;
}

RecoveryResult recover_case_i(const Dictionary& a, const Dictionary& b,
                              const Vector& z, const IndexSet& x_support,
                              const IndexSet& e_support) {
  if (a.rows() != b.rows() || a.rows() != z.size()) {
    throw DimensionError("recover_case_i: dimensions differ");
  }
  const Index nx = static_cast<Index>(x_support.size());
  const Index ne = static_cast<Index>(e_support.size());
  Matrix stacked(a.rows(), nx + ne);
  if (nx > 0) stacked.leftCols(nx) = a.columns(x_support);
  if (ne > 0) stacked.rightCols(ne) = b.columns(e_support);

  SolveReport ls = pinv_solve(stacked, z);

  RecoveryResult out{SparseVector(a.cols()), SparseVector(b.cols())};
  out.x = sparse_from_support(a.cols(), x_support, ls.solution.head(nx));
  out.e = sparse_from_support(b.cols(), e_support, ls.solution.tail(ne));
  out.consistency_residual =
      consistency(a, b, z, out.x.dense(), out.e.dense());
  out.converged = ls.converged;
  out.solver_iterations = ls.iterations;
  return out;
}

namespace {

// Shared core of the two Case II directions: project out the known columns
// of `noise`, recover the unknown coefficients of `signal`.
RecoveryResult case_ii_core(const Dictionary& signal, const Dictionary& noise,
                            const Vector& z, const IndexSet& known,
                            Method method, std::optional<Index> k_for_omp,
                            const BasisPursuitOptions& bp_opts) {
  const ProjectedSystem ps = build_projected_system(signal, noise, known);
  const Vector z_hat = ps.apply_projector(z);

  SolveReport report;
  if (method == Method::omp) {
    if (!k_for_omp) {
      throw PreconditionError(
          "case II with OMP needs the sparsity of the unknown vector");
    }
    report = omp(ps.modified_dict(), z_hat, *k_for_omp);
  } else {
    report = basis_pursuit(ps.modified_dict(), z_hat, bp_opts);
  }

  // Undo the normalization: coefficients of the original dictionary.
  Vector coeffs = report.solution;
  for (Index l = 0; l < coeffs.size(); ++l) {
    coeffs(l) *= ps.normalizer_diag()(l);
  }
  SparseVector recovered = SparseVector::from_dense(coeffs);

  // Error coefficients from the known columns.
  const Vector residual_signal = z - signal.entries() * coeffs;
  const Vector noise_coeffs = ps.error_coefficients(residual_signal);
  SparseVector noise_vec =
      sparse_from_support(noise.cols(), known, noise_coeffs);

  RecoveryResult out{std::move(recovered), std::move(noise_vec)};
  out.converged = report.converged;
  out.solver_iterations = report.iterations;
  return out;
}

}  // namespace

RecoveryResult recover_case_ii_e(const Dictionary& a, const Dictionary& b,
                                 const Vector& z, const IndexSet& e_support,
                                 Method method,
                                 std::optional<Index> nx_for_omp,
                                 const BasisPursuitOptions& bp_opts) {
  if (a.rows() != b.rows() || a.rows() != z.size()) {
    throw DimensionError("recover_case_ii_e: dimensions differ");
  }
  RecoveryResult out =
      case_ii_core(a, b, z, e_support, method, nx_for_omp, bp_opts);
  out.consistency_residual =
      consistency(a, b, z, out.x.dense(), out.e.dense());
  return out;
}

RecoveryResult recover_case_ii_x(const Dictionary& a, const Dictionary& b,
                                 const Vector& z, const IndexSet& x_support,
                                 Method method,
                                 std::optional<Index> ne_for_omp,
                                 const BasisPursuitOptions& bp_opts) {
  if (a.rows() != b.rows() || a.rows() != z.size()) {
    throw DimensionError("recover_case_ii_x: dimensions differ");
  }
  RecoveryResult swapped =
      case_ii_core(b, a, z, x_support, method, ne_for_omp, bp_opts);
  RecoveryResult out{std::move(swapped.e), std::move(swapped.x)};
  out.converged = swapped.converged;
  out.solver_iterations = swapped.solver_iterations;
  out.consistency_residual =
      consistency(a, b, z, out.x.dense(), out.e.dense());
  return out;
}

CaseIiiResult recover_case_iii(const Dictionary& a, const Dictionary& b,
                               const Vector& z, Index ne, Index max_nx) {
  if (a.rows() != b.rows() || a.rows() != z.size()) {
    throw DimensionError("recover_case_iii: dimensions differ");
  }
  const P0NeResult search = brute_force_p0_ne(a, b, z, ne, max_nx);

  CaseIiiResult out{SparseVector(a.cols()), SparseVector(b.cols()),
                    search.unique};
  out.x = SparseVector::from_dense(search.solution_x);
  if (!search.error_support.empty()) {
    const Matrix be = b.columns(search.error_support);
    const Vector rhs = z - a.entries() * search.solution_x;
    const Vector coeffs = be.colPivHouseholderQr().solve(rhs);
    out.e = sparse_from_support(b.cols(), search.error_support, coeffs);
  }
  return out;
}

RecoveryResult recover_case_iv(const Dictionary& a, const Dictionary& b,
                               const Vector& z, Method method,
                               std::optional<Index> k_for_omp,
                               const BasisPursuitOptions& bp_opts) {
  if (a.rows() != b.rows() || a.rows() != z.size()) {
    throw DimensionError("recover_case_iv: dimensions differ");
  }
  Matrix d(a.rows(), a.cols() + b.cols());
  d.leftCols(a.cols()) = a.entries();
  d.rightCols(b.cols()) = b.entries();

  SolveReport report;
  if (method == Method::omp) {
    if (!k_for_omp) {
      throw PreconditionError("case IV with OMP needs nx + ne as the "
                              "iteration count");
    }
    report = omp(d, z, *k_for_omp);
  } else {
    report = basis_pursuit(d, z, bp_opts);
  }

  RecoveryResult out{
      SparseVector::from_dense(report.solution.head(a.cols())),
      SparseVector::from_dense(report.solution.tail(b.cols()))};
  out.converged = report.converged;
  out.solver_iterations = report.iterations;
  out.consistency_residual =
      consistency(a, b, z, out.x.dense(), out.e.dense());
  return out;
}

AppendixBounds check_appendix_bounds(const Dictionary& a, const Dictionary& b,
                                     const IndexSet& e_support) {
  if (a.rows() != b.rows()) {
    throw DimensionError("check_appendix_bounds: dimensions differ");
  }
  if (e_support.empty()) {
    throw PreconditionError("check_appendix_bounds: e_support must be "
                            "non-empty");
  }
  const Index ne = static_cast<Index>(e_support.size());
  const CoherenceProfile prof = profile(a, b);

  AppendixBounds out;
  const Matrix be = b.columns(e_support);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(be.adjoint() * be);
  out.lambda_min = eig.eigenvalues().minCoeff();
  out.gersgorin_lb =
      std::max(0.0, 1.0 - prof.mu_b * static_cast<double>(ne - 1));

  const ProjectedSystem ps =
      build_projected_system(a, b, e_support, DegeneratePolicy::zero_and_report);
  double min_sq = std::numeric_limits<double>::infinity();
  Matrix normalized = ps.modified_dict();
  for (Index l = 0; l < a.cols(); ++l) {
    // Undo the normalizer to recover the raw projected column norm.
    const double norm = 1.0 / ps.normalizer_diag()(l) *
                        ps.modified_dict().col(l).norm();
    min_sq = std::min(min_sq, norm * norm);
  }
  out.min_colnorm_sq = min_sq;

  const double cb = out.gersgorin_lb;
  const double load = static_cast<double>(ne) * prof.mu_m * prof.mu_m;
  out.colnorm_lb = cb > 0.0
                       ? 1.0 - load / cb
                       : -std::numeric_limits<double>::infinity();

  // Effective coherence over the normalized projected columns. Degenerate
  // columns (kept unnormalized by the tolerant policy) are excluded; the
  // bound is vacuous in that regime anyway.
  double mu_eff = 0.0;
  const IndexSet& degenerate = ps.degenerate_columns();
  std::vector<bool> is_degenerate(static_cast<std::size_t>(a.cols()), false);
  for (Index l : degenerate) is_degenerate[static_cast<std::size_t>(l)] = true;
  const Matrix gram = normalized.adjoint() * normalized;
  for (Index i = 0; i < a.cols(); ++i) {
    if (is_degenerate[static_cast<std::size_t>(i)]) continue;
    for (Index j = i + 1; j < a.cols(); ++j) {
      if (is_degenerate[static_cast<std::size_t>(j)]) continue;
      mu_eff = std::max(mu_eff, std::abs(gram(i, j)));
    }
  }
  out.eff_coherence = mu_eff;
  const double denom = cb - load;
  out.eff_coherence_ub = denom > 0.0
                             ? (prof.mu_a * cb + load) / denom
                             : std::numeric_limits<double>::infinity();

  const double tol = 1e-10;
  out.all_hold = out.lambda_min >= out.gersgorin_lb - tol &&
                 out.min_colnorm_sq >= out.colnorm_lb - tol &&
                 out.eff_coherence <= out.eff_coherence_ub + tol;
  return out;
}

}  // namespace scr
