#include "scr/solvers.hpp"

#include "scr/errors.hpp"
#include "scr/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace scr {

namespace {

constexpr double kRankTolerance = 1e-10;

Complex unit_sign(Complex v) {
  const double m = std::abs(v);
  return m > 0.0 ? v / m : Complex(1.0, 0.0);
}

double binomial_guarded(Index n, Index k, double cap) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (Index i = 0; i < k; ++i) {
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (c > cap) return cap + 1.0;
  }
  return c;
}

// Lexicographic k-combination enumerator over {0..n-1}.
class Combinations {
 public:
  Combinations(Index n, Index k) : n_(n), k_(k) {
    indices_.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) indices_[static_cast<std::size_t>(i)] = i;
    done_ = k > n;
  }

  bool done() const { return done_; }
  const IndexSet& current() const { return indices_; }

  void advance() {
    if (k_ == 0) {
      done_ = true;
      return;
    }
    Index i = k_ - 1;
    while (i >= 0 && indices_[static_cast<std::size_t>(i)] == n_ - k_ + i) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++indices_[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k_; ++j) {
      indices_[static_cast<std::size_t>(j)] =
          indices_[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

 private:
  Index n_, k_;
  IndexSet indices_;
  bool done_ = false;
};

Matrix select_columns(const Matrix& d, const IndexSet& s) {
  Matrix out(d.rows(), static_cast<Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.col(static_cast<Index>(i)) = d.col(s[i]);
  }
  return out;
}

}  // namespace

SolveReport pinv_solve(const Matrix& dsub, const Vector& z) {
  if (dsub.rows() != z.size()) {
    throw DimensionError("pinv_solve: matrix/vector dimensions differ");
  }
  SolveReport report;
  if (dsub.cols() == 0) {
    report.solution = Vector(0);
    report.residual_norm = z.norm();
    report.converged = true;
    return report;
  }
  Eigen::BDCSVD<Matrix> svd(dsub,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  if (largest <= 0.0 || sv(sv.size() - 1) <= kRankTolerance * largest) {
    throw SingularSystemError(
        "pinv_solve: matrix is numerically rank-deficient");
  }
  report.solution = svd.solve(z);
  report.residual_norm = (dsub * report.solution - z).norm();
  report.iterations = 1;
  report.converged = true;
  return report;
}

SolveReport omp(const Matrix& dict, const Vector& z, Index k,
                double early_stop_rel) {
  if (dict.rows() != z.size()) {
    throw DimensionError("omp: dictionary/measurement dimensions differ");
  }
  if (k < 0 || k > std::min(dict.rows(), dict.cols())) {
    throw PreconditionError("omp: iteration count must satisfy 0 <= k <= "
                            "min(rows, cols)");
  }
  SolveReport report;
  report.solution = Vector::Zero(dict.cols());
  const double z_norm = z.norm();
  report.residual_norm = z_norm;
  report.converged = z_norm <= 0.0;
  if (z_norm <= 0.0 || k == 0) {
    report.converged = report.residual_norm <= early_stop_rel * z_norm;
    if (z_norm <= 0.0) report.converged = true;
    return report;
  }

  Vector residual = z;
  IndexSet support;
  Vector coeffs;
  for (Index t = 0; t < k; ++t) {
    const Vector corr = dict.adjoint() * residual;
    double best = 0.0;
    for (Index i = 0; i < corr.size(); ++i) {
      best = std::max(best, std::abs(corr(i)));
    }
    if (best <= 1e-14 * z_norm) break;  // residual orthogonal to the range
    Index pick = -1;
    for (Index i = 0; i < corr.size(); ++i) {
      if (std::abs(corr(i)) >= best - 1e-12) {
        pick = i;
        break;
      }
    }
    support.push_back(pick);
    std::sort(support.begin(), support.end());

    const Matrix ds = select_columns(dict, support);
    coeffs = ds.householderQr().solve(z);
    residual = z - ds * coeffs;
    report.iterations = static_cast<int>(t) + 1;
    if (residual.norm() <= early_stop_rel * z_norm) break;
  }

  for (std::size_t i = 0; i < support.size(); ++i) {
    report.solution(support[i]) = coeffs(static_cast<Index>(i));
  }
  report.residual_norm = residual.norm();
  report.converged = report.residual_norm <= early_stop_rel * z_norm;
  return report;
}

SolveReport omp(const Dictionary& dict, const Vector& z, Index k,
                double early_stop_rel) {
  return omp(dict.entries(), z, k, early_stop_rel);
}

// ---------------------------------------------------------------------------
// Basis pursuit

namespace {

// Applies the pseudo-inverse of the (row-compressed) dictionary. Three modes:
// tight frames (D D^H = alpha I), full-row-rank via Cholesky of D D^H, and a
// rank-revealing complete orthogonal decomposition as the general fallback.
class AffineProjector {
 public:
  AffineProjector(const Matrix& d, double alpha_tol = 1e-10) : d_(d) {
    // Tight-frame probe: a few random vectors expose D D^H = alpha I.
    RandomStream rng(0x7ea6u);
    const Index m = d_.rows();
    bool tight = true;
    double alpha = 0.0;
    for (int probe = 0; probe < 3 && tight; ++probe) {
      Vector v(m);
      for (Index i = 0; i < m; ++i) {
        v(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
      }
      const Vector w = d_ * (d_.adjoint() * v);
      const double vv = v.squaredNorm();
      const double est = (v.dot(w)).real() / vv;
      if (probe == 0) alpha = est;
      if (alpha <= 0.0 || (w - alpha * v).norm() >
                              alpha_tol * std::max(1.0, alpha) * v.norm()) {
        tight = false;
      }
    }
    if (tight) {
      mode_ = Mode::tight;
      alpha_ = alpha;
      return;
    }
    const Matrix gram = d_ * d_.adjoint();
    llt_.compute(gram);
    if (llt_.info() == Eigen::Success) {
      const auto diag = llt_.matrixLLT().diagonal().real();
      const double dmin = diag.minCoeff();
      const double dmax = diag.maxCoeff();
      if (dmin > 1e-7 * dmax) {
        mode_ = Mode::cholesky;
        return;
      }
    }
    mode_ = Mode::cod;
    cod_.compute(d_);
  }

  // x = argmin |x - v| subject to D x = b - requires consistent b.
  Vector project(const Vector& v, const Vector& b) const {
    return v - pinv_apply(d_ * v - b);
  }

  // D^+ w.
  Vector pinv_apply(const Vector& w) const {
    switch (mode_) {
      case Mode::tight:
        return d_.adjoint() * (w / alpha_);
      case Mode::cholesky:
        return d_.adjoint() * llt_.solve(w);
      case Mode::cod:
        return cod_.solve(w);
    }
    return Vector();
  }

  // Least-squares y minimizing |D^H y - c| (used for the dual certificate).
  // Exact in the tight and Cholesky modes; unavailable in COD mode.
  bool dual_solve(const Vector& c, Vector& y) const {
    switch (mode_) {
      case Mode::tight:
        y = (d_ * c) / alpha_;
        return true;
      case Mode::cholesky:
        y = llt_.solve(d_ * c);
        return true;
      case Mode::cod:
        return false;
    }
    return false;
  }

 private:
  enum class Mode { tight, cholesky, cod };
  const Matrix& d_;
  Mode mode_ = Mode::cod;
  double alpha_ = 1.0;
  Eigen::LLT<Matrix> llt_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
};

Vector soft_threshold(const Vector& v, double kappa) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    out(i) = m > kappa ? v(i) * ((m - kappa) / m) : Complex(0.0, 0.0);
  }
  return out;
}

struct PolishOutcome {
  bool certified = false;
  Vector solution;
  double residual = 0.0;
};

// Least-squares refit on a candidate support plus a KKT check: the minimum
// norm dual y with D_S^H y = sign(x_S) must satisfy |d_j^H y| <= 1 off the
// support. Certifies optimality to machine precision when it fires.
PolishOutcome try_polish(const Matrix& d, const Vector& b,
                         const IndexSet& support, double feas_tol,
                         double b_scale) {
  PolishOutcome out;
  if (support.empty() ||
      static_cast<Index>(support.size()) > d.rows()) {
    return out;
  }
  const Matrix ds = select_columns(d, support);
  Eigen::ColPivHouseholderQR<Matrix> qr(ds);
  if (qr.rank() < ds.cols()) return out;
  const Vector xs = qr.solve(b);
  const double res = (ds * xs - b).norm();
  if (res > feas_tol * b_scale) return out;

  Vector signs(xs.size());
  for (Index i = 0; i < xs.size(); ++i) signs(i) = unit_sign(xs(i));
  // Minimum-norm solution of D_S^H y = signs via the thin QR of D_S.
  Eigen::HouseholderQR<Matrix> thin(ds);
  Matrix r = thin.matrixQR()
                 .topRows(ds.cols())
                 .template triangularView<Eigen::Upper>();
  Vector t = r.adjoint().triangularView<Eigen::Lower>().solve(signs);
  Vector padded_t = Vector::Zero(d.rows());
  padded_t.head(ds.cols()) = t;
  Vector y = thin.householderQ() * padded_t;
  const Vector corr = d.adjoint() * y;
  double off_max = 0.0;
  std::size_t si = 0;
  for (Index j = 0; j < d.cols(); ++j) {
    if (si < support.size() && support[si] == j) {
      ++si;
      continue;
    }
    off_max = std::max(off_max, std::abs(corr(j)));
  }
  if (off_max > 1.0 + 1e-7) return out;

  out.certified = true;
  out.residual = res;
  out.solution = Vector::Zero(d.cols());
  for (std::size_t i = 0; i < support.size(); ++i) {
    out.solution(support[i]) = xs(static_cast<Index>(i));
  }
  return out;
}

IndexSet support_above(const Vector& v, double threshold) {
  IndexSet s;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > threshold) s.push_back(i);
  }
  return s;
}

}  // namespace

SolveReport basis_pursuit(const Matrix& dict, const Vector& z,
                          const BasisPursuitOptions& opts) {
  if (dict.rows() != z.size()) {
    throw DimensionError("basis_pursuit: dimensions differ");
  }
  SolveReport report;
  report.solution = Vector::Zero(dict.cols());
  const double z_scale = std::max(z.norm(), 1.0);
  if (z.norm() == 0.0) {
    report.converged = true;
    return report;
  }

  // Drop numerically zero rows (they arise from projected dictionaries); a
  // nonzero measurement on a zero row is infeasible outright.
  std::vector<Index> kept;
  double max_row = 0.0;
  for (Index i = 0; i < dict.rows(); ++i) {
    max_row = std::max(max_row, dict.row(i).norm());
  }
  for (Index i = 0; i < dict.rows(); ++i) {
    if (dict.row(i).norm() > 1e-14 * std::max(max_row, 1.0)) {
      kept.push_back(i);
    } else if (std::abs(z(i)) > opts.feas_tol * z_scale) {
      throw InfeasibleError("basis_pursuit: measurement outside the range of "
                            "the dictionary (zero row, nonzero entry)");
    }
  }
  Matrix d;
  Vector b;
  if (static_cast<Index>(kept.size()) == dict.rows()) {
    d = dict;
    b = z;
  } else {
    d.resize(static_cast<Index>(kept.size()), dict.cols());
    b.resize(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      d.row(static_cast<Index>(i)) = dict.row(kept[i]);
      b(static_cast<Index>(i)) = z(kept[i]);
    }
  }

  const AffineProjector projector(d);
  Vector x_feas = projector.pinv_apply(b);
  if ((d * x_feas - b).norm() > opts.feas_tol * z_scale) {
    throw InfeasibleError(
        "basis_pursuit: measurement outside the range of the dictionary");
  }

  double rho = opts.rho;
  const double relax = 1.6;
  Vector w = x_feas;
  Vector u = Vector::Zero(d.cols());
  Vector x = x_feas;

  const auto finalize = [&](const Vector& solution, double residual,
                            bool converged, int iterations) {
    report.solution = solution;
    report.residual_norm = residual;
    report.converged = converged;
    report.iterations = iterations;
    return report;
  };

  // Degenerate but common: a 1-column dictionary, or b = 0, converge in one
  // projection; the loop below handles them anyway.
  int iter = 0;
  double primal_value = x_feas.cwiseAbs().sum();
  for (iter = 1; iter <= opts.max_iterations; ++iter) {
    x = projector.project(w - u, b);
    const Vector x_relaxed = relax * x + (1.0 - relax) * w;
    const Vector w_old = w;
    w = soft_threshold(x_relaxed + u, 1.0 / rho);
    u += x_relaxed - w;

    const double r_norm = (x - w).norm();
    const double s_norm = rho * (w - w_old).norm();

    if (iter % 25 == 0) {
      if (r_norm > 10.0 * s_norm) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s_norm > 10.0 * r_norm) {
        rho /= 2.0;
        u *= 2.0;
      }
    }

    const bool check_now = iter % 50 == 0 || iter == opts.max_iterations;
    if (!check_now) continue;

    primal_value = x.cwiseAbs().sum();

    // Support polish: certified exact optimum if the KKT conditions hold.
    const double w_max = w.cwiseAbs().maxCoeff();
    if (w_max > 0.0 && iter >= 100) {
      for (double frac : {1e-3, 1e-6, 1e-9}) {
        const IndexSet s = support_above(w, frac * w_max);
        PolishOutcome polish = try_polish(d, b, s, opts.feas_tol, z_scale);
        if (polish.certified &&
            polish.solution.cwiseAbs().sum() <=
                primal_value + opts.opt_tol * std::max(primal_value, 1.0)) {
          return finalize(polish.solution, polish.residual, true, iter);
        }
      }
    }

    // Duality-gap certificate from the scaled dual variable.
    Vector y;
    if (projector.dual_solve(rho * u, y)) {
      const Vector corr = d.adjoint() * y;
      const double cmax = corr.cwiseAbs().maxCoeff();
      const Vector y_scaled = cmax > 1.0 ? Vector(y / cmax) : y;
      const double dual_value = b.dot(y_scaled).real();
      const double gap = primal_value - dual_value;
      if (gap <= opts.opt_tol * std::max(primal_value, 1.0) &&
          r_norm <= opts.opt_tol * std::max(1.0, w.norm())) {
        return finalize(x, (d * x - b).norm(), true, iter);
      }
    } else {
      // No cheap dual available (rank-deficient fallback); use the ADMM
      // residuals as the stopping rule.
      if (r_norm <= 1e-10 * std::max(1.0, w.norm()) &&
          s_norm <= 1e-10 * std::max(1.0, w.norm())) {
        return finalize(x, (d * x - b).norm(), true, iter);
      }
    }
  }

  return finalize(x, (d * x - b).norm(), false, opts.max_iterations);
}

SolveReport basis_pursuit(const Dictionary& dict, const Vector& z,
                          const BasisPursuitOptions& opts) {
  return basis_pursuit(dict.entries(), z, opts);
}

// ---------------------------------------------------------------------------
// Combinatorial oracles

P0Result brute_force_p0(const Matrix& dict, const Vector& z, Index max_k) {
  if (dict.rows() != z.size()) {
    throw DimensionError("brute_force_p0: dimensions differ");
  }
  if (max_k < 0 || max_k > dict.cols()) {
    throw PreconditionError("brute_force_p0: invalid max_k");
  }
  double total = 0.0;
  for (Index k = 0; k <= max_k; ++k) {
    total += binomial_guarded(dict.cols(), k, 1e6);
    if (total > 1e6) {
      throw GuardError("brute_force_p0: combinatorial budget exceeded");
    }
  }

  const double z_norm = z.norm();
  P0Result result;
  if (z_norm == 0.0) {
    result.solution = Vector::Zero(dict.cols());
    result.sparsity = 0;
    result.unique = true;
    return result;
  }
  const double tol = 1e-9 * z_norm;

  for (Index k = 1; k <= max_k; ++k) {
    std::vector<Vector> found;
    for (Combinations combo(dict.cols(), k); !combo.done(); combo.advance()) {
      const Matrix ds = select_columns(dict, combo.current());
      Eigen::ColPivHouseholderQR<Matrix> qr(ds);
      const Vector xs = qr.solve(z);
      if ((ds * xs - z).norm() > tol) continue;
      Vector padded = Vector::Zero(dict.cols());
      for (std::size_t i = 0; i < combo.current().size(); ++i) {
        padded(combo.current()[i]) = xs(static_cast<Index>(i));
      }
      bool duplicate = false;
      for (const Vector& prev : found) {
        if ((prev - padded).norm() <= 1e-8 * std::max(1.0, prev.norm())) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) found.push_back(std::move(padded));
    }
    if (!found.empty()) {
      result.solution = found.front();
      result.sparsity = k;
      result.unique = found.size() == 1;
      return result;
    }
  }
  throw NotFoundError("brute_force_p0: no exact representation within max_k");
}

P0NeResult brute_force_p0_ne(const Dictionary& a, const Dictionary& b,
                             const Vector& z, Index ne, Index max_nx) {
  if (a.rows() != b.rows() || a.rows() != z.size()) {
    throw DimensionError("brute_force_p0_ne: dimensions differ");
  }
  if (ne < 0 || ne > b.cols() || max_nx < 0 || max_nx > a.cols()) {
    throw PreconditionError("brute_force_p0_ne: invalid sparsity bounds");
  }
  if (binomial_guarded(b.cols(), ne, 1e6) *
          binomial_guarded(a.cols(), max_nx, 1e6) >
      1e6) {
    throw GuardError("brute_force_p0_ne: combinatorial budget exceeded");
  }

  struct ProjectedProblem {
    IndexSet e_support;
    Matrix ra;  // (I - Q Q^H) A
    Vector rz;
  };
  std::vector<ProjectedProblem> problems;
  const Index m = a.rows();
  for (Index j = 0; j <= ne; ++j) {
    for (Combinations combo(b.cols(), j); !combo.done(); combo.advance()) {
      ProjectedProblem p;
      p.e_support = combo.current();
      if (j == 0) {
        p.ra = a.entries();
        p.rz = z;
      } else {
        const Matrix be = b.columns(p.e_support);
        Eigen::ColPivHouseholderQR<Matrix> qr(be);
        const Index rank = qr.rank();
        Matrix q = qr.householderQ() * Matrix::Identity(m, rank);
        p.ra = a.entries() - q * (q.adjoint() * a.entries());
        p.rz = z - q * (q.adjoint() * z);
      }
      problems.push_back(std::move(p));
    }
  }

  const double z_norm = z.norm();
  const double tol = 1e-9 * std::max(z_norm, 1.0);

  for (Index k = 0; k <= max_nx; ++k) {
    std::vector<Vector> found;
    IndexSet winning_support;
    for (const auto& p : problems) {
      if (k == 0) {
        if (p.rz.norm() <= tol) {
          Vector zero = Vector::Zero(a.cols());
          bool duplicate = false;
          for (const Vector& prev : found) {
            if ((prev - zero).norm() <= 1e-8) duplicate = true;
          }
          if (!duplicate) {
            found.push_back(zero);
            winning_support = p.e_support;
          }
        }
        continue;
      }
      for (Combinations combo(a.cols(), k); !combo.done(); combo.advance()) {
        const Matrix ras = select_columns(p.ra, combo.current());
        Eigen::ColPivHouseholderQR<Matrix> qr(ras);
        const Vector xs = qr.solve(p.rz);
        if ((ras * xs - p.rz).norm() > tol) continue;
        Vector padded = Vector::Zero(a.cols());
        for (std::size_t i = 0; i < combo.current().size(); ++i) {
          padded(combo.current()[i]) = xs(static_cast<Index>(i));
        }
        bool duplicate = false;
        for (const Vector& prev : found) {
          if ((prev - padded).norm() <= 1e-8 * std::max(1.0, prev.norm())) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) {
          if (found.empty()) winning_support = p.e_support;
          found.push_back(std::move(padded));
        }
      }
    }
    if (!found.empty()) {
      P0NeResult result;
      result.solution_x = found.front();
      result.error_support = winning_support;
      result.sparsity = k;
      result.unique = found.size() == 1;
      return result;
    }
  }
  throw NotFoundError("brute_force_p0_ne: no admissible x within max_nx");
}

}  // namespace scr
