#include "scr/guarantees.hpp"

#include "scr/errors.hpp"
#include "scr/uncertainty.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace scr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ThresholdVerdict verdict_from(CaseId id, double lhs, double rhs,
                              bool swapped = false) {
  ThresholdVerdict v;
  v.case_id = id;
  v.margin = lhs - rhs;
  v.satisfied = v.margin < 0.0;
  v.swapped_roles = swapped;
  return v;
}

ThresholdVerdict vacuous(CaseId id) {
  ThresholdVerdict v;
  v.case_id = id;
  v.satisfied = true;
  v.margin = -kInf;
  return v;
}

void require_counts(Index nx, Index ne) {
  if (nx < 0 || ne < 0) throw PreconditionError("sparsity counts must be >= 0");
}

void require_profile(const CoherenceProfile& prof) {
  if (prof.mu_m <= 0.0) {
    throw PreconditionError(
        "threshold evaluation requires mu_m > 0 (orthogonal ranges are a "
        "separable case handled upstream)");
  }
}

// Thm. 6 uses its own rational function of nw, distinct from f(u,v).
double case_iv_f(double x, double mu_a, double mu_b, double mu_d) {
  const double num = (1.0 + mu_a) * (1.0 + mu_b) - x * mu_b * (1.0 + mu_a);
  const double den = x * (mu_d * mu_d - mu_a * mu_b) + mu_a * (1.0 + mu_b);
  return num / den;
}

}  // namespace

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::classical: return "classical";
    case CaseId::naive_concat: return "naive_concat";
    case CaseId::case_i: return "caseI";
    case CaseId::case_ii_e: return "caseII_E";
    case CaseId::case_ii_x: return "caseII_X";
    case CaseId::case_iii: return "caseIII";
    case CaseId::case_iv_p0: return "caseIV_P0";
    case CaseId::case_iv_bp: return "caseIV_BP";
  }
  return "unknown";
}

CaseId case_id_from_string(const std::string& name) {
  if (name == "classical") return CaseId::classical;
  if (name == "naive_concat") return CaseId::naive_concat;
  if (name == "caseI") return CaseId::case_i;
  if (name == "caseII_E") return CaseId::case_ii_e;
  if (name == "caseII_X") return CaseId::case_ii_x;
  if (name == "caseIII") return CaseId::case_iii;
  if (name == "caseIV_P0") return CaseId::case_iv_p0;
  if (name == "caseIV_BP") return CaseId::case_iv_bp;
  throw PreconditionError("unknown case id '" + name + "'");
}

ThresholdVerdict classical(Index nx, double mu_a) {
  require_counts(nx, 0);
  if (mu_a < 0.0 || mu_a > 1.0 + 1e-12) {
    throw PreconditionError("mu_a must lie in [0, 1]");
  }
  if (mu_a == 0.0) return vacuous(CaseId::classical);
  return verdict_from(CaseId::classical, static_cast<double>(nx),
                      0.5 * (1.0 + 1.0 / mu_a));
}

ThresholdVerdict naive_concat(Index nx, Index ne, double mu_d) {
  require_counts(nx, ne);
  if (mu_d < 0.0 || mu_d > 1.0 + 1e-12) {
    throw PreconditionError("mu_d must lie in [0, 1]");
  }
  if (mu_d == 0.0) return vacuous(CaseId::naive_concat);
  return verdict_from(CaseId::naive_concat, static_cast<double>(nx + ne),
                      0.5 * (1.0 + 1.0 / mu_d));
}

ThresholdVerdict case_i(Index nx, Index ne, const CoherenceProfile& prof) {
  require_counts(nx, ne);
  require_profile(prof);
  const double u = static_cast<double>(nx);
  const double v = static_cast<double>(ne);
  return verdict_from(CaseId::case_i, u * v, f_bound(u, v, prof));
}

ThresholdVerdict case_ii_e_known(Index nx, Index ne,
                                 const CoherenceProfile& prof) {
  require_counts(nx, ne);
  require_profile(prof);
  const double u = static_cast<double>(nx);
  const double v = static_cast<double>(ne);
  return verdict_from(CaseId::case_ii_e, 2.0 * u * v,
                      f_bound(2.0 * u, v, prof));
}

ThresholdVerdict case_ii_x_known(Index nx, Index ne,
                                 const CoherenceProfile& prof) {
  require_counts(nx, ne);
  require_profile(prof);
  const double u = static_cast<double>(nx);
  const double v = static_cast<double>(ne);
  return verdict_from(CaseId::case_ii_x, 2.0 * u * v,
                      f_bound(u, 2.0 * v, prof));
}

ThresholdVerdict case_iii(Index nx, Index ne, const CoherenceProfile& prof) {
  require_counts(nx, ne);
  require_profile(prof);
  const double u = static_cast<double>(nx);
  const double v = static_cast<double>(ne);
  return verdict_from(CaseId::case_iii, 4.0 * u * v,
                      f_bound(2.0 * u, 2.0 * v, prof));
}

ThresholdVerdict case_iv_p0(Index nx, Index ne, const CoherenceProfile& prof) {
  require_counts(nx, ne);
  require_profile(prof);
  // The theorem premise orders the pair coherences.
  double mu_a = prof.mu_a;
  double mu_b = prof.mu_b;
  const bool swapped = mu_a > mu_b;
  if (swapped) std::swap(mu_a, mu_b);
  const double mu_d = prof.mu_d;

  const double cross = mu_d * mu_d - mu_a * mu_b;
  double x_stat;
  if (mu_a == mu_b && mu_b == mu_d) {
    x_stat = 1.0 / mu_d;
  } else {
    if (std::abs(cross) < 1e-15) {
      throw PreconditionError(
          "caseIV_P0 unsupported parameters: mu_d^2 == mu_a mu_b with "
          "mu_a != mu_b");
    }
    x_stat = (mu_d * std::sqrt((1.0 + mu_a) * (1.0 + mu_b)) - mu_a -
              mu_a * mu_b) /
             cross;
  }
  const double x_bord = (1.0 + mu_b) / (mu_b + mu_d * mu_d);
  const double x_star = std::min(x_bord, x_stat);
  const double threshold =
      0.5 * (case_iv_f(x_star, mu_a, mu_b, mu_d) + x_star);
  return verdict_from(CaseId::case_iv_p0, static_cast<double>(nx + ne),
                      threshold, swapped);
}

ThresholdVerdict case_iv_bp(Index nx, Index ne, const CoherenceProfile& prof) {
  require_counts(nx, ne);
  require_profile(prof);
  double mu_a = prof.mu_a;
  double mu_b = prof.mu_b;
  const bool swapped = mu_a > mu_b;
  if (swapped) std::swap(mu_a, mu_b);
  const double mu_d = prof.mu_d;

  const double alpha1 = 1.0 + mu_b;
  const double beta = 2.0 * std::sqrt(2.0) * std::sqrt(mu_d * (mu_b + mu_d));

  double threshold;
  bool first_branch = false;
  if (mu_b < mu_d) {
    // The branch selector keeps the denominator away from zero.
    const double denom = 2.0 * (mu_d * mu_d - mu_b * mu_b);
    const double tau =
        (alpha1 * std::sqrt(2.0 * mu_d * (mu_b + 3.0 * mu_d + beta)) -
         2.0 * mu_d - 2.0 * mu_b * (alpha1 + mu_d)) /
        denom;
    if (tau > 1.0) {
      first_branch = true;
      threshold = alpha1 * (beta - (mu_d + 3.0 * mu_b)) / denom;
    }
  }
  if (!first_branch) {
    threshold = (1.0 + 2.0 * mu_d * mu_d + 3.0 * mu_b - mu_d * alpha1) /
                (2.0 * (mu_d * mu_d + mu_b));
  }
  return verdict_from(CaseId::case_iv_bp, static_cast<double>(nx + ne),
                      threshold, swapped);
}

ThresholdVerdict evaluate_case(CaseId id, Index nx, Index ne,
                               const CoherenceProfile& prof) {
  switch (id) {
    case CaseId::classical: return classical(nx, prof.mu_a);
    case CaseId::naive_concat: return naive_concat(nx, ne, prof.mu_d);
    case CaseId::case_i: return case_i(nx, ne, prof);
    case CaseId::case_ii_e: return case_ii_e_known(nx, ne, prof);
    case CaseId::case_ii_x: return case_ii_x_known(nx, ne, prof);
    case CaseId::case_iii: return case_iii(nx, ne, prof);
    case CaseId::case_iv_p0: return case_iv_p0(nx, ne, prof);
    case CaseId::case_iv_bp: return case_iv_bp(nx, ne, prof);
  }
  throw PreconditionError("invalid case id");
}

std::vector<ThresholdContourPoint> contour(CaseId id,
                                           const CoherenceProfile& prof,
                                           Index ne_lo, Index ne_hi,
                                           Index nx_cap) {
  if (ne_lo < 0 || ne_hi < ne_lo) {
    throw PreconditionError("invalid ne range");
  }
  std::vector<ThresholdContourPoint> points;
  points.reserve(static_cast<std::size_t>(ne_hi - ne_lo + 1));
  for (Index ne = ne_lo; ne <= ne_hi; ++ne) {
    // Satisfaction is monotone in nx (the lhs grows, the bound shrinks), so
    // scan upward until the first failure.
    Index best = 0;
    for (Index nx = 1; nx <= nx_cap; ++nx) {
      if (evaluate_case(id, nx, ne, prof).satisfied) {
        best = nx;
      } else {
        break;
      }
    }
    points.push_back({ne, best});
  }
  return points;
}

void write_contour_csv(std::ostream& out, CaseId id,
                       const CoherenceProfile& prof,
                       const std::vector<ThresholdContourPoint>& points) {
  out << "case,mu_a,mu_b,mu_m,mu_d,ne,max_nx\n";
  for (const auto& p : points) {
    out << to_string(id) << ',' << prof.mu_a << ',' << prof.mu_b << ','
        << prof.mu_m << ',' << prof.mu_d << ',' << p.ne << ',' << p.max_nx
        << '\n';
  }
}

}  // namespace scr
