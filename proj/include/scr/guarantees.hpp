#pragma once

#include "scr/dictionary.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace scr {

enum class CaseId {
  classical,
  naive_concat,
  case_i,
  case_ii_e,
  case_ii_x,
  case_iii,
  case_iv_p0,
  case_iv_bp,
};

std::string to_string(CaseId id);
CaseId case_id_from_string(const std::string& name);

// Outcome of one analytical threshold. All inequalities are strict:
// satisfied == (margin < 0) where margin = lhs - rhs. Vacuously true
// thresholds carry margin = -infinity.
struct ThresholdVerdict {
  CaseId case_id;
  bool satisfied = false;
  double margin = 0.0;
  bool swapped_roles = false;  // Case IV evaluated with mu_a/mu_b exchanged
};

ThresholdVerdict classical(Index nx, double mu_a);
ThresholdVerdict naive_concat(Index nx, Index ne, double mu_d);
ThresholdVerdict case_i(Index nx, Index ne, const CoherenceProfile& prof);
ThresholdVerdict case_ii_e_known(Index nx, Index ne,
                                 const CoherenceProfile& prof);
ThresholdVerdict case_ii_x_known(Index nx, Index ne,
                                 const CoherenceProfile& prof);
ThresholdVerdict case_iii(Index nx, Index ne, const CoherenceProfile& prof);
ThresholdVerdict case_iv_p0(Index nx, Index ne, const CoherenceProfile& prof);
ThresholdVerdict case_iv_bp(Index nx, Index ne, const CoherenceProfile& prof);

ThresholdVerdict evaluate_case(CaseId id, Index nx, Index ne,
                               const CoherenceProfile& prof);

struct ThresholdContourPoint {
  Index ne = 0;
  Index max_nx = 0;  // largest nx with a satisfied verdict, 0 if none
};

// One point per ne in [ne_lo, ne_hi]. nx_cap bounds the search for profiles
// whose guaranteed region is unbounded in nx (e.g. mu_a = 0 at ne = 0).
std::vector<ThresholdContourPoint> contour(CaseId id,
                                           const CoherenceProfile& prof,
                                           Index ne_lo, Index ne_hi,
                                           Index nx_cap = 4096);

void write_contour_csv(std::ostream& out, CaseId id,
                       const CoherenceProfile& prof,
                       const std::vector<ThresholdContourPoint>& points);

}  // namespace scr
