#pragma once

#include "scr/dictionary.hpp"
#include "scr/recovery.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace scr {

enum class PipelineCase { case_i, case_ii_e, case_ii_x, case_iii, case_iv };

std::string to_string(PipelineCase c);
PipelineCase pipeline_case_from_string(const std::string& name);

// Monte-Carlo sweep over (nx, ne) cells. Per-trial seeds derive from
// (master_seed, nx, ne, trial), so results are independent of execution
// order and thread count.
struct ExperimentGrid {
  Dictionary a;
  Dictionary b;
  PipelineCase case_id = PipelineCase::case_i;
  Method method = Method::bp;
  Index nx_lo = 1, nx_hi = 1;
  Index ne_lo = 1, ne_hi = 1;
  int trials_per_cell = 200;
  std::uint64_t master_seed = 1;
  double success_tol = 1e-3;
  bool complex_values = false;
  int threads = 0;  // 0 = hardware concurrency
  Index max_nx_for_case_iii = 3;
  BasisPursuitOptions bp_opts;
};

struct CellResult {
  Index nx = 0;
  Index ne = 0;
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
};

CellResult run_cell(const ExperimentGrid& grid, Index nx, Index ne);
std::vector<CellResult> run_grid(const ExperimentGrid& grid);

// Cells along the diagonal nx = ne (the slice used by the phase-transition
// crossing comparisons).
std::vector<CellResult> run_diagonal(const ExperimentGrid& grid);

struct SuccessContourPoint {
  Index ne = 0;
  Index nx_at_level = 0;
  bool non_monotone = false;  // sampling noise produced a gap below the level
};

std::vector<SuccessContourPoint> success_contour(
    const std::vector<CellResult>& results, double level = 0.5);

// Largest nx = ne on the diagonal with rate >= level (0 if none).
Index diagonal_crossing(const std::vector<CellResult>& diagonal_results,
                        double level = 0.5);

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells);
void write_success_contour_csv(std::ostream& out,
                               const std::vector<SuccessContourPoint>& pts);

// ---------------------------------------------------------------------------
// Inpainting

enum class Transform { dct, haar };
enum class InpaintKnowledge { case_i, case_ii_e, case_iv };

Transform transform_from_string(const std::string& name);
InpaintKnowledge inpaint_knowledge_from_string(const std::string& name);

struct InpaintResult {
  RealMatrix sparsified;   // ground truth: image after hard thresholding
  RealMatrix corrupted;    // mask pixels overwritten with max gray
  RealMatrix restored;
  double mse_db = 0.0;     // 10 log10(|restored - sparsified|^2 / |sparsified|^2)
  IndexSet degenerate_columns;  // projected columns annihilated by the mask
  bool solver_converged = true;
};

// Pipeline: analyze in the transform, keep the keep_fraction largest
// coefficients, synthesize the sparsified image, overwrite the mask pixels
// with max gray, then recover per the knowledge case.
InpaintResult inpaint_experiment(const RealMatrix& image, Transform transform,
                                 double keep_fraction, const IndexSet& mask,
                                 InpaintKnowledge knowledge,
                                 const BasisPursuitOptions& bp_opts = {});

// Seeded pseudo-text stripe mask covering exactly round(fraction * side^2)
// pixels (row-major indices).
IndexSet text_stripe_mask(Index side, double fraction, std::uint64_t seed);

// Piecewise-smooth grayscale test image in [0, 245].
RealMatrix synthetic_image(Index side, std::uint64_t seed);

}  // namespace scr
