#include "scr/experiments.hpp"

#include "scr/errors.hpp"
#include "scr/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace scr {

std::string to_string(PipelineCase c) {
  switch (c) {
    case PipelineCase::case_i: return "caseI";
    case PipelineCase::case_ii_e: return "caseII_E";
    case PipelineCase::case_ii_x: return "caseII_X";
    case PipelineCase::case_iii: return "caseIII";
    case PipelineCase::case_iv: return "caseIV";
  }
  return "unknown";
}

PipelineCase pipeline_case_from_string(const std::string& name) {
  if (name == "caseI") return PipelineCase::case_i;
  if (name == "caseII_E") return PipelineCase::case_ii_e;
  if (name == "caseII_X") return PipelineCase::case_ii_x;
  if (name == "caseIII") return PipelineCase::case_iii;
  if (name == "caseIV") return PipelineCase::case_iv;
  throw PreconditionError("unknown pipeline case '" + name + "'");
}

Transform transform_from_string(const std::string& name) {
  if (name == "dct") return Transform::dct;
  if (name == "haar") return Transform::haar;
  throw PreconditionError("unknown transform '" + name + "'");
}

InpaintKnowledge inpaint_knowledge_from_string(const std::string& name) {
  if (name == "caseI") return InpaintKnowledge::case_i;
  if (name == "caseII_E") return InpaintKnowledge::case_ii_e;
  if (name == "caseIV") return InpaintKnowledge::case_iv;
  throw PreconditionError("unknown inpaint knowledge case '" + name + "'");
}

namespace {

bool trial_succeeds(const ExperimentGrid& grid, Index nx, Index ne,
                    int trial) {
  const std::uint64_t seed =
      derive_seed(grid.master_seed, static_cast<std::uint64_t>(nx),
                  static_cast<std::uint64_t>(ne),
                  static_cast<std::uint64_t>(trial));
  InstanceOptions opts;
  opts.complex_values = grid.complex_values;
  const auto [x, e] =
      random_instance(grid.a.cols(), grid.b.cols(), nx, ne, seed, opts);
  const Vector z = grid.a.entries() * x.dense() + grid.b.entries() * e.dense();

  Vector x_hat;
  try {
    switch (grid.case_id) {
      case PipelineCase::case_i:
        x_hat = recover_case_i(grid.a, grid.b, z, x.support(), e.support())
                    .x.dense();
        break;
      case PipelineCase::case_ii_e:
        x_hat = recover_case_ii_e(grid.a, grid.b, z, e.support(), grid.method,
                                  x.sparsity(), grid.bp_opts)
                    .x.dense();
        break;
      case PipelineCase::case_ii_x:
        x_hat = recover_case_ii_x(grid.a, grid.b, z, x.support(), grid.method,
                                  e.sparsity(), grid.bp_opts)
                    .x.dense();
        break;
      case PipelineCase::case_iii:
        x_hat = recover_case_iii(grid.a, grid.b, z, ne,
                                 grid.max_nx_for_case_iii)
                    .x.dense();
        break;
      case PipelineCase::case_iv:
        x_hat = recover_case_iv(grid.a, grid.b, z, grid.method,
                                x.sparsity() + e.sparsity(), grid.bp_opts)
                    .x.dense();
        break;
    }
  } catch (const NumericalError&) {
    return false;  // a structural failure is a failed trial, not an abort
  }

  const double x_norm = x.dense().norm();
  if (x_norm == 0.0) return x_hat.norm() <= 1e-12;
  return (x_hat - x.dense()).norm() < grid.success_tol * x_norm;
}

}  // namespace

CellResult run_cell(const ExperimentGrid& grid, Index nx, Index ne) {
  if (nx < grid.nx_lo || nx > grid.nx_hi || ne < grid.ne_lo ||
      ne > grid.ne_hi) {
    throw PreconditionError("run_cell: cell outside the grid ranges");
  }
  if (grid.trials_per_cell < 1) {
    throw PreconditionError("run_cell: trials_per_cell must be >= 1");
  }
  CellResult cell{nx, ne, grid.trials_per_cell, 0, 0.0};
  for (int t = 0; t < grid.trials_per_cell; ++t) {
    if (trial_succeeds(grid, nx, ne, t)) ++cell.successes;
  }
  cell.rate = static_cast<double>(cell.successes) /
              static_cast<double>(cell.trials);
  return cell;
}

namespace {

std::vector<CellResult> run_cells(const ExperimentGrid& grid,
                                  const std::vector<std::pair<Index, Index>>&
                                      cells) {
  std::vector<CellResult> results(cells.size());
  unsigned workers = grid.threads > 0
                         ? static_cast<unsigned>(grid.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers,
                               static_cast<unsigned>(cells.size() ? cells.size()
                                                                  : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      results[i] = run_cell(grid, cells[i].first, cells[i].second);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(grid, cells[i].first, cells[i].second);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

std::vector<CellResult> run_grid(const ExperimentGrid& grid) {
  std::vector<std::pair<Index, Index>> cells;
  for (Index ne = grid.ne_lo; ne <= grid.ne_hi; ++ne) {
    for (Index nx = grid.nx_lo; nx <= grid.nx_hi; ++nx) {
      cells.emplace_back(nx, ne);
    }
  }
  return run_cells(grid, cells);
}

std::vector<CellResult> run_diagonal(const ExperimentGrid& grid) {
  std::vector<std::pair<Index, Index>> cells;
  const Index lo = std::max(grid.nx_lo, grid.ne_lo);
  const Index hi = std::min(grid.nx_hi, grid.ne_hi);
  for (Index k = lo; k <= hi; ++k) cells.emplace_back(k, k);
  return run_cells(grid, cells);
}

std::vector<SuccessContourPoint> success_contour(
    const std::vector<CellResult>& results, double level) {
  std::vector<SuccessContourPoint> points;
  std::vector<Index> ne_values;
  for (const auto& c : results) ne_values.push_back(c.ne);
  std::sort(ne_values.begin(), ne_values.end());
  ne_values.erase(std::unique(ne_values.begin(), ne_values.end()),
                  ne_values.end());
  for (Index ne : ne_values) {
    std::vector<const CellResult*> column;
    for (const auto& c : results) {
      if (c.ne == ne) column.push_back(&c);
    }
    std::sort(column.begin(), column.end(),
              [](const CellResult* a, const CellResult* b) {
                return a->nx < b->nx;
              });
    SuccessContourPoint point{ne, 0, false};
    for (const auto* c : column) {
      if (c->rate >= level) point.nx_at_level = c->nx;
    }
    for (const auto* c : column) {
      if (c->nx < point.nx_at_level && c->rate < level) {
        point.non_monotone = true;
        break;
      }
    }
    points.push_back(point);
  }
  return points;
}

Index diagonal_crossing(const std::vector<CellResult>& diagonal_results,
                        double level) {
  Index best = 0;
  for (const auto& c : diagonal_results) {
    if (c.nx == c.ne && c.rate >= level) best = std::max(best, c.nx);
  }
  return best;
}

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << "nx,ne,trials,successes,rate\n";
  for (const auto& c : cells) {
    out << c.nx << ',' << c.ne << ',' << c.trials << ',' << c.successes << ','
        << c.rate << '\n';
  }
}

void write_success_contour_csv(std::ostream& out,
                               const std::vector<SuccessContourPoint>& pts) {
  out << "ne,nx_at_level,non_monotone\n";
  for (const auto& p : pts) {
    out << p.ne << ',' << p.nx_at_level << ',' << (p.non_monotone ? 1 : 0)
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Inpainting

namespace {

Vector vectorize_row_major(const RealMatrix& image) {
  const Index side = image.rows();
  Vector v(side * image.cols());
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      v(r * image.cols() + c) = Complex(image(r, c), 0.0);
    }
  }
  return v;
}

RealMatrix devectorize_row_major(const Vector& v, Index rows, Index cols) {
  RealMatrix image(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      image(r, c) = v(r * cols + c).real();
    }
  }
  return image;
}

IndexSet top_magnitude_support(const Vector& coeffs, Index keep) {
  std::vector<std::pair<double, Index>> order(
      static_cast<std::size_t>(coeffs.size()));
  for (Index i = 0; i < coeffs.size(); ++i) {
    order[static_cast<std::size_t>(i)] = {std::abs(coeffs(i)), i};
  }
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  IndexSet support;
  for (Index i = 0; i < keep; ++i) {
    support.push_back(order[static_cast<std::size_t>(i)].second);
  }
  std::sort(support.begin(), support.end());
  return support;
}

constexpr double kMaxGray = 255.0;

}  // namespace

InpaintResult inpaint_experiment(const RealMatrix& image, Transform transform,
                                 double keep_fraction, const IndexSet& mask,
                                 InpaintKnowledge knowledge,
                                 const BasisPursuitOptions& bp_opts) {
  const Index side = image.rows();
  if (side != image.cols() || side < 2 || (side & (side - 1)) != 0) {
    throw PreconditionError("inpainting expects a square power-of-two image");
  }
  if (keep_fraction <= 0.0 || keep_fraction > 1.0) {
    throw PreconditionError("keep_fraction must lie in (0, 1]");
  }
  const Index n = side * side;
  for (Index idx : mask) {
    if (idx < 0 || idx >= n) {
      throw PreconditionError("mask index out of range");
    }
  }

  const Dictionary a = transform == Transform::dct ? build_dct2d(side)
                                                   : build_haar2d(side, 3);
  const Dictionary b = build_identity(n);

  // Analyze, hard-threshold, synthesize the exactly sparse ground truth.
  const Vector y = vectorize_row_major(image);
  const Vector coeffs_full = a.entries().adjoint() * y;
  const Index keep = std::max<Index>(
      1, static_cast<Index>(std::llround(keep_fraction *
                                         static_cast<double>(n))));
  const IndexSet x_support = top_magnitude_support(coeffs_full, keep);
  Vector x_true = Vector::Zero(n);
  for (Index i : x_support) x_true(i) = coeffs_full(i);
  const Vector y_sparse = a.entries() * x_true;

  Vector z = y_sparse;
  for (Index idx : mask) z(idx) = Complex(kMaxGray, 0.0);

  InpaintResult out;
  out.sparsified = devectorize_row_major(y_sparse, side, side);
  out.corrupted = devectorize_row_major(z, side, side);

  Vector x_hat = Vector::Zero(n);
  switch (knowledge) {
    case InpaintKnowledge::case_i: {
      const RecoveryResult rec = recover_case_i(a, b, z, x_support, mask);
      x_hat = rec.x.dense();
      out.solver_converged = rec.converged;
      break;
    }
    case InpaintKnowledge::case_ii_e: {
      // Tolerant variant of the Case II pipeline: annihilated columns are
      // reported and left out instead of aborting (the Haar failure mode).
      const ProjectedSystem ps = build_projected_system(
          a, b, mask, DegeneratePolicy::zero_and_report);
      out.degenerate_columns = ps.degenerate_columns();
      const Vector z_hat = ps.apply_projector(z);
      const SolveReport bp = basis_pursuit(ps.modified_dict(), z_hat, bp_opts);
      out.solver_converged = bp.converged;
      x_hat = bp.solution;
      for (Index l = 0; l < n; ++l) x_hat(l) *= ps.normalizer_diag()(l);
      break;
    }
    case InpaintKnowledge::case_iv: {
      const RecoveryResult rec =
          recover_case_iv(a, b, z, Method::bp, {}, bp_opts);
      x_hat = rec.x.dense();
      out.solver_converged = rec.converged;
      break;
    }
  }

  const Vector restored = a.entries() * x_hat;
  out.restored = devectorize_row_major(restored, side, side);

  const double num = (restored - y_sparse).squaredNorm();
  const double den = y_sparse.squaredNorm();
  const double ratio = den > 0.0 ? num / den : 0.0;
  out.mse_db = ratio < 1e-30 ? -300.0 : 10.0 * std::log10(ratio);
  return out;
}

IndexSet text_stripe_mask(Index side, double fraction, std::uint64_t seed) {
  if (side < 4) throw PreconditionError("mask side too small");
  if (fraction < 0.0 || fraction > 1.0) {
    throw PreconditionError("mask fraction must lie in [0, 1]");
  }
  const Index n = side * side;
  const Index target = static_cast<Index>(
      std::llround(fraction * static_cast<double>(n)));
  RandomStream rng(derive_seed(seed, 0x3a5c, static_cast<std::uint64_t>(side)));

  // Text-like line bands of solid glyph strokes. Bands start on even rows so
  // strokes cover whole 2x2 pixel blocks, like printed text over an image.
  Index line_height = std::max<Index>(2, side / 16);
  if (line_height % 2 == 1) ++line_height;
  std::vector<Index> band_rows;
  for (Index r = line_height; r + line_height <= side; r += 2 * line_height) {
    for (Index dr = 0; dr < line_height; ++dr) band_rows.push_back(r + dr);
  }
  const double band_pixels =
      static_cast<double>(band_rows.size()) * static_cast<double>(side);
  const double ink_p =
      std::clamp(static_cast<double>(target) / std::max(band_pixels, 1.0),
                 0.02, 0.95);

  std::vector<bool> on(static_cast<std::size_t>(n), false);
  Index count = 0;
  for (std::size_t band = 0; band < band_rows.size();
       band += static_cast<std::size_t>(line_height)) {
    const Index r = band_rows[band];
    Index c = 0;
    while (c < side) {
      const Index run = 2 + static_cast<Index>(rng.next_below(3));  // stroke
      const bool ink = rng.next_double() < ink_p;
      for (Index dc = 0; dc < run && c + dc < side; ++dc) {
        if (!ink) continue;
        for (Index dr = 0; dr < line_height; ++dr) {
          const Index idx = (r + dr) * side + (c + dc);
          if (!on[static_cast<std::size_t>(idx)]) {
            on[static_cast<std::size_t>(idx)] = true;
            ++count;
          }
        }
      }
      c += run;
    }
  }

  // Adjust to the exact target count, preferring in-band pixels so the
  // stroke structure survives.
  std::vector<Index> band_candidates;
  for (Index r : band_rows) {
    for (Index c = 0; c < side; ++c) band_candidates.push_back(r * side + c);
  }
  while (count > target) {
    const Index pick = band_candidates[static_cast<std::size_t>(
        rng.next_below(band_candidates.size()))];
    if (on[static_cast<std::size_t>(pick)]) {
      on[static_cast<std::size_t>(pick)] = false;
      --count;
    }
  }
  std::size_t stuck = 0;
  while (count < target) {
    const bool in_band = stuck < 4 * band_candidates.size();
    const Index pick =
        in_band ? band_candidates[static_cast<std::size_t>(
                      rng.next_below(band_candidates.size()))]
                : static_cast<Index>(
                      rng.next_below(static_cast<std::uint64_t>(n)));
    ++stuck;
    if (!on[static_cast<std::size_t>(pick)]) {
      on[static_cast<std::size_t>(pick)] = true;
      ++count;
    }
  }

  IndexSet mask;
  mask.reserve(static_cast<std::size_t>(target));
  for (Index i = 0; i < n; ++i) {
    if (on[static_cast<std::size_t>(i)]) mask.push_back(i);
  }
  return mask;
}

RealMatrix synthetic_image(Index side, std::uint64_t seed) {
  if (side < 2) throw PreconditionError("image side too small");
  RandomStream rng(derive_seed(seed, 0x1347, static_cast<std::uint64_t>(side)));
  const double phase1 = rng.next_double() * 2.0 * EIGEN_PI;
  const double phase2 = rng.next_double() * 2.0 * EIGEN_PI;

  RealMatrix img(side, side);
  const double s = static_cast<double>(side);
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      const double u = static_cast<double>(r) / s;
      const double v = static_cast<double>(c) / s;
      img(r, c) = 120.0 + 55.0 * std::sin(2.0 * EIGEN_PI * u + phase1) *
                              std::cos(2.0 * EIGEN_PI * v + phase2) +
                  25.0 * std::cos(2.0 * EIGEN_PI * (u + v));
    }
  }
  // A rectangle and a disk give the piecewise structure.
  const Index r0 = side / 8, r1 = side / 2;
  const Index c0 = side / 6, c1 = side / 3;
  for (Index r = r0; r < r1; ++r) {
    for (Index c = c0; c < c1; ++c) img(r, c) += 45.0;
  }
  const double cr = 0.65 * s, cc = 0.62 * s, radius = 0.18 * s;
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      const double dr = static_cast<double>(r) - cr;
      const double dc = static_cast<double>(c) - cc;
      if (dr * dr + dc * dc <= radius * radius) img(r, c) -= 55.0;
    }
  }
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      img(r, c) = std::clamp(img(r, c), 0.0, 245.0);
    }
  }
  return img;
}

}  // namespace scr
