// Command-line surface for the sparse-corruption recovery toolkit.

#include <CLI11.hpp>

#include "scr/cli_support.hpp"
#include "scr/errors.hpp"
#include "scr/experiments.hpp"
#include "scr/guarantees.hpp"
#include "scr/io.hpp"
#include "scr/recovery.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace scr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--seed", common.seed, "master seed for all randomness");
  cmd->add_option("--threads", common.threads,
                  "worker threads (0 = all cores)");
  cmd->add_option("--out-dir", common.out_dir, "output directory");
}

std::ofstream open_output(const CommonOptions& common,
                          const std::string& name) {
  fs::create_directories(common.out_dir);
  const fs::path path = fs::path(common.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "'");
  return out;
}

IndexSet support_argument(const std::string& text) {
  if (text.rfind("file:", 0) == 0) {
    return load_sparse_vector(text.substr(5)).support();
  }
  return cli::parse_index_list(text);
}

// ---------------------------------------------------------------------------

int cmd_coherence(const std::string& spec_a, const std::string& spec_b,
                  const CommonOptions& common, const std::string& out_name) {
  const auto [a, b] = cli::parse_dictionary_pair(spec_a, spec_b);
  const CoherenceProfile p = profile(a, b);

  cli::ConfigEcho echo;
  echo.add("command", std::string("coherence"));
  echo.add("a", spec_a);
  echo.add("b", spec_b);

  std::ostringstream body;
  echo.write_header(body);
  body << "mu_a,mu_b,mu_m,mu_d\n"
       << std::setprecision(17) << p.mu_a << ',' << p.mu_b << ',' << p.mu_m
       << ',' << p.mu_d << '\n';
  std::cout << body.str();
  if (!out_name.empty()) {
    auto out = open_output(common, out_name);
    out << body.str();
  }
  return kExitOk;
}

int cmd_threshold(const std::string& case_name, const std::string& profile_arg,
                  const std::string& spec_a, const std::string& spec_b,
                  const std::string& ne_range, Index nx_cap,
                  const CommonOptions& common, const std::string& out_name) {
  const CaseId id = case_id_from_string(case_name);
  CoherenceProfile prof;
  if (!profile_arg.empty()) {
    prof = cli::parse_profile(profile_arg);
  } else if (!spec_a.empty() && !spec_b.empty()) {
    const auto [a, b] = cli::parse_dictionary_pair(spec_a, spec_b);
    prof = profile(a, b);
  } else {
    throw PreconditionError("threshold needs --profile or both --a and --b");
  }
  const auto [ne_lo, ne_hi] = cli::parse_range(ne_range);
  const auto points = contour(id, prof, ne_lo, ne_hi, nx_cap);

  cli::ConfigEcho echo;
  echo.add("command", std::string("threshold"));
  echo.add("case", case_name);
  echo.add("mu_a", prof.mu_a);
  echo.add("mu_b", prof.mu_b);
  echo.add("mu_m", prof.mu_m);
  echo.add("mu_d", prof.mu_d);
  echo.add("ne_range", ne_range);
  echo.add("nx_cap", nx_cap);

  std::ostringstream body;
  echo.write_header(body);
  write_contour_csv(body, id, prof, points);
  std::cout << body.str();
  if (!out_name.empty()) {
    auto out = open_output(common, out_name);
    out << body.str();
  }
  return kExitOk;
}

int cmd_gen_problem(const std::string& spec_a, const std::string& spec_b,
                    Index nx, Index ne, bool complex_values,
                    const CommonOptions& common) {
  const auto [a, b] = cli::parse_dictionary_pair(spec_a, spec_b);
  InstanceOptions opts;
  opts.complex_values = complex_values;
  const auto [x, e] = random_instance(a.cols(), b.cols(), nx, ne,
                                      common.seed, opts);
  const Vector z = a.entries() * x.dense() + b.entries() * e.dense();

  fs::create_directories(common.out_dir);
  const fs::path dir(common.out_dir);
  save_dictionary((dir / "a.mat").string(), a);
  save_dictionary((dir / "b.mat").string(), b);
  save_vector((dir / "z.mat").string(), z);
  save_sparse_vector((dir / "x_true.csv").string(), x);
  save_sparse_vector((dir / "e_true.csv").string(), e);

  cli::ConfigEcho echo;
  echo.add("command", std::string("gen-problem"));
  echo.add("a", spec_a);
  echo.add("b", spec_b);
  echo.add("nx", nx);
  echo.add("ne", ne);
  echo.add("seed", static_cast<Index>(common.seed));
  echo.add("complex", std::string(complex_values ? "1" : "0"));
  auto cfg = open_output(common, "problem.cfg");
  echo.write_header(cfg);
  std::cout << "wrote a.mat b.mat z.mat x_true.csv e_true.csv problem.cfg to "
            << common.out_dir << '\n';
  return kExitOk;
}

int cmd_recover(const std::string& spec_a, const std::string& spec_b,
                const std::string& z_path, const std::string& case_name,
                const std::string& method_name, const std::string& x_support,
                const std::string& e_support, std::optional<Index> nx,
                std::optional<Index> ne, Index max_nx, int bp_max_iter,
                const CommonOptions& common) {
  const auto [a, b] = cli::parse_dictionary_pair(spec_a, spec_b);
  const Vector z = load_vector(z_path);
  const Method method = method_name == "omp" ? Method::omp : Method::bp;
  BasisPursuitOptions bp_opts;
  if (bp_max_iter > 0) bp_opts.max_iterations = bp_max_iter;

  SparseVector x(a.cols()), e(b.cols());
  double residual = 0.0;
  bool converged = true;
  bool unique = true;
  const PipelineCase which = pipeline_case_from_string(case_name);
  switch (which) {
    case PipelineCase::case_i: {
      const RecoveryResult r = recover_case_i(
          a, b, z, support_argument(x_support), support_argument(e_support));
      x = r.x;
      e = r.e;
      residual = r.consistency_residual;
      converged = r.converged;
      break;
    }
    case PipelineCase::case_ii_e: {
      const RecoveryResult r = recover_case_ii_e(
          a, b, z, support_argument(e_support), method, nx, bp_opts);
      x = r.x;
      e = r.e;
      residual = r.consistency_residual;
      converged = r.converged;
      break;
    }
    case PipelineCase::case_ii_x: {
      const RecoveryResult r = recover_case_ii_x(
          a, b, z, support_argument(x_support), method, ne, bp_opts);
      x = r.x;
      e = r.e;
      residual = r.consistency_residual;
      converged = r.converged;
      break;
    }
    case PipelineCase::case_iii: {
      if (!ne) throw PreconditionError("caseIII needs --ne");
      const CaseIiiResult r = recover_case_iii(a, b, z, *ne, max_nx);
      x = r.x;
      e = r.e;
      unique = r.unique;
      residual = (a.entries() * x.dense() + b.entries() * e.dense() - z)
                     .norm() /
                 std::max(z.norm(), 1.0);
      break;
    }
    case PipelineCase::case_iv: {
      std::optional<Index> k;
      if (method == Method::omp) {
        if (!nx || !ne) {
          throw PreconditionError("caseIV with OMP needs --nx and --ne");
        }
        k = *nx + *ne;
      }
      const RecoveryResult r = recover_case_iv(a, b, z, method, k, bp_opts);
      x = r.x;
      e = r.e;
      residual = r.consistency_residual;
      converged = r.converged;
      break;
    }
  }

  fs::create_directories(common.out_dir);
  const fs::path dir(common.out_dir);
  save_sparse_vector((dir / "x.csv").string(), x);
  save_sparse_vector((dir / "e.csv").string(), e);

  cli::ConfigEcho echo;
  echo.add("command", std::string("recover"));
  echo.add("a", spec_a);
  echo.add("b", spec_b);
  echo.add("case", case_name);
  echo.add("method", method_name);
  std::ostringstream report;
  echo.write_header(report);
  report << "nx,ne,consistency_residual,converged,unique\n"
         << x.sparsity() << ',' << e.sparsity() << ','
         << std::setprecision(17) << residual << ',' << (converged ? 1 : 0)
         << ',' << (unique ? 1 : 0) << '\n';
  std::cout << report.str();
  auto out = open_output(common, "recover_report.csv");
  out << report.str();
  return converged ? kExitOk : kExitNumerical;
}

int cmd_phase(const std::string& spec_a, const std::string& spec_b,
              const std::string& case_name, const std::string& method_name,
              const std::string& nx_range, const std::string& ne_range,
              int trials, bool diagonal_only, double success_tol,
              bool complex_values, int bp_max_iter,
              const CommonOptions& common) {
  auto [a, b] = cli::parse_dictionary_pair(spec_a, spec_b);
  ExperimentGrid grid{std::move(a), std::move(b)};
  grid.case_id = pipeline_case_from_string(case_name);
  grid.method = method_name == "omp" ? Method::omp : Method::bp;
  std::tie(grid.nx_lo, grid.nx_hi) = cli::parse_range(nx_range);
  std::tie(grid.ne_lo, grid.ne_hi) = cli::parse_range(ne_range);
  grid.trials_per_cell = trials;
  grid.master_seed = common.seed;
  grid.success_tol = success_tol;
  grid.complex_values = complex_values;
  grid.threads = common.threads;
  if (bp_max_iter > 0) grid.bp_opts.max_iterations = bp_max_iter;

  const std::vector<CellResult> cells =
      diagonal_only ? run_diagonal(grid) : run_grid(grid);

  cli::ConfigEcho echo;
  echo.add("command", std::string("phase"));
  echo.add("a", spec_a);
  echo.add("b", spec_b);
  echo.add("case", case_name);
  echo.add("method", method_name);
  echo.add("nx_range", nx_range);
  echo.add("ne_range", ne_range);
  echo.add("trials", static_cast<Index>(trials));
  echo.add("seed", static_cast<Index>(common.seed));
  echo.add("success_tol", success_tol);
  echo.add("diagonal", std::string(diagonal_only ? "1" : "0"));

  auto cells_out = open_output(common, "cells.csv");
  echo.write_header(cells_out);
  write_cells_csv(cells_out, cells);

  auto contour_out = open_output(common, "contour.csv");
  echo.write_header(contour_out);
  write_success_contour_csv(contour_out, success_contour(cells));

  if (diagonal_only) {
    std::cout << "diagonal 50% crossing at nx = ne = "
              << diagonal_crossing(cells) << '\n';
  }
  std::cout << "wrote cells.csv and contour.csv to " << common.out_dir
            << '\n';
  return kExitOk;
}

int cmd_inpaint(const std::string& image_arg, const std::string& transform_arg,
                double keep, const std::string& mask_arg,
                const std::string& case_name, int bp_max_iter,
                const CommonOptions& common) {
  RealMatrix image;
  if (image_arg.rfind("synthetic:", 0) == 0) {
    const Index side = static_cast<Index>(std::stoll(image_arg.substr(10)));
    image = synthetic_image(side, common.seed);
  } else if (image_arg.rfind("file:", 0) == 0) {
    image = read_pgm(image_arg.substr(5));
  } else {
    image = read_pgm(image_arg);
  }

  IndexSet mask;
  if (mask_arg.rfind("text:", 0) == 0) {
    const double fraction = std::stod(mask_arg.substr(5));
    mask = text_stripe_mask(image.rows(), fraction, common.seed);
  } else {
    const std::string path =
        mask_arg.rfind("file:", 0) == 0 ? mask_arg.substr(5) : mask_arg;
    const RealMatrix mask_img = read_pgm(path);
    if (mask_img.rows() != image.rows() || mask_img.cols() != image.cols()) {
      throw PreconditionError("mask and image dimensions differ");
    }
    for (Index r = 0; r < mask_img.rows(); ++r) {
      for (Index c = 0; c < mask_img.cols(); ++c) {
        if (mask_img(r, c) > 127.0) mask.push_back(r * mask_img.cols() + c);
      }
    }
  }

  BasisPursuitOptions bp_opts;
  if (bp_max_iter > 0) bp_opts.max_iterations = bp_max_iter;
  const InpaintResult result = inpaint_experiment(
      image, transform_from_string(transform_arg), keep, mask,
      inpaint_knowledge_from_string(case_name), bp_opts);

  cli::ConfigEcho echo;
  echo.add("command", std::string("inpaint"));
  echo.add("image", image_arg);
  echo.add("transform", transform_arg);
  echo.add("keep", keep);
  echo.add("mask", mask_arg);
  echo.add("case", case_name);
  echo.add("seed", static_cast<Index>(common.seed));
  std::ostringstream hash_comment;
  hash_comment << "config_hash=" << std::hex << echo.hash();

  fs::create_directories(common.out_dir);
  const fs::path dir(common.out_dir);
  write_pgm((dir / "sparsified.pgm").string(), result.sparsified,
            hash_comment.str());
  write_pgm((dir / "corrupted.pgm").string(), result.corrupted,
            hash_comment.str());
  write_pgm((dir / "restored.pgm").string(), result.restored,
            hash_comment.str());

  std::ostringstream report;
  echo.write_header(report);
  report << "mse_db,degenerate_columns,solver_converged\n"
         << std::setprecision(17) << result.mse_db << ','
         << result.degenerate_columns.size() << ','
         << (result.solver_converged ? 1 : 0) << '\n';
  std::cout << report.str();
  auto out = open_output(common, "inpaint_report.csv");
  out << report.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovery toolkit for sparse signals under sparse corruption"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI-style config file");

  CommonOptions common;

  // coherence
  auto* coherence_cmd =
      app.add_subcommand("coherence", "coherence parameters of a pair");
  std::string spec_a, spec_b, out_name;
  coherence_cmd->add_option("--a", spec_a, "signal dictionary spec")
      ->required();
  coherence_cmd->add_option("--b", spec_b, "noise dictionary spec")
      ->required();
  coherence_cmd->add_option("--out", out_name, "also write CSV to out-dir");
  add_common(coherence_cmd, common);

  // threshold
  auto* threshold_cmd = app.add_subcommand(
      "threshold", "analytical recovery-threshold contour as CSV");
  std::string case_name = "caseI", profile_arg, ne_range = "1:16";
  Index nx_cap = 1024;
  threshold_cmd->add_option("--case", case_name,
                            "classical|naive_concat|caseI|caseII_E|caseII_X|"
                            "caseIII|caseIV_P0|caseIV_BP");
  threshold_cmd->add_option("--profile", profile_arg,
                            "mu_a,mu_b,mu_m[,mu_d] (overrides --a/--b)");
  threshold_cmd->add_option("--a", spec_a, "signal dictionary spec");
  threshold_cmd->add_option("--b", spec_b, "noise dictionary spec");
  threshold_cmd->add_option("--ne-range", ne_range, "LO:HI");
  threshold_cmd->add_option("--nx-cap", nx_cap, "search cap for max nx");
  threshold_cmd->add_option("--out", out_name, "also write CSV to out-dir");
  add_common(threshold_cmd, common);

  // gen-problem
  auto* gen_cmd = app.add_subcommand(
      "gen-problem", "generate a seeded instance and write it to out-dir");
  Index nx = 1, ne = 1;
  bool complex_values = false;
  gen_cmd->add_option("--a", spec_a, "signal dictionary spec")->required();
  gen_cmd->add_option("--b", spec_b, "noise dictionary spec")->required();
  gen_cmd->add_option("--nx", nx, "signal sparsity")->required();
  gen_cmd->add_option("--ne", ne, "noise sparsity")->required();
  gen_cmd->add_flag("--complex", complex_values, "complex Gaussian nonzeros");
  add_common(gen_cmd, common);

  // recover
  auto* recover_cmd =
      app.add_subcommand("recover", "run one recovery pipeline on files");
  std::string z_path, method_name = "bp", x_support, e_support;
  Index max_nx = 3;
  std::optional<Index> nx_opt, ne_opt;
  int bp_max_iter = 0;
  recover_cmd->add_option("--a", spec_a, "signal dictionary spec")->required();
  recover_cmd->add_option("--b", spec_b, "noise dictionary spec")->required();
  recover_cmd->add_option("--z", z_path, "measurement file (matrix format)")
      ->required();
  recover_cmd->add_option("--case", case_name,
                          "caseI|caseII_E|caseII_X|caseIII|caseIV")
      ->required();
  recover_cmd->add_option("--method", method_name, "bp|omp");
  recover_cmd->add_option("--x-support", x_support,
                          "comma list or file:x.csv");
  recover_cmd->add_option("--e-support", e_support,
                          "comma list or file:e.csv");
  recover_cmd->add_option("--nx", nx_opt, "signal sparsity (OMP)");
  recover_cmd->add_option("--ne", ne_opt, "noise sparsity (OMP / caseIII)");
  recover_cmd->add_option("--max-nx", max_nx, "caseIII search cap");
  recover_cmd->add_option("--bp-max-iter", bp_max_iter,
                          "basis pursuit iteration cap");
  add_common(recover_cmd, common);

  // phase
  auto* phase_cmd = app.add_subcommand(
      "phase", "Monte-Carlo phase-transition sweep, CSV results");
  std::string nx_range = "1:8";
  int trials = 200;
  bool diagonal_only = false;
  double success_tol = 1e-3;
  phase_cmd->add_option("--a", spec_a, "signal dictionary spec")->required();
  phase_cmd->add_option("--b", spec_b, "noise dictionary spec")->required();
  phase_cmd->add_option("--case", case_name,
                        "caseI|caseII_E|caseII_X|caseIII|caseIV");
  phase_cmd->add_option("--method", method_name, "bp|omp");
  phase_cmd->add_option("--nx-range", nx_range, "LO:HI");
  phase_cmd->add_option("--ne-range", ne_range, "LO:HI");
  phase_cmd->add_option("--trials", trials, "trials per cell");
  phase_cmd->add_flag("--diagonal", diagonal_only, "only nx = ne cells");
  phase_cmd->add_option("--success-tol", success_tol,
                        "relative success criterion");
  phase_cmd->add_flag("--complex", complex_values, "complex nonzeros");
  phase_cmd->add_option("--bp-max-iter", bp_max_iter,
                        "basis pursuit iteration cap");
  add_common(phase_cmd, common);

  // inpaint
  auto* inpaint_cmd =
      app.add_subcommand("inpaint", "sparsify, corrupt, and restore an image");
  std::string image_arg = "synthetic:64", transform_arg = "dct",
              mask_arg = "text:0.188";
  double keep = 0.15;
  inpaint_cmd->add_option("--image", image_arg,
                          "PGM path or synthetic:SIDE");
  inpaint_cmd->add_option("--transform", transform_arg, "dct|haar");
  inpaint_cmd->add_option("--keep", keep, "fraction of coefficients kept");
  inpaint_cmd->add_option("--mask", mask_arg,
                          "PGM path (bright = masked) or text:FRACTION");
  inpaint_cmd->add_option("--case", case_name, "caseI|caseII_E|caseIV");
  inpaint_cmd->add_option("--bp-max-iter", bp_max_iter,
                          "basis pursuit iteration cap");
  add_common(inpaint_cmd, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (coherence_cmd->parsed()) {
      return cmd_coherence(spec_a, spec_b, common, out_name);
    }
    if (threshold_cmd->parsed()) {
      return cmd_threshold(case_name, profile_arg, spec_a, spec_b, ne_range,
                           nx_cap, common, out_name);
    }
    if (gen_cmd->parsed()) {
      return cmd_gen_problem(spec_a, spec_b, nx, ne, complex_values, common);
    }
    if (recover_cmd->parsed()) {
      return cmd_recover(spec_a, spec_b, z_path, case_name, method_name,
                         x_support, e_support, nx_opt, ne_opt, max_nx,
                         bp_max_iter, common);
    }
    if (phase_cmd->parsed()) {
      return cmd_phase(spec_a, spec_b, case_name, method_name, nx_range,
                       ne_range, trials, diagonal_only, success_tol,
                       complex_values, bp_max_iter, common);
    }
    if (inpaint_cmd->parsed()) {
      return cmd_inpaint(image_arg, transform_arg, keep, mask_arg, case_name,
                         bp_max_iter, common);
    }
  } catch (const PreconditionError& err) {
    std::cerr << "precondition violated: " << err.what() << '\n';
    return kExitPrecondition;
  } catch (const NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  } catch (const std::exception& err) {
    std::cerr << "unexpected error: " << err.what() << '\n';
    return kExitUnexpected;
  }
  return kExitUnexpected;
}
