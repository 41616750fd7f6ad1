#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "rbfkit/diagnostics.hpp"
#include "rbfkit/error.hpp"
#include "rbfkit/io.hpp"

namespace rbfkit::cli {

namespace {

struct KernelArgs {
  std::string kernel = "wendland-c2";
  double shape = 1.0;
  std::string degree = "1";
  bool no_normalize = false;

  void add_to(CLI::App& app) {
    app.add_option("--kernel", kernel,
                   "tps | gaussian | multiquadric | wendland-c0 | wendland-c2 | wendland-c4")
        ->capture_default_str();
    app.add_option("--shape", shape,
                   "shape parameter (support radius is 1/shape for wendland kernels)")
        ->capture_default_str();
    app.add_option("--degree", degree, "polynomial tail degree: none | 0 | 1 | 2")
        ->capture_default_str();
    app.add_flag("--no-normalize", no_normalize, "assemble in raw coordinates");
  }

  Kernel make_kernel() const { return Kernel(parse_kernel_kind(kernel), shape); }
};

std::vector<double> parse_offsets(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string cell = text.substr(start, comma - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw InvalidConfiguration("bad offset '" + cell + "' in --offsets");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidConfiguration:
      return kUsage;
    case ErrorKind::kInvalidInput:
    case ErrorKind::kDegenerateInput:
    case ErrorKind::kParse:
      return kInputData;
    case ErrorKind::kSingularSystem:
    case ErrorKind::kSingularB:
    case ErrorKind::kRankDeficientP:
    case ErrorKind::kNoConvergence:
      return kNumerical;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"scattered-data interpolation with radial basis functions", "rbfkit"};
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit an interpolant to a CSV point cloud");
  std::string fit_input;
  std::string fit_output;
  std::string solver = "direct";
  KernelArgs fit_kernel;
  CgOptions cg_opts;
  fit_cmd->add_option("--input", fit_input, "CSV with header x,h | x,y,h | x,y,z,h")->required();
  fit_cmd->add_option("--output", fit_output, "model JSON path")->required();
  fit_kernel.add_to(*fit_cmd);
  fit_cmd->add_option("--solver", solver, "direct | schur | cg")->capture_default_str();
  fit_cmd->add_option("--cg-tol", cg_opts.tol, "CG relative residual tolerance")->capture_default_str();
  fit_cmd->add_option("--cg-max-iter", cg_opts.max_iter, "CG iteration cap (0: 10*N)")
      ->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a fitted model");
  std::string eval_model;
  std::string eval_points;
  std::string eval_grid;
  std::string eval_output;
  eval_cmd->add_option("--model", eval_model, "model JSON")->required();
  auto* points_opt = eval_cmd->add_option("--points", eval_points, "CSV of query points");
  auto* grid_opt = eval_cmd->add_option("--grid", eval_grid, "lo:hi:count[,lo:hi:count...]");
  points_opt->excludes(grid_opt);
  eval_cmd->add_option("--output", eval_output, "output CSV (stdout if omitted)");

  // diagnose
  auto* diag_cmd = app.add_subcommand("diagnose", "conditioning and determinant report");
  std::string diag_input;
  std::string diag_report;
  bool diag_sparse = false;
  KernelArgs diag_kernel;
  diag_cmd->add_option("--input", diag_input, "point CSV")->required();
  diag_kernel.add_to(*diag_cmd);
  diag_cmd->add_flag("--sparse", diag_sparse, "assemble B in compressed rows (compact kernels)");
  diag_cmd->add_option("--report", diag_report, "report JSON (stdout if omitted)");

  // experiment translation
  auto* exp_cmd = app.add_subcommand("experiment", "numerical experiments");
  exp_cmd->require_subcommand(1);
  auto* trans_cmd = exp_cmd->add_subcommand("translation", "conditioning under translation");
  std::string trans_input;
  std::string trans_report;
  std::string trans_offsets = "0,10,100,1000,10000";
  KernelArgs trans_kernel;
  trans_cmd->add_option("--input", trans_input, "point CSV")->required();
  trans_kernel.add_to(*trans_cmd);
  trans_cmd->add_option("--offsets", trans_offsets, "comma-separated offsets, must include 0")
      ->capture_default_str();
  trans_cmd->add_option("--report", trans_report, "report JSON (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream buf;
    const int code = app.exit(e, buf, buf);
    (code == 0 ? out : err) << buf.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fit_cmd->parsed()) {
      FitConfig config;
      config.kernel = fit_kernel.make_kernel();
      config.degree = parse_poly_degree(fit_kernel.degree);
      config.solver = parse_solver_kind(solver);
      config.normalize = !fit_kernel.no_normalize;
      config.cg = cg_opts;
      config.validate();
      const PointCloud cloud = read_points_csv(fit_input);
      const InterpolantModel model = fit(cloud, config);
      write_model_json(model, fit_output);
      out << "fitted " << model.size() << " sites (dim " << model.dim() << ", m "
          << model.poly().size() << ") with " << to_string(model.report().solver)
          << ", residual " << model.report().residual << "\n";
    } else if (eval_cmd->parsed()) {
      if (eval_points.empty() && eval_grid.empty()) {
        throw InvalidConfiguration("eval needs --points or --grid");
      }
      const InterpolantModel model = read_model_json(eval_model);
      if (!eval_grid.empty()) {
        const GridSpec grid = GridSpec::parse(eval_grid);
        emit(format_grid_csv(evaluate_grid(model, grid), grid), eval_output, out);
      } else {
        const Points queries = read_query_csv(eval_points);
        emit(format_points_csv(model.evaluate(queries), queries), eval_output, out);
      }
    } else if (diag_cmd->parsed()) {
      const Kernel kernel = diag_kernel.make_kernel();
      const int degree = parse_poly_degree(diag_kernel.degree);
      if (diag_sparse && !kernel.is_compact()) {
        throw InvalidConfiguration("--sparse requires a wendland kernel");
      }
      const PointCloud cloud = read_points_csv(diag_input);
      const BlockSystem system = prepare_system(
          cloud, kernel, PolyBasis(degree, cloud.dim()),
          SystemOptions{diag_sparse ? Storage::kSparse : Storage::kDense, !diag_kernel.no_normalize});
      emit(to_json(diagnose(system)).dump(2) + "\n", diag_report, out);
    } else if (trans_cmd->parsed()) {
      const Kernel kernel = trans_kernel.make_kernel();
      const int degree = parse_poly_degree(trans_kernel.degree);
      const std::vector<double> offsets = parse_offsets(trans_offsets);
      const PointCloud cloud = read_points_csv(trans_input);
      const auto records =
          translation_experiment(cloud, kernel, PolyBasis(degree, cloud.dim()), offsets);
      emit(to_json(records).dump(2) + "\n", trans_report, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace rbfkit::cli
