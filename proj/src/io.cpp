#include "rbfkit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "rbfkit/error.hpp"

namespace rbfkit {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInput("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CsvTable {
  std::vector<std::string_view> header;
  // (line number, cells)
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
};

CsvTable parse_table(std::string_view text, const std::vector<std::vector<std::string>>& headers,
                     const std::string& expected) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!have_header) {
      table.header = split(line);
      bool ok = false;
      for (const auto& h : headers) {
        ok = ok || std::equal(h.begin(), h.end(), table.header.begin(), table.header.end());
      }
      if (!ok) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed header '" +
                         std::string(line) + "', expected " + expected);
      }
      have_header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " columns, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (const std::string_view cell : cells) {
      double v = 0.0;
      const char* first = cell.data();
      if (!cell.empty() && cell.front() == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": non-numeric cell '" +
                         std::string(cell) + "'");
      }
      values.push_back(v);
    }
    table.rows.emplace_back(line_no, std::move(values));
  }
  if (!have_header) {
    throw ParseError("empty file, expected header " + expected);
  }
  if (table.rows.empty()) {
    throw ParseError("no data rows");
  }
  return table;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ParseError("model schema v" + std::to_string(kModelSchemaVersion) +
                     ": missing field '" + key + "'");
  }
  return doc.at(key);
}

std::vector<double> number_array(const json& value, const char* key) {
  if (!value.is_array()) {
    throw ParseError(std::string("model schema v1: '") + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& v : value) {
    if (!v.is_number()) {
      throw ParseError(std::string("model schema v1: '") + key + "' must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

// JSON has no infinity; non-finite reals are written as null.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json det_json(const SignedLogDet& d) {
  return json{{"value", real(d.value())}, {"sign", d.sign}, {"log_abs", real(d.log_abs)}};
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

void FitConfig::validate() const {
  if (degree < -1 || degree > 2) {
    throw InvalidConfiguration("polynomial degree must be none, 0, 1 or 2");
  }
  if (degree < kernel.min_poly_degree()) {
    throw InvalidConfiguration(std::string(to_string(kernel.kind())) +
                               " requires a polynomial tail of degree >= " +
                               std::to_string(kernel.min_poly_degree()));
  }
  if (solver == SolverKind::kCg && !kernel.is_compact()) {
    throw InvalidConfiguration("the cg solver requires a compactly supported (wendland) kernel");
  }
  if (!(cg.tol > 0.0) || cg.max_iter < 0) {
    throw InvalidConfiguration("cg tolerance must be > 0 and max_iter >= 0");
  }
}

InterpolantModel fit(const PointCloud& cloud, const FitConfig& config) {
  config.validate();
  SystemOptions options;
  options.normalize = config.normalize;
  options.storage = config.solver == SolverKind::kCg ? Storage::kSparse : Storage::kDense;
  const BlockSystem system =
      prepare_system(cloud, config.kernel, PolyBasis(config.degree, cloud.dim()), options);
  return solve(system, config.solver, config.cg);
}

int parse_poly_degree(std::string_view text) {
  if (text == "none") return -1;
  if (text == "0") return 0;
  if (text == "1") return 1;
  if (text == "2") return 2;
  throw InvalidConfiguration("polynomial degree must be none, 0, 1 or 2, got '" +
                             std::string(text) + "'");
}

PointCloud parse_points_csv(const std::string& text) {
  static const std::vector<std::vector<std::string>> kHeaders = {
      {"x", "h"}, {"x", "y", "h"}, {"x", "y", "z", "h"}};
  const CsvTable table = parse_table(text, kHeaders, "x,h | x,y,h | x,y,z,h");
  const auto dim = static_cast<Index>(table.header.size() - 1);
  const auto n = static_cast<Index>(table.rows.size());
  Points points(n, dim);
  Vector values(n);
  std::map<std::vector<double>, std::size_t> seen;
  for (Index i = 0; i < n; ++i) {
    const auto& [line_no, cells] = table.rows[static_cast<std::size_t>(i)];
    std::vector<double> key(cells.begin(), cells.end() - 1);
    for (double& v : key) v += 0.0;
    auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      throw DegenerateInput("duplicate point on lines " + std::to_string(it->second) + " and " +
                            std::to_string(line_no));
    }
    for (Index k = 0; k < dim; ++k) points(i, k) = cells[static_cast<std::size_t>(k)];
    values[i] = cells.back();
  }
  return PointCloud(std::move(points), std::move(values));
}

PointCloud read_points_csv(const std::filesystem::path& path) {
  return parse_points_csv(read_text(path));
}

Points parse_query_csv(const std::string& text) {
  static const std::vector<std::vector<std::string>> kHeaders = {
      {"x"}, {"x", "y"}, {"x", "y", "z"}, {"x", "h"}, {"x", "y", "h"}, {"x", "y", "z", "h"}};
  const CsvTable table = parse_table(text, kHeaders, "x[,y[,z]][,h]");
  Index dim = static_cast<Index>(table.header.size());
  if (table.header.back() == "h") --dim;
  Points points(static_cast<Index>(table.rows.size()), dim);
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index k = 0; k < dim; ++k) {
      points(i, k) = table.rows[static_cast<std::size_t>(i)].second[static_cast<std::size_t>(k)];
    }
  }
  return points;
}

Points read_query_csv(const std::filesystem::path& path) { return parse_query_csv(read_text(path)); }

json model_to_json(const InterpolantModel& model) {
  json centers = json::array();
  for (Index i = 0; i < model.centers().rows(); ++i) {
    centers.push_back(std::vector<double>(model.centers().row(i).begin(), model.centers().row(i).end()));
  }
  json fit{{"solver", std::string(to_string(model.report().solver))},
           {"residual", real(model.report().residual)}};
  if (!model.report().cg_iterations.empty()) {
    fit["cg_iterations"] = model.report().cg_iterations;
  }
  return json{
      {"version", kModelSchemaVersion},
      {"kernel", {{"kind", std::string(to_string(model.kernel().kind()))}, {"shape", model.kernel().shape()}}},
      {"dim", model.dim()},
      {"centers", std::move(centers)},
      {"lambda", vector_json(model.lambda())},
      {"poly", {{"degree", model.poly().degree()}, {"coeffs", vector_json(model.poly_coeffs())}}},
      {"normalize",
       {{"center", vector_json(model.transform().center())},
        {"half_extent", model.transform().half_extent()}}},
      {"fit", std::move(fit)}};
}

InterpolantModel model_from_json(const json& doc) {
  if (doc.contains("version") &&
      (!doc.at("version").is_number_integer() || doc.at("version").get<int>() != kModelSchemaVersion)) {
    throw ParseError("model schema: unsupported version " + doc.at("version").dump() +
                     " (this build reads v" + std::to_string(kModelSchemaVersion) + ")");
  }
  try {
    const json& kernel_doc = require(doc, "kernel");
    const json& kind = require(kernel_doc, "kind");
    const json& shape = require(kernel_doc, "shape");
    if (!kind.is_string() || !shape.is_number()) {
      throw ParseError("model schema v1: kernel.kind must be a string and kernel.shape a number");
    }
    const Kernel kernel(parse_kernel_kind(kind.get<std::string>()), shape.get<double>());

    const json& dim_doc = require(doc, "dim");
    if (!dim_doc.is_number_integer()) throw ParseError("model schema v1: 'dim' must be an integer");
    const int dim = dim_doc.get<int>();
    if (dim < 1 || dim > 3) throw ParseError("model schema v1: 'dim' must be 1, 2 or 3");

    const json& centers_doc = require(doc, "centers");
    if (!centers_doc.is_array() || centers_doc.empty()) {
      throw ParseError("model schema v1: 'centers' must be a non-empty array");
    }
    Points centers(static_cast<Index>(centers_doc.size()), dim);
    for (std::size_t i = 0; i < centers_doc.size(); ++i) {
      const auto row = number_array(centers_doc[i], "centers");
      if (row.size() != static_cast<std::size_t>(dim)) {
        throw ParseError("model schema v1: center " + std::to_string(i) + " has " +
                         std::to_string(row.size()) + " coordinates, dim is " + std::to_string(dim));
      }
      for (int k = 0; k < dim; ++k) centers(static_cast<Index>(i), k) = row[static_cast<std::size_t>(k)];
    }
    const Vector lambda = to_vector(number_array(require(doc, "lambda"), "lambda"));

    const json& poly_doc = require(doc, "poly");
    const json& degree = require(poly_doc, "degree");
    if (!degree.is_number_integer()) throw ParseError("model schema v1: poly.degree must be an integer");
    const Vector coeffs = to_vector(number_array(require(poly_doc, "coeffs"), "poly.coeffs"));

    const json& norm_doc = require(doc, "normalize");
    const Vector center = to_vector(number_array(require(norm_doc, "center"), "normalize.center"));
    const json& half = require(norm_doc, "half_extent");
    if (!half.is_number()) throw ParseError("model schema v1: normalize.half_extent must be a number");

    const json& fit_doc = require(doc, "fit");
    FitReport report;
    const json& solver = require(fit_doc, "solver");
    if (!solver.is_string()) throw ParseError("model schema v1: fit.solver must be a string");
    report.solver = parse_solver_kind(solver.get<std::string>());
    const json& residual = require(fit_doc, "residual");
    report.residual = residual.is_number() ? residual.get<double>()
                                           : std::numeric_limits<double>::quiet_NaN();
    if (fit_doc.contains("cg_iterations")) {
      report.cg_iterations = fit_doc.at("cg_iterations").get<std::vector<int>>();
    }
    return InterpolantModel(kernel, degree.get<int>(), std::move(centers), lambda, coeffs,
                            NormalizeTransform(center, half.get<double>()), std::move(report));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("model schema v1: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("model schema v1: ") + e.what());
  }
}

void write_model_json(const InterpolantModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_json(model).dump(2) + "\n");
}

InterpolantModel read_model_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("model schema v1: invalid JSON in '" + path.string() + "': " + e.what());
  }
  return model_from_json(doc);
}

std::string format_points_csv(const Vector& values, const Points& points) {
  if (values.size() != points.rows()) {
    throw InvalidInput("values length " + std::to_string(values.size()) + " does not match " +
                       std::to_string(points.rows()) + " nodes");
  }
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  std::string out;
  for (Index k = 0; k < points.cols(); ++k) {
    out += kAxis[k];
    out += ',';
  }
  out += "f\n";
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index k = 0; k < points.cols(); ++k) {
      out += format_double(points(i, k));
      out += ',';
    }
    out += format_double(values[i]);
    out += '\n';
  }
  return out;
}

std::string format_grid_csv(const Vector& values, const GridSpec& grid) {
  if (values.size() != grid.node_count()) {
    throw InvalidInput("grid has " + std::to_string(grid.node_count()) + " nodes but " +
                       std::to_string(values.size()) + " values were given");
  }
  return format_points_csv(values, grid.nodes());
}

void write_grid_csv(const Vector& values, const GridSpec& grid, const std::filesystem::path& path) {
  write_file_atomic(path, format_grid_csv(values, grid));
}

json to_json(const DiagnosticsReport& report) {
  json doc{{"n", report.n},
           {"m", report.m},
           {"cond_full", real(report.cond_full)},
           {"cond_B", real(report.cond_b)},
           {"det_PtP", det_json(report.det_ptp)},
           {"max_ptp_entry", real(report.max_ptp_entry)},
           {"side_defect", vector_json(report.side_defect)},
           {"residual", real(report.residual)},
           {"status", report.status},
           {"nnz_fraction", report.nnz_fraction}};
  if (report.determinants) {
    const DeterminantReport& d = *report.determinants;
    doc["det_B"] = det_json(d.det_b);
    doc["det_full"] = det_json(d.det_full);
    doc["det_schur"] = d.det_schur ? det_json(*d.det_schur) : json(nullptr);
    doc["det_identity_rel_error"] = real(d.identity_rel_error);
  }
  if (report.sparsity) {
    const SparsityReport& s = *report.sparsity;
    doc["sparsity"] = {{"nnz", s.nnz},
                       {"nnz_fraction", s.nnz_fraction},
                       {"mean_neighbors", s.mean_neighbors},
                       {"bandwidth", s.bandwidth},
                       {"sparse_bytes", s.sparse_bytes},
                       {"dense_bytes", s.dense_bytes}};
  }
  return doc;
}

json to_json(const std::vector<TranslationRecord>& records) {
  json out = json::array();
  for (const TranslationRecord& r : records) {
    out.push_back({{"offset", r.offset},
                   {"cond_raw", real(r.cond_raw)},
                   {"cond_normalized", real(r.cond_normalized)},
                   {"det_ptp", real(r.det_ptp.value())},
                   {"log_abs_det_ptp", real(r.det_ptp.log_abs)},
                   {"max_ptp_entry", real(r.max_ptp_entry)},
                   {"residual", real(r.residual)},
                   {"status", r.status}});
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InvalidInput("cannot write '" + tmp.string() + "'");
    }
    out << content;
    out.flush();
    if (!out) {
      throw InvalidInput("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidInput("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

}  // namespace rbfkit
