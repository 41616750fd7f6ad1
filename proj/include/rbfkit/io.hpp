#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rbfkit/diagnostics.hpp"
#include "rbfkit/geometry.hpp"
#include "rbfkit/solve.hpp"

namespace rbfkit {

inline constexpr int kModelSchemaVersion = 1;

// Everything needed to turn a point cloud into a model.
struct FitConfig {
  Kernel kernel{KernelKind::kWendlandC2, 1.0};
  int degree = 1;  // -1: no polynomial tail
  SolverKind solver = SolverKind::kDirect;
  bool normalize = true;
  CgOptions cg;

  // Kernel/tail compatibility, and the CG path's need for a compact kernel.
  void validate() const;
};

InterpolantModel fit(const PointCloud& cloud, const FitConfig& config);

// "none", "0", "1" or "2".
int parse_poly_degree(std::string_view text);

// Header `x,h`, `x,y,h` or `x,y,z,h`; one numeric row per site. Duplicate
// sites are rejected with both line numbers.
PointCloud read_points_csv(const std::filesystem::path& path);
PointCloud parse_points_csv(const std::string& text);

// Query coordinates: header `x`, `x,y` or `x,y,z`, optionally followed by an
// `h` column which is ignored.
Points read_query_csv(const std::filesystem::path& path);
Points parse_query_csv(const std::string& text);

nlohmann::json model_to_json(const InterpolantModel& model);
InterpolantModel model_from_json(const nlohmann::json& doc);
void write_model_json(const InterpolantModel& model, const std::filesystem::path& path);
InterpolantModel read_model_json(const std::filesystem::path& path);

// Coordinate columns followed by `f`, one row per node in row-major order.
std::string format_grid_csv(const Vector& values, const GridSpec& grid);
void write_grid_csv(const Vector& values, const GridSpec& grid, const std::filesystem::path& path);
std::string format_points_csv(const Vector& values, const Points& points);

nlohmann::json to_json(const DiagnosticsReport& report);
nlohmann::json to_json(const std::vector<TranslationRecord>& records);

// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rbfkit
