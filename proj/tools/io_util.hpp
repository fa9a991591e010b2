#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pseudodrift/drift.hpp"
#include "pseudodrift/geodesy.hpp"

namespace pseudodrift::cli {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Level from PSEUDODRIFT_LOG (error/warn/info/debug), default warn.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

/// Numeric CSV with a header row. Access by column name.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t column_index(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Route CSV with columns week, sow, lat, lon, alt.
Route read_route_csv(const std::filesystem::path& path);

struct GeoFeature {
  std::string name;
  std::vector<GeodeticPosition> line;
};

/// RFC 7946 FeatureCollection of LineStrings, coordinates [lon, lat].
void write_geojson(const std::filesystem::path& path,
                   const std::vector<GeoFeature>& features);

}  // namespace pseudodrift::cli
