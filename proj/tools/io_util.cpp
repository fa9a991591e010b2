#include "io_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pseudodrift/errors.hpp"

namespace pseudodrift::cli {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PSEUDODRIFT_LOG");
    if (env == nullptr) return LogLevel::warn;
    const std::string value(env);
    if (value == "error") return LogLevel::error;
    if (value == "info") return LogLevel::info;
    if (value == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (level > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], message.c_str());
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw Error("CSV has no column '" + name + "'");
}

namespace {

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + " is empty");
  chomp(line);
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    while (std::getline(fields, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(line_no) +
                    ": unparsable value '" + cell + "'");
      }
    }
    if (row.size() != table.columns.size())
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": expected " + std::to_string(table.columns.size()) + " fields");
    table.rows.push_back(std::move(row));
  }
  return table;
}

Route read_route_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const auto week = table.column_index("week");
  const auto sow = table.column_index("sow");
  const auto lat = table.column_index("lat");
  const auto lon = table.column_index("lon");
  const auto alt = table.column_index("alt");

  Route route;
  for (const auto& row : table.rows) {
    RoutePoint pt;
    pt.time = GpsTime{static_cast<std::int64_t>(row[week]), row[sow]};
    pt.position = GeodeticPosition{row[lat], row[lon], row[alt]};
    route.points.push_back(pt);
  }
  return route;
}

void write_geojson(const std::filesystem::path& path,
                   const std::vector<GeoFeature>& features) {
  nlohmann::json collection;
  collection["type"] = "FeatureCollection";
  collection["features"] = nlohmann::json::array();
  for (const auto& feature : features) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& p : feature.line)
      coords.push_back(nlohmann::json::array({p.lon_deg, p.lat_deg}));
    nlohmann::json item;
    item["type"] = "Feature";
    item["properties"] = {{"name", feature.name}};
    item["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
    collection["features"].push_back(item);
  }
  std::ofstream out(path);
  out << collection.dump(2) << '\n';
}

}  // namespace pseudodrift::cli
