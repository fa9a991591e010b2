#include "pseudodrift/rinex.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "pseudodrift/errors.hpp"

namespace pseudodrift {

namespace {

// Fixed-column field extraction: RINEX 3 lines are padded or truncated,
// so out-of-range slices read as blank.
std::string slice(const std::string& line, std::size_t begin, std::size_t len) {
  if (begin >= line.size()) return {};
  return line.substr(begin, std::min(len, line.size() - begin));
}

std::string trimmed(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), is_space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), is_space).base(), s.end());
  return s;
}

// RINEX float: blank means zero, 'D' exponents are Fortran spelling.
double parse_field(const std::string& line, std::size_t begin, std::size_t len,
                   int line_no) {
  std::string text = trimmed(slice(line, begin, len));
  if (text.empty()) return 0.0;
  std::replace(text.begin(), text.end(), 'D', 'E');
  std::replace(text.begin(), text.end(), 'd', 'e');
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw MalformedRecord(line_no, "unparsable numeric field '" + text + "'");
  return value;
}

int parse_int(const std::string& line, std::size_t begin, std::size_t len, int line_no,
              bool epoch_header = false) {
  const std::string text = trimmed(slice(line, begin, len));
  try {
    std::size_t pos = 0;
    const int value = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    if (epoch_header)
      throw MalformedEpochHeader(line_no, "unparsable integer field '" + text + "'");
    throw MalformedRecord(line_no, "unparsable integer field '" + text + "'");
  }
}

std::string label_of(const std::string& line) {
  return trimmed(slice(line, 60, 20));
}

struct VersionInfo {
  double version;
  char file_type;
};

VersionInfo parse_version_line(const std::string& line, int line_no) {
  if (label_of(line) != "RINEX VERSION / TYPE")
    throw MalformedRecord(line_no, "missing RINEX VERSION / TYPE header");
  VersionInfo info{};
  info.version = parse_field(line, 0, 9, line_no);
  info.file_type = line.size() > 20 ? line[20] : ' ';
  if (info.version < 3.0 || info.version >= 4.0)
    throw UnsupportedVersion("RINEX version " + trimmed(slice(line, 0, 9)) +
                             " not supported (need 3.00-3.05)");
  return info;
}

bool valid_gps_id(const std::string& id) {
  if (id.size() != 3 || id[0] != 'G') return false;
  if (std::isdigit(static_cast<unsigned char>(id[1])) == 0 ||
      std::isdigit(static_cast<unsigned char>(id[2])) == 0)
    return false;
  const int prn = (id[1] - '0') * 10 + (id[2] - '0');
  return prn >= 1 && prn <= 32;
}

GpsTime parse_epoch_time(const std::string& line, int line_no, std::size_t year_col,
                         bool epoch_header) {
  CivilTime civil;
  civil.year = parse_int(line, year_col, 4, line_no, epoch_header);
  civil.month = parse_int(line, year_col + 5, 2, line_no, epoch_header);
  civil.day = parse_int(line, year_col + 8, 2, line_no, epoch_header);
  civil.hour = parse_int(line, year_col + 11, 2, line_no, epoch_header);
  civil.minute = parse_int(line, year_col + 14, 2, line_no, epoch_header);
  return from_civil(civil);
}

}  // namespace

NavigationData parse_navigation(std::istream& source) {
  std::string line;
  int line_no = 0;
  if (!std::getline(source, line)) throw EmptyFile("navigation file is empty");
  ++line_no;

  const VersionInfo info = parse_version_line(line, line_no);
  if (info.file_type != 'N')
    throw MalformedRecord(line_no, "not a navigation file (type '" +
                                       std::string(1, info.file_type) + "')");

  NavigationData nav;
  IonoCoefficients iono{};
  bool saw_alpha = false;
  bool saw_beta = false;

  // Header.
  for (;;) {
    if (!std::getline(source, line))
      throw MalformedRecord(line_no, "header ends without END OF HEADER");
    ++line_no;
    const std::string label = label_of(line);
    if (label == "END OF HEADER") break;
    if (label == "IONOSPHERIC CORR") {
      const std::string kind = trimmed(slice(line, 0, 4));
      std::array<double, 4>* dest = nullptr;
      if (kind == "GPSA") {
        dest = &iono.alpha;
        saw_alpha = true;
      } else if (kind == "GPSB") {
        dest = &iono.beta;
        saw_beta = true;
      }
      if (dest != nullptr)
        for (int k = 0; k < 4; ++k) (*dest)[k] = parse_field(line, 5 + 12 * k, 12, line_no);
    }
  }
  if (saw_alpha && saw_beta) nav.iono = iono;

  // Data blocks.
  while (std::getline(source, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    if (line[0] != 'G') {
      // Non-GPS block: epoch line plus indented continuation lines.
      while (source.peek() == ' ') {
        std::getline(source, line);
        ++line_no;
      }
      continue;
    }

    EphemerisRecord rec;
    rec.sat_id = slice(line, 0, 3);
    if (!valid_gps_id(rec.sat_id))
      throw MalformedRecord(line_no, "invalid GPS satellite id '" + rec.sat_id + "'");
    rec.toc = parse_epoch_time(line, line_no, 4, false);
    rec.toc.sow += static_cast<double>(parse_int(line, 21, 2, line_no));
    rec.sv_clock_bias = parse_field(line, 23, 19, line_no);
    rec.sv_clock_drift = parse_field(line, 42, 19, line_no);
    rec.sv_clock_drift_rate = parse_field(line, 61, 19, line_no);

    double fields[7][4] = {};
    for (auto& row : fields) {
      if (!std::getline(source, line))
        throw MalformedRecord(line_no, "truncated navigation record for " + rec.sat_id);
      ++line_no;
      for (int k = 0; k < 4; ++k) row[k] = parse_field(line, 4 + 19 * k, 19, line_no);
    }

    rec.iode = fields[0][0];
    rec.crs = fields[0][1];
    rec.delta_n = fields[0][2];
    rec.m0 = fields[0][3];
    rec.cuc = fields[1][0];
    rec.eccentricity = fields[1][1];
    rec.cus = fields[1][2];
    rec.sqrt_a = fields[1][3];
    rec.toe = fields[2][0];
    rec.cic = fields[2][1];
    rec.omega0 = fields[2][2];
    rec.cis = fields[2][3];
    rec.i0 = fields[3][0];
    rec.crc = fields[3][1];
    rec.omega = fields[3][2];
    rec.omega_dot = fields[3][3];
    rec.idot = fields[4][0];
    rec.codes_l2 = fields[4][1];
    rec.gps_week = fields[4][2];
    rec.l2p_flag = fields[4][3];
    rec.sv_acc = fields[5][0];
    rec.health = fields[5][1];
    rec.tgd = fields[5][2];
    rec.iodc = fields[5][3];
    rec.transmission_time = fields[6][0];

    if (rec.eccentricity < 0.0 || rec.eccentricity >= 1.0)
      throw MalformedRecord(line_no, "eccentricity out of range");
    if (rec.sqrt_a <= 0.0) throw MalformedRecord(line_no, "nonpositive sqrt_a");
    if (rec.toe < 0.0 || rec.toe > 604800.0)
      throw MalformedRecord(line_no, "toe outside the GPS week");

    nav.records.push_back(std::move(rec));
  }
  return nav;
}

std::vector<ObservationEpoch> parse_observation(std::istream& source) {
  std::string line;
  int line_no = 0;
  if (!std::getline(source, line)) throw EmptyFile("observation file is empty");
  ++line_no;

  const VersionInfo info = parse_version_line(line, line_no);
  if (info.file_type != 'O')
    throw MalformedRecord(line_no, "not an observation file (type '" +
                                       std::string(1, info.file_type) + "')");

  // Header: collect the GPS observable list.
  std::vector<std::string> gps_types;
  int pending_gps_types = 0;
  for (;;) {
    if (!std::getline(source, line))
      throw MalformedRecord(line_no, "header ends without END OF HEADER");
    ++line_no;
    const std::string label = label_of(line);
    if (label == "END OF HEADER") break;
    if (label != "SYS / # / OBS TYPES") continue;

    int count = 0;
    if (line[0] == 'G') {
      count = pending_gps_types = parse_int(line, 3, 3, line_no);
    } else if (line[0] == ' ' && pending_gps_types > static_cast<int>(gps_types.size())) {
      count = pending_gps_types;
    } else {
      continue;  // another system's observables
    }
    for (int k = 0; k < 13 && static_cast<int>(gps_types.size()) < count; ++k) {
      const std::string type = trimmed(slice(line, 7 + 4 * k, 3));
      if (!type.empty()) gps_types.push_back(type);
    }
  }
  if (gps_types.empty())
    throw MissingObsTypesHeader("no SYS / # / OBS TYPES entry for GPS");

  const auto c1c_it = std::find(gps_types.begin(), gps_types.end(), "C1C");
  if (c1c_it == gps_types.end())
    throw MissingObsTypesHeader("GPS observables do not include C1C");
  const auto c1c_index = static_cast<std::size_t>(c1c_it - gps_types.begin());
  const auto l1c_it = std::find(gps_types.begin(), gps_types.end(), "L1C");
  const std::size_t l1c_index = l1c_it == gps_types.end()
                                    ? std::numeric_limits<std::size_t>::max()
                                    : static_cast<std::size_t>(l1c_it - gps_types.begin());

  std::vector<ObservationEpoch> epochs;
  while (std::getline(source, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    if (line[0] != '>')
      throw MalformedEpochHeader(line_no, "expected '>' epoch record");

    GpsTime time = parse_epoch_time(line, line_no, 2, true);
    try {
      time.sow += parse_field(line, 18, 11, line_no);
    } catch (const MalformedRecord&) {
      throw MalformedEpochHeader(line_no, "unparsable epoch seconds");
    }
    const int flag = parse_int(line, 29, 3, line_no, true);
    const int count = parse_int(line, 32, 3, line_no, true);

    if (flag > 1) {
      // Event record: the count is the number of lines to skip.
      for (int k = 0; k < count && std::getline(source, line); ++k) ++line_no;
      continue;
    }

    ObservationEpoch epoch;
    epoch.time = time;
    std::set<std::string> seen;
    for (int k = 0; k < count; ++k) {
      if (!std::getline(source, line))
        throw MalformedEpochHeader(line_no, "epoch record truncated");
      ++line_no;
      const std::string id = slice(line, 0, 3);
      if (!valid_gps_id(id)) continue;  // other constellations ignored
      if (!seen.insert(id).second) continue;

      const std::string pr_text = trimmed(slice(line, 3 + 16 * c1c_index, 14));
      if (pr_text.empty()) continue;
      const double pr = parse_field(line, 3 + 16 * c1c_index, 14, line_no);
      if (!(pr > 0.0)) continue;

      Measurement m;
      m.sat_id = id;
      m.pseudorange = pr;
      if (l1c_index != std::numeric_limits<std::size_t>::max()) {
        const std::string ph_text = trimmed(slice(line, 3 + 16 * l1c_index, 14));
        if (!ph_text.empty())
          m.carrier_phase = parse_field(line, 3 + 16 * l1c_index, 14, line_no);
      }
      epoch.measurements.push_back(std::move(m));
    }
    epochs.push_back(std::move(epoch));
  }
  return epochs;
}

const EphemerisRecord& select_ephemeris(const std::vector<EphemerisRecord>& records,
                                        const std::string& sat, const GpsTime& t) {
  const EphemerisRecord* best = nullptr;
  double best_dt = std::numeric_limits<double>::infinity();
  for (const auto& rec : records) {
    if (rec.sat_id != sat) continue;
    const double dt = std::abs(diff_seconds(t, rec.toe_time()));
    if (best == nullptr || dt < best_dt ||
        (dt == best_dt && rec.transmission_time > best->transmission_time)) {
      best = &rec;
      best_dt = dt;
    }
  }
  if (best == nullptr) throw NoEphemeris("no ephemeris for " + sat);
  if (best->health != 0.0)
    throw UnhealthySatellite(sat + " health flag " + std::to_string(best->health));
  if (best_dt > ephemeris_fit_window_s)
    throw StaleEphemeris(sat + " nearest toe is " + std::to_string(best_dt) +
                         " s away (limit 7200)");
  return *best;
}

namespace {

void put_field(std::string& line, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%19.12E", value);
  line += buf;
}

std::string epoch_stamp(const GpsTime& t) {
  const CivilTime c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d %02d %02d %02d %02d %02d", c.year, c.month, c.day,
                c.hour, c.minute, static_cast<int>(std::lround(c.second)));
  return buf;
}

void put_header_line(std::ostream& out, std::string content, const std::string& label) {
  content.resize(60, ' ');
  out << content << label << '\n';
}

}  // namespace

void write_navigation(std::ostream& out, const NavigationData& nav) {
  put_header_line(out, "     3.04           N: GNSS NAV DATA    G: GPS",
                  "RINEX VERSION / TYPE");
  put_header_line(out, "pseudodrift         synthetic", "PGM / RUN BY / DATE");
  if (nav.iono) {
    for (const char* kind : {"GPSA", "GPSB"}) {
      const auto& coef = kind[3] == 'A' ? nav.iono->alpha : nav.iono->beta;
      std::string line = kind;
      line += ' ';
      for (double v : coef) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%12.4E", v);
        line += buf;
      }
      put_header_line(out, line, "IONOSPHERIC CORR");
    }
  }
  put_header_line(out, "", "END OF HEADER");

  for (const auto& rec : nav.records) {
    std::string line = rec.sat_id + " " + epoch_stamp(rec.toc);
    put_field(line, rec.sv_clock_bias);
    put_field(line, rec.sv_clock_drift);
    put_field(line, rec.sv_clock_drift_rate);
    out << line << '\n';

    const double rows[7][4] = {
        {rec.iode, rec.crs, rec.delta_n, rec.m0},
        {rec.cuc, rec.eccentricity, rec.cus, rec.sqrt_a},
        {rec.toe, rec.cic, rec.omega0, rec.cis},
        {rec.i0, rec.crc, rec.omega, rec.omega_dot},
        {rec.idot, rec.codes_l2, rec.gps_week, rec.l2p_flag},
        {rec.sv_acc, rec.health, rec.tgd, rec.iodc},
        {rec.transmission_time, 4.0, 0.0, 0.0},
    };
    for (const auto& row : rows) {
      line = "    ";
      for (double v : row) put_field(line, v);
      out << line << '\n';
    }
  }
}

void write_observation(std::ostream& out, const std::vector<ObservationEpoch>& epochs,
                       const std::string& marker_name) {
  put_header_line(out, "     3.04           OBSERVATION DATA    G: GPS",
                  "RINEX VERSION / TYPE");
  put_header_line(out, "pseudodrift         synthetic", "PGM / RUN BY / DATE");
  put_header_line(out, marker_name, "MARKER NAME");
  put_header_line(out, "G    1 C1C", "SYS / # / OBS TYPES");
  if (!epochs.empty()) {
    const CivilTime c = to_civil(epochs.front().time);
    char buf[80];
    std::snprintf(buf, sizeof buf, "  %4d    %2d    %2d    %2d    %2d   %10.7f     GPS",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    put_header_line(out, buf, "TIME OF FIRST OBS");
  }
  put_header_line(out, "", "END OF HEADER");

  for (const auto& epoch : epochs) {
    const CivilTime c = to_civil(epoch.time);
    char buf[64];
    std::snprintf(buf, sizeof buf, "> %04d %02d %02d %02d %02d%11.7f  %1d%3d", c.year,
                  c.month, c.day, c.hour, c.minute, c.second, 0,
                  static_cast<int>(epoch.measurements.size()));
    out << buf << '\n';
    for (const auto& m : epoch.measurements) {
      std::snprintf(buf, sizeof buf, "%3s%14.3f", m.sat_id.c_str(), m.pseudorange);
      out << buf << '\n';
    }
  }
}

}  // namespace pseudodrift
