#include <doctest.h>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "pseudodrift/ephemeris.hpp"
#include "pseudodrift/errors.hpp"
#include "pseudodrift/rinex.hpp"

using namespace pseudodrift;

namespace {

NavigationData load_fixture_nav() {
  std::ifstream in(std::string(FIXTURE_DIR) + "/g18_table1.rnx");
  REQUIRE(in.good());
  return parse_navigation(in);
}

std::vector<ObservationEpoch> load_fixture_obs() {
  std::ifstream in(std::string(FIXTURE_DIR) + "/obs_sample.rnx");
  REQUIRE(in.good());
  return parse_observation(in);
}

constexpr const char* kEmptyNavHeader =
    "     3.04           N: GNSS NAV DATA    G: GPS              RINEX VERSION / TYPE\n"
    "                                                            END OF HEADER\n";

}  // namespace

TEST_CASE("navigation fixture: block count and iono header") {
  const NavigationData nav = load_fixture_nav();
  CHECK(nav.records.size() == 3);  // two G18 sets and one G07; GLONASS skipped
  REQUIRE(nav.iono.has_value());
  CHECK(nav.iono->alpha[0] == 1.1176e-08);
  CHECK(nav.iono->alpha[3] == -5.9605e-08);
  CHECK(nav.iono->beta[0] == 9.0112e+04);
  CHECK(nav.iono->beta[2] == -1.9661e+05);
}

TEST_CASE("navigation fixture: G18 broadcast set field for field") {
  const NavigationData nav = load_fixture_nav();
  const EphemerisRecord& rec = nav.records.front();
  CHECK(rec.sat_id == "G18");
  CHECK(rec.toc.week == 2270);
  CHECK(rec.toc.sow == 511200.0);
  CHECK(rec.sv_clock_bias == -3.46e-04);
  CHECK(rec.sv_clock_drift == -1.42e-11);
  CHECK(rec.sv_clock_drift_rate == 0.0);
  CHECK(rec.iode == 1.46e+02);
  CHECK(rec.crs == -5.0e+01);
  CHECK(rec.delta_n == 4.37e-09);
  CHECK(rec.m0 == -3.71e-01);
  CHECK(rec.cuc == -2.54e-06);
  CHECK(rec.eccentricity == 3.45e-03);
  CHECK(rec.cus == 1.20e-06);
  CHECK(rec.sqrt_a == 5.15e+03);
  CHECK(rec.toe == 5.11e+05);
  CHECK(rec.cic == 1.30e-08);
  CHECK(rec.omega0 == 1.52e+00);
  CHECK(rec.cis == -7.45e-09);
  CHECK(rec.i0 == 9.74e-01);
  CHECK(rec.crc == 3.60e+02);
  CHECK(rec.omega == 3.13e+00);
  CHECK(rec.omega_dot == -8.27e-09);
  CHECK(rec.idot == 5.04e-11);
  CHECK(rec.codes_l2 == 1.0);
  CHECK(rec.gps_week == 2.27e+03);
  CHECK(rec.l2p_flag == 0.0);
  CHECK(rec.sv_acc == 2.0);
  CHECK(rec.health == 0.0);
  CHECK(rec.tgd == -8.38e-09);
  CHECK(rec.iodc == 4.02e+02);
  CHECK(rec.transmission_time == 5.04e+05);
}

TEST_CASE("every broadcast table row maps to exactly one record field") {
  // Row labels of the navigation data set against their record fields;
  // the mapping must be complete and collision-free.
  using Getter = std::function<const void*(const EphemerisRecord&)>;
  const std::vector<std::pair<std::string, Getter>> rows = {
      {"SatelliteID", [](const EphemerisRecord& r) { return (const void*)&r.sat_id; }},
      {"Time", [](const EphemerisRecord& r) { return (const void*)&r.toc; }},
      {"SVclockBias", [](const EphemerisRecord& r) { return (const void*)&r.sv_clock_bias; }},
      {"SVclockDrift", [](const EphemerisRecord& r) { return (const void*)&r.sv_clock_drift; }},
      {"SVclockDriftRate",
       [](const EphemerisRecord& r) { return (const void*)&r.sv_clock_drift_rate; }},
      {"IODE", [](const EphemerisRecord& r) { return (const void*)&r.iode; }},
      {"Crs", [](const EphemerisRecord& r) { return (const void*)&r.crs; }},
      {"DeltaN", [](const EphemerisRecord& r) { return (const void*)&r.delta_n; }},
      {"M0", [](const EphemerisRecord& r) { return (const void*)&r.m0; }},
      {"Cuc", [](const EphemerisRecord& r) { return (const void*)&r.cuc; }},
      {"Eccentricity",
       [](const EphemerisRecord& r) { return (const void*)&r.eccentricity; }},
      {"Cus", [](const EphemerisRecord& r) { return (const void*)&r.cus; }},
      {"sqrtA", [](const EphemerisRecord& r) { return (const void*)&r.sqrt_a; }},
      {"Toe", [](const EphemerisRecord& r) { return (const void*)&r.toe; }},
      {"Cic", [](const EphemerisRecord& r) { return (const void*)&r.cic; }},
      {"Omega0", [](const EphemerisRecord& r) { return (const void*)&r.omega0; }},
      {"Cis", [](const EphemerisRecord& r) { return (const void*)&r.cis; }},
      {"i0", [](const EphemerisRecord& r) { return (const void*)&r.i0; }},
      {"Crc", [](const EphemerisRecord& r) { return (const void*)&r.crc; }},
      {"omega", [](const EphemerisRecord& r) { return (const void*)&r.omega; }},
      {"OmegaDOT", [](const EphemerisRecord& r) { return (const void*)&r.omega_dot; }},
      {"IDOT", [](const EphemerisRecord& r) { return (const void*)&r.idot; }},
      {"CodesL2", [](const EphemerisRecord& r) { return (const void*)&r.codes_l2; }},
      {"GPSWeek", [](const EphemerisRecord& r) { return (const void*)&r.gps_week; }},
      {"L2PFlag", [](const EphemerisRecord& r) { return (const void*)&r.l2p_flag; }},
      {"Svacc", [](const EphemerisRecord& r) { return (const void*)&r.sv_acc; }},
      {"health", [](const EphemerisRecord& r) { return (const void*)&r.health; }},
      {"TGD", [](const EphemerisRecord& r) { return (const void*)&r.tgd; }},
      {"IODC", [](const EphemerisRecord& r) { return (const void*)&r.iodc; }},
      {"TransmissionTime",
       [](const EphemerisRecord& r) { return (const void*)&r.transmission_time; }},
  };

  const EphemerisRecord probe{};
  std::set<std::string> labels;
  std::set<const void*> fields;
  for (const auto& [label, getter] : rows) {
    labels.insert(label);
    fields.insert(getter(probe));
  }
  CHECK(labels.size() == rows.size());
  CHECK(fields.size() == rows.size());  // no two labels share a field
}

TEST_CASE("navigation parse: zero data blocks is valid") {
  std::stringstream in(kEmptyNavHeader);
  const NavigationData nav = parse_navigation(in);
  CHECK(nav.records.empty());
  CHECK_FALSE(nav.iono.has_value());
}

TEST_CASE("navigation parse: empty stream is EmptyFile") {
  std::stringstream in("");
  CHECK_THROWS_AS(parse_navigation(in), EmptyFile);
}

TEST_CASE("navigation parse: unsupported versions") {
  std::stringstream v2(
      "     2.11           N: GPS NAV DATA                         RINEX VERSION / TYPE\n");
  CHECK_THROWS_AS(parse_navigation(v2), UnsupportedVersion);
  std::stringstream v4(
      "     4.00           N: GNSS NAV DATA    G: GPS              RINEX VERSION / TYPE\n");
  CHECK_THROWS_AS(parse_navigation(v4), UnsupportedVersion);
}

TEST_CASE("navigation parse: malformed float reports the line") {
  std::string text(kEmptyNavHeader);
  text +=
      "G18 2023 07 14 22 00 00-3.460000000000E-04-1.420000000000E-11 0.000000000000E+00\n"
      "     1.460000000000E+02-5.000000000000E+01 4.370000000000Q-09-3.710000000000E-01\n";
  std::stringstream in(text);
  try {
    parse_navigation(in);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord& err) {
    CHECK(err.line == 4);
  }
}

TEST_CASE("observation fixture: epochs, measurements, skip rules") {
  const auto epochs = load_fixture_obs();
  REQUIRE(epochs.size() == 2);  // the event record is skipped

  const ObservationEpoch& first = epochs[0];
  CHECK(first.time.week == 2270);
  CHECK(first.time.sow == doctest::Approx(511200.0));
  REQUIRE(first.measurements.size() == 8);  // G30 blank C1C and R10 omitted

  CHECK(first.measurements[0].sat_id == "G05");
  CHECK(first.measurements[0].pseudorange == 20000123.456);
  REQUIRE(first.measurements[0].carrier_phase.has_value());
  CHECK(*first.measurements[0].carrier_phase == 105123456.789);

  // G13 has a blank L1C field in the fixture.
  CHECK(first.measurements[2].sat_id == "G13");
  CHECK(first.measurements[2].pseudorange == 22345678.901);
  CHECK_FALSE(first.measurements[2].carrier_phase.has_value());

  for (const auto& m : first.measurements) {
    CHECK(m.sat_id != "G30");
    CHECK(m.sat_id != "R10");
    CHECK(m.pseudorange > 0.0);
  }

  const ObservationEpoch& second = epochs[1];
  CHECK(second.measurements.size() == 8);
  CHECK(diff_seconds(second.time, first.time) == doctest::Approx(1.0));
}

TEST_CASE("observation epochs are strictly time ordered") {
  const auto epochs = load_fixture_obs();
  for (std::size_t i = 1; i < epochs.size(); ++i)
    CHECK(diff_seconds(epochs[i].time, epochs[i - 1].time) > 0.0);
}

TEST_CASE("observation satellite ids are unique per epoch") {
  for (const auto& epoch : load_fixture_obs()) {
    std::set<std::string> ids;
    for (const auto& m : epoch.measurements) CHECK(ids.insert(m.sat_id).second);
  }
}

TEST_CASE("observation parse error paths") {
  std::stringstream no_types(
      "     3.04           OBSERVATION DATA    G: GPS              RINEX VERSION / TYPE\n"
      "                                                            END OF HEADER\n");
  CHECK_THROWS_AS(parse_observation(no_types), MissingObsTypesHeader);

  std::stringstream no_c1c(
      "     3.04           OBSERVATION DATA    G: GPS              RINEX VERSION / TYPE\n"
      "G    2 L1C D1C                                              SYS / # / OBS TYPES\n"
      "                                                            END OF HEADER\n");
  CHECK_THROWS_AS(parse_observation(no_c1c), MissingObsTypesHeader);

  std::stringstream bad_epoch(
      "     3.04           OBSERVATION DATA    G: GPS              RINEX VERSION / TYPE\n"
      "G    1 C1C                                                  SYS / # / OBS TYPES\n"
      "                                                            END OF HEADER\n"
      "G05  20000123.456\n");
  CHECK_THROWS_AS(parse_observation(bad_epoch), MalformedEpochHeader);

  std::stringstream nav_not_obs(
      "     3.04           N: GNSS NAV DATA    G: GPS              RINEX VERSION / TYPE\n");
  CHECK_THROWS_AS(parse_observation(nav_not_obs), MalformedRecord);

  std::stringstream v2(
      "     2.11           OBSERVATION DATA    G: GPS              RINEX VERSION / TYPE\n");
  CHECK_THROWS_AS(parse_observation(v2), UnsupportedVersion);

  std::stringstream empty("");
  CHECK_THROWS_AS(parse_observation(empty), EmptyFile);
}

TEST_CASE("navigation write/parse round trip is field exact") {
  const NavigationData nav = load_fixture_nav();
  std::stringstream buffer;
  write_navigation(buffer, nav);
  const NavigationData back = parse_navigation(buffer);

  REQUIRE(back.records.size() == nav.records.size());
  REQUIRE(back.iono.has_value());
  for (int k = 0; k < 4; ++k) {
    CHECK(back.iono->alpha[k] == nav.iono->alpha[k]);
    CHECK(back.iono->beta[k] == nav.iono->beta[k]);
  }
  for (std::size_t i = 0; i < nav.records.size(); ++i) {
    const EphemerisRecord& a = nav.records[i];
    const EphemerisRecord& b = back.records[i];
    CHECK(a.sat_id == b.sat_id);
    CHECK(a.toc.week == b.toc.week);
    CHECK(a.toc.sow == b.toc.sow);
    static const std::vector<double EphemerisRecord::*> fields = {
        &EphemerisRecord::sv_clock_bias, &EphemerisRecord::sv_clock_drift,
        &EphemerisRecord::sv_clock_drift_rate, &EphemerisRecord::iode,
        &EphemerisRecord::crs, &EphemerisRecord::delta_n, &EphemerisRecord::m0,
        &EphemerisRecord::cuc, &EphemerisRecord::eccentricity, &EphemerisRecord::cus,
        &EphemerisRecord::sqrt_a, &EphemerisRecord::toe, &EphemerisRecord::cic,
        &EphemerisRecord::omega0, &EphemerisRecord::cis, &EphemerisRecord::i0,
        &EphemerisRecord::crc, &EphemerisRecord::omega, &EphemerisRecord::omega_dot,
        &EphemerisRecord::idot, &EphemerisRecord::codes_l2, &EphemerisRecord::gps_week,
        &EphemerisRecord::l2p_flag, &EphemerisRecord::sv_acc, &EphemerisRecord::health,
        &EphemerisRecord::tgd, &EphemerisRecord::iodc,
        &EphemerisRecord::transmission_time};
    for (const auto field : fields) CHECK(a.*field == b.*field);
  }
}

TEST_CASE("observation write/parse round trip") {
  const auto epochs = load_fixture_obs();
  std::stringstream buffer;
  write_observation(buffer, epochs);
  const auto back = parse_observation(buffer);
  REQUIRE(back.size() == epochs.size());
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    CHECK(back[i].time.week == epochs[i].time.week);
    CHECK(back[i].time.sow == doctest::Approx(epochs[i].time.sow).epsilon(1e-9));
    REQUIRE(back[i].measurements.size() == epochs[i].measurements.size());
    for (std::size_t m = 0; m < epochs[i].measurements.size(); ++m) {
      CHECK(back[i].measurements[m].sat_id == epochs[i].measurements[m].sat_id);
      CHECK(back[i].measurements[m].pseudorange ==
            epochs[i].measurements[m].pseudorange);
    }
  }
}

TEST_CASE("bundled demo constellation is healthy and visible") {
  std::ifstream in(std::string(FIXTURE_DIR) + "/constellation8.rnx");
  REQUIRE(in.good());
  const NavigationData nav = parse_navigation(in);
  REQUIRE(nav.records.size() == 8);
  REQUIRE(nav.iono.has_value());

  const GeodeticPosition site{33.2098, -87.5692, 70.0};
  const EcefPosition origin = geodetic_to_ecef(site);
  for (const auto& rec : nav.records) {
    CHECK(rec.health == 0.0);
    const EcefPosition sat = satellite_position(rec, rec.toe_time());
    const auto [el, az] = elevation_azimuth(origin, sat);
    CHECK(el > deg2rad(10.0));
    (void)az;
  }
}

TEST_CASE("select_ephemeris picks the nearest toe") {
  EphemerisRecord early;
  early.sat_id = "G18";
  early.toe = 511200.0;
  early.gps_week = 2270.0;
  early.transmission_time = 504000.0;
  early.sqrt_a = 5153.7;
  EphemerisRecord late = early;
  late.toe = 518400.0;

  const std::vector<EphemerisRecord> records{late, early};
  const GpsTime query{2270, 512000.0};
  CHECK(select_ephemeris(records, "G18", query).toe == 511200.0);
}

TEST_CASE("select_ephemeris breaks toe ties by transmission time") {
  EphemerisRecord a;
  a.sat_id = "G09";
  a.toe = 511200.0;
  a.gps_week = 2270.0;
  a.transmission_time = 504000.0;
  a.sqrt_a = 5153.7;
  a.iode = 1.0;
  EphemerisRecord b = a;
  b.transmission_time = 508000.0;
  b.iode = 2.0;

  const std::vector<EphemerisRecord> records{a, b};
  CHECK(select_ephemeris(records, "G09", {2270, 511200.0}).iode == 2.0);
}

TEST_CASE("select_ephemeris gates") {
  EphemerisRecord rec;
  rec.sat_id = "G18";
  rec.toe = 511200.0;
  rec.gps_week = 2270.0;
  rec.sqrt_a = 5153.7;

  SUBCASE("inside the fit window") {
    CHECK_NOTHROW(select_ephemeris({rec}, "G18", {2270, 511200.0 + 3600.0}));
  }
  SUBCASE("stale beyond 7200 s") {
    CHECK_THROWS_AS(select_ephemeris({rec}, "G18", {2270, 511200.0 + 7300.0}),
                    StaleEphemeris);
  }
  SUBCASE("unhealthy satellite") {
    rec.health = 1.0;
    CHECK_THROWS_AS(select_ephemeris({rec}, "G18", {2270, 511200.0}),
                    UnhealthySatellite);
  }
  SUBCASE("unknown satellite") {
    CHECK_THROWS_AS(select_ephemeris({rec}, "G01", {2270, 511200.0}), NoEphemeris);
  }
}

TEST_CASE("select_ephemeris is deterministic") {
  const NavigationData nav = load_fixture_nav();
  const GpsTime t{2270, 514000.0};
  const EphemerisRecord& a = select_ephemeris(nav.records, "G18", t);
  const EphemerisRecord& b = select_ephemeris(nav.records, "G18", t);
  CHECK(&a == &b);
}
