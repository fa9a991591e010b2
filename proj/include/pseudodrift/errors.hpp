#pragma once

#include <stdexcept>
#include <string>

namespace pseudodrift {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- RINEX parsing ---

struct UnsupportedVersion : Error {
  using Error::Error;
};

struct MalformedRecord : Error {
  MalformedRecord(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct EmptyFile : Error {
  using Error::Error;
};

struct MalformedEpochHeader : Error {
  MalformedEpochHeader(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct MissingObsTypesHeader : Error {
  using Error::Error;
};

// --- ephemeris selection / evaluation ---

struct NoEphemeris : Error {
  using Error::Error;
};

struct StaleEphemeris : Error {
  using Error::Error;
};

struct UnhealthySatellite : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

// --- geodesy ---

struct DegenerateInput : Error {
  using Error::Error;
};

// --- solver ---

struct InsufficientSatellites : Error {
  using Error::Error;
};

struct SingularGeometry : Error {
  using Error::Error;
};

struct BelowElevationMask : Error {
  using Error::Error;
};

// --- spoof emulation ---

struct SatelliteSetMismatch : Error {
  using Error::Error;
};

struct DegenerateSeries : Error {
  using Error::Error;
};

// --- drift scenarios ---

struct EmptyRoute : Error {
  using Error::Error;
};

struct RouteLengthMismatch : Error {
  using Error::Error;
};

struct CommonSatelliteSetViolation : Error {
  using Error::Error;
};

}  // namespace pseudodrift
