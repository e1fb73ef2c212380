#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rfscape {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kVacuumImpedance = 376.730313668;     // ohm

// Thrown on contract violations at module boundaries (bad shapes, malformed
// files, invalid ray setups). Recoverable conditions use return values.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline double db_from_amplitude(double a) {
  return 20.0 * std::log10(a);
}

inline double amplitude_from_db(double db) {
  return std::pow(10.0, db / 20.0);
}

}  // namespace rfscape
