// Walker Delta constellation geometry: circular orbits, one shell,
// Earth-fixed frame. All angles in radians, lengths in kilometers.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fello/errors.hpp"

namespace fello::orbits {

inline constexpr double kEarthGm = 398601.2;                     // km^3/s^2
inline constexpr double kEarthRotationRate = 7.292115856e-5;     // rad/s
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Constant C in the initial-state formulas: standard Walker spacing uses 2π,
// the literal variant uses π.
enum class Phasing { standard, paper_literal };

struct WalkerConfig {
  int n_orbits = 36;
  int sats_per_orbit = 20;
  double inclination = 70.0 * std::numbers::pi / 180.0;
  double altitude_km = 570.0;
  double earth_radius_km = kEarthRadiusKm;
  double earth_rotation_rate = kEarthRotationRate;
  Phasing phasing = Phasing::standard;
  // Reproduces the printed minus sign in the y-component. Breaks the
  // constant-radius property; only meant for fidelity comparisons.
  bool literal_y_sign = false;
  // Replaces sqrt(GM)/R_S^1.5 when set; 0 together with a zero rotation
  // rate freezes the constellation.
  std::optional<double> mean_motion_override;

  double orbit_radius() const { return earth_radius_km + altitude_km; }

  double mean_motion() const {
    if (mean_motion_override) return *mean_motion_override;
    return std::sqrt(kEarthGm) / std::pow(orbit_radius(), 1.5);
  }

  double phasing_constant() const {
    return phasing == Phasing::standard ? kTwoPi : std::numbers::pi;
  }

  int size() const { return n_orbits * sats_per_orbit; }

  void validate() const {
    if (n_orbits < 1) throw DomainError("n_orbits must be >= 1");
    if (sats_per_orbit < 1) throw DomainError("sats_per_orbit must be >= 1");
    if (!(altitude_km > 0.0)) throw DomainError("altitude_km must be > 0");
    if (!(earth_radius_km > 0.0)) throw DomainError("earth_radius_km must be > 0");
    if (!(inclination >= 0.0 && inclination <= std::numbers::pi))
      throw DomainError("inclination must lie in [0, pi]");
  }
};

// 1-based (plane l, slot k).
struct SatIndex {
  int plane = 1;
  int slot = 1;

  auto operator<=>(const SatIndex&) const = default;
};

inline std::string to_string(SatIndex s) {
  return std::to_string(s.plane) + ":" + std::to_string(s.slot);
}

inline bool in_range(const WalkerConfig& cfg, SatIndex s) {
  return s.plane >= 1 && s.plane <= cfg.n_orbits && s.slot >= 1 && s.slot <= cfg.sats_per_orbit;
}

inline void check_index(const WalkerConfig& cfg, SatIndex s) {
  if (!in_range(cfg, s))
    throw IndexError("satellite " + to_string(s) + " outside " + std::to_string(cfg.n_orbits) +
                     "x" + std::to_string(cfg.sats_per_orbit) + " constellation");
}

inline std::size_t linear_index(const WalkerConfig& cfg, SatIndex s) {
  check_index(cfg, s);
  return static_cast<std::size_t>(s.plane - 1) * static_cast<std::size_t>(cfg.sats_per_orbit) +
         static_cast<std::size_t>(s.slot - 1);
}

// Ascending SatIndex order.
inline std::vector<SatIndex> all_satellites(const WalkerConfig& cfg) {
  std::vector<SatIndex> out;
  out.reserve(static_cast<std::size_t>(cfg.size()));
  for (int l = 1; l <= cfg.n_orbits; ++l)
    for (int k = 1; k <= cfg.sats_per_orbit; ++k) out.push_back({l, k});
  return out;
}

struct EcefPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const EcefPosition& o) const { return x * o.x + y * o.y + z * o.z; }
  EcefPosition operator-(const EcefPosition& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

inline double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

inline double initial_anomaly(const WalkerConfig& cfg, SatIndex sat) {
  check_index(cfg, sat);
  const double c = cfg.phasing_constant();
  const double ns = cfg.sats_per_orbit;
  const double no = cfg.n_orbits;
  return (sat.slot - 1) * c / ns + (sat.plane - 1) * c / (ns * no);
}

inline double initial_raan(const WalkerConfig& cfg, int plane) {
  if (plane < 1 || plane > cfg.n_orbits)
    throw IndexError("plane " + std::to_string(plane) + " outside [1, " +
                     std::to_string(cfg.n_orbits) + "]");
  return (plane - 1) * cfg.phasing_constant() / cfg.n_orbits;
}

struct AngularState {
  double raan = 0.0;
  double anomaly = 0.0;
};

// Both angles reduced modulo 2π.
inline AngularState angular_state(const WalkerConfig& cfg, SatIndex sat, double t) {
  if (t < 0.0) throw DomainError("time must be >= 0");
  return {wrap_two_pi(initial_raan(cfg, sat.plane) + cfg.earth_rotation_rate * t),
          wrap_two_pi(initial_anomaly(cfg, sat) + cfg.mean_motion() * t)};
}

// Inclined circular orbit rotated into the Earth-fixed frame.
inline EcefPosition position_from_angles(double radius, double raan, double anomaly,
                                         double inclination, bool literal_y_sign = false) {
  const double cO = std::cos(raan), sO = std::sin(raan);
  const double cw = std::cos(anomaly), sw = std::sin(anomaly);
  const double ci = std::cos(inclination), si = std::sin(inclination);
  const double y = literal_y_sign ? sO * cw - cO * sw * ci : sO * cw + cO * sw * ci;
  return {radius * (cO * cw - sO * sw * ci), radius * y, radius * sw * si};
}

inline EcefPosition position_at(const WalkerConfig& cfg, SatIndex sat, double t) {
  const AngularState a = angular_state(cfg, sat, t);
  return position_from_angles(cfg.orbit_radius(), a.raan, a.anomaly, cfg.inclination,
                              cfg.literal_y_sign);
}

inline double distance(const EcefPosition& a, const EcefPosition& b) { return (a - b).norm(); }

inline double distance(const WalkerConfig& cfg, SatIndex a, SatIndex b, double t) {
  if (a == b) throw DomainError("distance between a satellite and itself");
  return distance(position_at(cfg, a, t), position_at(cfg, b, t));
}

// Spherical Earth, no time dependence.
inline EcefPosition ground_station_position(double lat, double lon,
                                            double earth_radius_km = kEarthRadiusKm) {
  if (std::abs(lat) > std::numbers::pi / 2.0) throw DomainError("|latitude| must be <= pi/2");
  return {earth_radius_km * std::cos(lat) * std::cos(lon),
          earth_radius_km * std::cos(lat) * std::sin(lon), earth_radius_km * std::sin(lat)};
}

// Elevation of `target` above the local horizon at `observer` (spherical
// Earth, local vertical = radial direction).
inline double elevation(const EcefPosition& observer, const EcefPosition& target) {
  const EcefPosition los = target - observer;
  const double s = los.dot(observer) / (los.norm() * observer.norm());
  return std::asin(std::clamp(s, -1.0, 1.0));
}

// Positions of the whole constellation at time t, indexed by linear_index.
inline std::vector<EcefPosition> snapshot(const WalkerConfig& cfg, double t) {
  std::vector<EcefPosition> out;
  out.reserve(static_cast<std::size_t>(cfg.size()));
  for (const SatIndex& s : all_satellites(cfg)) out.push_back(position_at(cfg, s, t));
  return out;
}

}  // namespace fello::orbits
