// Free-space optical link budget for inter-satellite links.
//
// Received power follows the classic product of transmit power, optical
// efficiencies, telescope gains, pointing losses and free-space path loss.
// Noise is the sum of shot, dark-current and thermal variances. Distances are
// kilometers at the interface and meters internally.
#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "fello/errors.hpp"
#include "fello/random.hpp"

namespace fello::optical {

inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K

// literal: gamma = P_R / P_N (optical watts over current variance).
// electrical: gamma = (R_p P_R)^2 / P_N (photocurrent power over noise).
enum class SnrForm { literal, electrical };

struct BerModel {
  enum class Kind { ook, fixed };
  Kind kind = Kind::ook;
  double constant = 0.0;  // used by Kind::fixed

  static BerModel ook() { return {}; }
  static BerModel fixed(double c) { return {Kind::fixed, c}; }
};

struct OpticalParams {
  double wavelength_m = 1500e-9;
  double bandwidth_hz = 1.25e9;
  double tx_power_w = 30e-3;
  double tx_efficiency = 0.8;
  double rx_efficiency = 0.8;
  double telescope_diameter_m = 0.06;
  double pointing_sd_rad = 3e-6;
  double responsivity_a_per_w = 0.6007;
  double dark_current_a = 1e-9;
  double noise_temp_k = 500.0;
  double load_resistance_ohm = 1000.0;
  double electron_charge_c = kElectronCharge;
  double boltzmann_j_per_k = kBoltzmann;
  SnrForm snr_form = SnrForm::literal;
  BerModel ber_model{};

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be > 0");
    };
    positive(wavelength_m, "wavelength_m");
    positive(bandwidth_hz, "bandwidth_hz");
    positive(tx_power_w, "tx_power_w");
    positive(tx_efficiency, "tx_efficiency");
    positive(rx_efficiency, "rx_efficiency");
    positive(telescope_diameter_m, "telescope_diameter_m");
    positive(pointing_sd_rad, "pointing_sd_rad");
    positive(responsivity_a_per_w, "responsivity_a_per_w");
    positive(dark_current_a, "dark_current_a");
    positive(noise_temp_k, "noise_temp_k");
    positive(load_resistance_ohm, "load_resistance_ohm");
    positive(electron_charge_c, "electron_charge_c");
    positive(boltzmann_j_per_k, "boltzmann_j_per_k");
    if (tx_efficiency > 1.0) throw DomainError("tx_efficiency must be <= 1");
    if (rx_efficiency > 1.0) throw DomainError("rx_efficiency must be <= 1");
    if (ber_model.kind == BerModel::Kind::fixed &&
        !(ber_model.constant >= 0.0 && ber_model.constant <= 1.0))
      throw DomainError("fixed BER must lie in [0, 1]");
  }
};

struct LinkSample {
  double distance_km = 0.0;
  double theta_t_rad = 0.0;
  double theta_r_rad = 0.0;
  double received_power_w = 0.0;
  double noise_power = 0.0;
  double snr_linear = 0.0;
  double ber = 0.5;
  double rate_bps = 0.0;

  double snr_db() const { return 10.0 * std::log10(snr_linear); }
};

inline double antenna_gain(double diameter_m, double wavelength_m) {
  const double r = std::numbers::pi * diameter_m / wavelength_m;
  return r * r;
}

inline double pointing_loss(double gain, double theta_rad) {
  return std::exp(-gain * theta_rad * theta_rad);
}

// Inverse Rayleigh CDF; u in [0, 1).
inline double rayleigh_quantile(double sigma, double u) {
  return sigma * std::sqrt(-2.0 * std::log1p(-u));
}

inline double sample_pointing_error(double sigma_rad, Rng& rng) {
  return rayleigh_quantile(sigma_rad, rng.uniform());
}

inline double path_loss(double wavelength_m, double distance_km) {
  if (!(distance_km > 0.0)) throw DomainError("link distance must be > 0");
  const double r = wavelength_m / (4.0 * std::numbers::pi * distance_km * 1000.0);
  return r * r;
}

inline double received_power(const OpticalParams& p, double distance_km, double theta_t,
                             double theta_r) {
  const double g = antenna_gain(p.telescope_diameter_m, p.wavelength_m);
  return p.tx_power_w * p.tx_efficiency * p.rx_efficiency * g * g * pointing_loss(g, theta_t) *
         pointing_loss(g, theta_r) * path_loss(p.wavelength_m, distance_km);
}

inline double shot_noise(const OpticalParams& p, double received_w) {
  return 2.0 * p.electron_charge_c * p.responsivity_a_per_w * received_w * p.bandwidth_hz;
}

inline double dark_current_noise(const OpticalParams& p) {
  return 2.0 * p.electron_charge_c * p.dark_current_a * p.bandwidth_hz;
}

inline double thermal_noise(const OpticalParams& p) {
  return 4.0 * p.boltzmann_j_per_k * p.noise_temp_k * p.bandwidth_hz / p.load_resistance_ohm;
}

inline double noise_power(const OpticalParams& p, double received_w) {
  return shot_noise(p, received_w) + dark_current_noise(p) + thermal_noise(p);
}

inline double snr(double received_w, double noise) {
  if (!(noise > 0.0)) throw DomainError("noise power must be > 0");
  return received_w / noise;
}

inline double snr(const OpticalParams& p, double received_w, double noise) {
  if (p.snr_form == SnrForm::literal) return snr(received_w, noise);
  const double current = p.responsivity_a_per_w * received_w;
  return snr(current * current, noise);
}

// On-off keying: Q(sqrt(gamma)).
inline double ber(double gamma, const BerModel& model = {}) {
  if (model.kind == BerModel::Kind::fixed) return model.constant;
  if (gamma < 0.0) throw DomainError("snr must be >= 0");
  return 0.5 * std::erfc(std::sqrt(gamma / 2.0));
}

inline double achievable_rate(const OpticalParams& p, double gamma, double bit_error) {
  if (gamma < 0.0) throw DomainError("snr must be >= 0");
  if (!(bit_error >= 0.0 && bit_error <= 1.0)) throw DomainError("BER must lie in [0, 1]");
  return (1.0 - bit_error) * p.bandwidth_hz * std::log2(1.0 + gamma);
}

// Link with given pointing errors.
inline LinkSample evaluate_link(const OpticalParams& p, double distance_km, double theta_t,
                                double theta_r) {
  LinkSample s;
  s.distance_km = distance_km;
  s.theta_t_rad = theta_t;
  s.theta_r_rad = theta_r;
  s.received_power_w = received_power(p, distance_km, theta_t, theta_r);
  s.noise_power = noise_power(p, s.received_power_w);
  s.snr_linear = snr(p, s.received_power_w, s.noise_power);
  s.ber = ber(s.snr_linear, p.ber_model);
  s.rate_bps = achievable_rate(p, s.snr_linear, s.ber);
  return s;
}

// Transmit error drawn first, then receive error.
inline LinkSample evaluate_link(const OpticalParams& p, double distance_km, Rng& rng) {
  const double theta_t = sample_pointing_error(p.pointing_sd_rad, rng);
  const double theta_r = sample_pointing_error(p.pointing_sd_rad, rng);
  return evaluate_link(p, distance_km, theta_t, theta_r);
}

inline LinkSample nominal_link(const OpticalParams& p, double distance_km) {
  return evaluate_link(p, distance_km, 0.0, 0.0);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace fello::optical
