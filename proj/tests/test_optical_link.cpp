#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fello/optical_link.hpp"

using namespace fello;
using namespace fello::optical;

namespace {

// Oracle values evaluated independently from the closed forms.
constexpr double kGain = 15791367041.74;
constexpr double kThermal = 3.4516225e-14;
constexpr double kDark = 4.005441585e-19;
constexpr double kPr1000 = 6.82187e-8;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Gain, Values) {
  EXPECT_LT(rel(antenna_gain(0.06, 1500e-9), kGain), 1e-10);
  EXPECT_NEAR(linear_to_db(antenna_gain(0.06, 1500e-9)), 101.98, 0.01);
  EXPECT_NEAR(antenna_gain(1500e-9 / std::numbers::pi, 1500e-9), 1.0, 1e-12);
  EXPECT_NEAR(antenna_gain(0.12, 1500e-9) / antenna_gain(0.06, 1500e-9), 4.0, 1e-12);
}

TEST(PointingLoss, Values) {
  EXPECT_EQ(pointing_loss(kGain, 0.0), 1.0);
  EXPECT_LT(rel(pointing_loss(kGain, 3e-6), 0.86751515), 1e-7);
  double prev = 1.0;
  for (double th = 1e-7; th < 1e-5; th += 1e-7) {
    const double l = pointing_loss(kGain, th);
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(Rayleigh, QuantileAndMoments) {
  EXPECT_EQ(rayleigh_quantile(3e-6, 0.0), 0.0);
  Rng rng(2024);
  const double sigma = 3e-6;
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  std::vector<int> hist(200, 0);
  const double width = 6 * sigma / 200.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_pointing_error(sigma, rng);
    sum += x;
    sum2 += x * x;
    const auto b = static_cast<std::size_t>(x / width);
    if (b < hist.size()) ++hist[b];
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_LT(rel(mean, sigma * std::sqrt(std::numbers::pi / 2.0)), 0.01);
  EXPECT_LT(rel(var, (4.0 - std::numbers::pi) / 2.0 * sigma * sigma), 0.01);
  // Histogram peak: smooth with a 9-bin window before locating the mode.
  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 4; i + 4 < hist.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i - 4; j <= i + 4; ++j) s += hist[j];
    if (s > best) {
      best = s;
      best_i = i;
    }
  }
  EXPECT_LT(rel((best_i + 0.5) * width, sigma), 0.02);
}

TEST(PathLoss, Values) {
  EXPECT_LT(rel(path_loss(1500e-9, 2000.0), 3.56207e-27), 1e-5);
  EXPECT_LT(rel(path_loss(1500e-9, 1000.0), 1.424829e-26), 1e-6);
  EXPECT_NEAR(path_loss(1500e-9, 500.0) / path_loss(1500e-9, 1000.0), 4.0, 1e-12);
  EXPECT_THROW(path_loss(1500e-9, 0.0), DomainError);
  EXPECT_THROW(path_loss(1500e-9, -3.0), DomainError);
}

TEST(ReceivedPower, Values) {
  const OpticalParams p;
  const double pr = received_power(p, 1000.0, 0.0, 0.0);
  EXPECT_LT(rel(pr, 0.03 * 0.64 * kGain * kGain * 1.424829e-26), 1e-6);
  EXPECT_LT(rel(pr, kPr1000), 1e-5);
  EXPECT_LT(rel(pr, 6.823e-8), 1e-3);
  EXPECT_NEAR(received_power(p, 1000.0, 3e-6, 3e-6) / pr, 0.86751515 * 0.86751515, 1e-7);
  EXPECT_LT(received_power(p, 1e12, 0.0, 0.0), 1e-25);
}

TEST(Noise, Values) {
  const OpticalParams p;
  EXPECT_LT(rel(thermal_noise(p), kThermal), 1e-7);
  EXPECT_LT(rel(dark_current_noise(p), kDark), 1e-9);
  EXPECT_DOUBLE_EQ(noise_power(p, 0.0), dark_current_noise(p) + thermal_noise(p));
  EXPECT_GE(noise_power(p, 1e-3), thermal_noise(p));
}

TEST(Snr, Values) {
  const OpticalParams p;
  EXPECT_EQ(snr(2.5e-9, 2.5e-9), 1.0);
  EXPECT_THROW(snr(1.0, 0.0), DomainError);
  const auto s = nominal_link(p, 1000.0);
  EXPECT_LT(rel(s.snr_linear, 1.97546e6), 1e-4);
  EXPECT_NEAR(s.snr_db(), 62.96, 0.01);
  OpticalParams e = p;
  e.snr_form = SnrForm::electrical;
  const auto se = nominal_link(e, 1000.0);
  const double ip = 0.6007 * se.received_power_w;
  EXPECT_DOUBLE_EQ(se.snr_linear, ip * ip / se.noise_power);
  double prev = INFINITY;
  for (double d = 200.0; d < 6000.0; d += 200.0) {
    const double g = nominal_link(p, d).snr_linear;
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(Ber, OokAndFixed) {
  EXPECT_DOUBLE_EQ(ber(0.0), 0.5);
  EXPECT_LT(ber(1e4), 1e-100);
  EXPECT_NEAR(ber(4.0), 0.02275013, 1e-8);
  EXPECT_EQ(ber(123.0, BerModel::fixed(1e-6)), 1e-6);
  double prev = 0.5;
  for (double g = 0.0; g < 50.0; g += 0.5) {
    const double b = ber(g);
    EXPECT_LE(b, prev);
    EXPECT_LE(b, 0.5);
    prev = b;
  }
}

TEST(Rate, Values) {
  const OpticalParams p;
  EXPECT_DOUBLE_EQ(achievable_rate(p, 1.0, 0.0), 1.25e9);
  EXPECT_EQ(achievable_rate(p, 7.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(achievable_rate(p, 3.0, 0.5), 1.25e9);
  EXPECT_THROW(achievable_rate(p, 1.0, 1.5), DomainError);
}

TEST(Link, SamplingProperties) {
  OpticalParams p;
  Rng a(7), b(7);
  const auto s1 = evaluate_link(p, 1500.0, a);
  const auto s2 = evaluate_link(p, 1500.0, b);
  EXPECT_EQ(s1.snr_linear, s2.snr_linear);
  EXPECT_EQ(s1.theta_t_rad, s2.theta_t_rad);

  p.pointing_sd_rad = 1e-15;
  Rng c(1);
  EXPECT_LT(rel(evaluate_link(p, 1000.0, c).snr_linear, nominal_link(p, 1000.0).snr_linear), 1e-9);

  OpticalParams q;
  Rng r(8);
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto s = evaluate_link(q, 1000.0, r);
    EXPECT_LE(s.received_power_w, q.tx_power_w);
    EXPECT_GT(s.received_power_w, 0.0);
    EXPECT_GE(s.noise_power, thermal_noise(q));
    mean += s.snr_linear / n;
  }
  EXPECT_LE(mean, nominal_link(q, 1000.0).snr_linear);
}

TEST(Params, Validation) {
  OpticalParams p;
  EXPECT_NO_THROW(p.validate());
  p.tx_efficiency = 1.2;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.wavelength_m = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.ber_model = BerModel::fixed(2.0);
  EXPECT_THROW(p.validate(), DomainError);
}
