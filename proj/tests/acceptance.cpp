// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fello/config.hpp"
#include "fello/fedavg.hpp"
#include "fello/lesc.hpp"
#include "fello/mlp.hpp"
#include "fello/optical_link.hpp"
#include "fello/orbits.hpp"
#include "fello/overhead.hpp"
#include "fello/scenario.hpp"

using namespace fello;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using overhead::Scheme;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [x]";
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool rel_within(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- 1: overhead totals ----------------------------------------------------

Outcome table2() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto r = scenario::overhead_only(config::ScenarioConfig{});
  const double elapsed = seconds_since(t0);
  const double want[3] = {2.36, 15.67, 2.35};
  for (int i = 0; i < 3; ++i) {
    const double rounded = std::round(r[i].total_delay_s * 100.0) / 100.0;
    o.check(rounded == want[i], std::string(
            overhead::to_string(r[i].mode)) + "=" + fmt("%.5f", r[i].total_delay_s) + "s");
  }
  o.check(elapsed < 1.0, "runtime " + fmt("%.4f", elapsed) + "s");
  return o;
}

// --- 2: link budget --------------------------------------------------------

Outcome link_values() {
  Outcome o;
  const optical::OpticalParams p = config::optics(config::ScenarioConfig{}.isl);
  const double g = optical::antenna_gain(p.telescope_diameter_m, p.wavelength_m);
  o.check(rel_within(g, 1.5791e10, 1e-4), "G=" + fmt("%.6e", g));
  const double th = optical::thermal_noise(p);
  o.check(rel_within(th, 3.4516e-14, 1e-4), "sigma_th^2=" + fmt("%.6e", th));
  const double pr = optical::received_power(p, 1000.0, 0.0, 0.0);
  o.check(rel_within(pr, 6.823e-8, 1e-3), "P_R(1000km)=" + fmt("%.6e", pr));
  const double lp = optical::pointing_loss(g, p.pointing_sd_rad);
  o.check(rel_within(lp, 0.8675, 1e-3), "L_p(3urad)=" + fmt("%.6f", lp));
  return o;
}

// --- 3: orbit geometry -----------------------------------------------------

Outcome orbit_invariants() {
  Outcome o;
  const auto t0 = Clock::now();
  const orbits::WalkerConfig w = config::walker(config::ScenarioConfig{});
  const double period = 2.0 * std::numbers::pi / w.mean_motion();
  Rng rng(derive_seed(2024, {tag("acceptance-orbits")}));
  double worst_radius = 0.0;
  double worst_period = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const orbits::SatIndex s{1 + static_cast<int>(rng.below(w.n_orbits)),
                             1 + static_cast<int>(rng.below(w.sats_per_orbit))};
    const double t = 86400.0 * rng.uniform();
    const auto pos = orbits::position_at(w, s, t);
    worst_radius = std::max(worst_radius, std::abs(pos.norm() / w.orbit_radius() - 1.0));
    const double a0 = orbits::angular_state(w, s, t).anomaly;
    const double a1 = orbits::angular_state(w, s, t + period).anomaly;
    const double gap = std::abs(std::remainder(a1 - a0, 2.0 * std::numbers::pi));
    worst_period = std::max(worst_period, gap);
  }
  const double elapsed = seconds_since(t0);
  o.check(worst_radius < 1e-9, "max |r|/R-1=" + fmt("%.2e", worst_radius));
  o.check(worst_period < 1e-9, "max anomaly drift=" + fmt("%.2e", worst_period));
  o.check(elapsed < 5.0, "runtime " + fmt("%.3f", elapsed) + "s");
  return o;
}

// --- 4: aggregation and gradient -------------------------------------------

Outcome fl_math() {
  Outcome o;
  const Architecture a{1, 1, 2};
  auto filled = [&](double v) {
    ModelParams m(a);
    std::fill(m.values.begin(), m.values.end(), v);
    return m;
  };
  const std::vector<ClientUpdate> three{{filled(6), 1}, {filled(3), 2}, {filled(2), 3}};
  const ModelParams avg = aggregate(three);
  double worst_avg = 0.0;
  for (double v : avg.values) worst_avg = std::max(worst_avg, std::abs(v - 3.0));
  o.check(worst_avg < 1e-12, "3-client average off by " + fmt("%.1e", worst_avg));

  const Architecture small{3, 4, 3};
  Rng rng(7);
  ModelParams m(small);
  for (double& v : m.values) v = rng.normal();
  Dataset d{3, 3, {}, {}};
  for (int i = 0; i < 6; ++i) {
    for (int f = 0; f < 3; ++f) d.features.push_back(rng.uniform());
    d.labels.push_back(i % 3);
  }
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto grad = batch_gradient(m, d, rows);
  double worst = 0.0;
  const double h = 1e-5;
  for (std::size_t p = 0; p < m.size(); ++p) {
    ModelParams up = m, dn = m;
    up.values[p] += h;
    dn.values[p] -= h;
    const double fd = (local_loss(up, d) - local_loss(dn, d)) / (2.0 * h);
    const double scale = std::max({std::abs(fd), std::abs(grad[p]), 1e-8});
    worst = std::max(worst, std::abs(fd - grad[p]) / scale);
  }
  o.check(worst < 1e-4, "worst FD rel err " + fmt("%.2e", worst) + " over " +
                            std::to_string(m.size()) + " params");
  return o;
}

// --- 5: learning comparison ------------------------------------------------

// About ten clients whose membership churns: rounds are spaced two minutes
// apart so cross-plane neighbours drift out of the distance threshold.
config::ScenarioConfig learning_scenario() {
  config::ScenarioConfig c;
  c.lesc.delta_d_km = 2000.0;
  c.lesc.round_interval_s = 120.0;
  c.lesc.rounds = 40;
  c.lesc.recluster_period = 1;
  c.train.local_epochs = 2;
  c.train.learning_rate = 0.1;
  c.train.hidden = 32;
  c.train.samples_per_client = 20;
  c.dataset.features = 64;
  c.dataset.train_per_class = 200;
  c.dataset.test_per_class = 100;
  c.dataset.spread = 0.4;
  c.corruption.mode = "awgn";
  return c;
}

double final_accuracy(const config::ScenarioConfig& c, Scheme arch, std::uint64_t master,
                      std::size_t* size) {
  const auto data = scenario::load_datasets(c);
  const auto logs = scenario::simulate(
      arch, scenario::simulation_inputs(c, data, scenario::run_seed(master, arch, 0)));
  if (size) *size += logs.back().cluster_size;
  return logs.back().accuracy;
}

Outcome learning() {
  Outcome o;
  const auto t0 = Clock::now();
  config::ScenarioConfig periodic = learning_scenario();
  config::ScenarioConfig never = periodic;
  never.lesc.recluster_period.reset();
  double fello = 0.0, fello_inf = 0.0, dl = 0.0;
  std::size_t sizes = 0;
  const int seeds = 5;
  for (int s = 1; s <= seeds; ++s) {
    periodic.run.master_seed = never.run.master_seed = static_cast<std::uint64_t>(s);
    fello += final_accuracy(periodic, Scheme::fello, s, &sizes) / seeds;
    fello_inf += final_accuracy(never, Scheme::fello, s, nullptr) / seeds;
    dl += final_accuracy(periodic, Scheme::dl, s, nullptr) / seeds;
  }
  const double elapsed = seconds_since(t0);
  o.check(fello - dl >= 0.05,
          "FELLO " + fmt("%.4f", fello) + " vs DL " + fmt("%.4f", dl));
  o.check(fello >= fello_inf, "T_rc=1 " + fmt("%.4f", fello) + " vs T_rc=inf " +
                                  fmt("%.4f", fello_inf));
  o.check(true, "mean final cluster " + fmt("%.1f", static_cast<double>(sizes) / seeds));
  o.check(elapsed < 600.0, "runtime " + fmt("%.1f", elapsed) + "s");
  return o;
}

// --- 6: DL independence from pointing jitter --------------------------------

Outcome dl_pointing_invariance() {
  Outcome o;
  config::ScenarioConfig c = learning_scenario();
  c.lesc.rounds = 15;
  c.lesc.delta_gamma = 57.0;  // dB; roughly the nominal SNR at the 2000 km distance threshold
  std::size_t rows_compared = 0;
  for (const char* mode : {"distance", "snr"}) {
    c.lesc.threshold_mode = mode;
    std::string reference;
    bool same = true;
    for (double sd : {2.0, 3.0, 4.0, 5.0}) {
      c.isl.pointing_sd_urad = sd;
      const auto data = scenario::load_datasets(c);
      const auto in = scenario::simulation_inputs(c, data, scenario::run_seed(1, Scheme::dl, 0));
      const std::string rows =
          scenario::metrics_rows(Scheme::dl, "-", scenario::simulate(Scheme::dl, in));
      if (reference.empty()) {
        reference = rows;
        rows_compared += static_cast<std::size_t>(std::count(rows.begin(), rows.end(), '\n'));
      } else {
        same = same && rows == reference;
      }
    }
    o.check(same, std::string(mode) + " threshold: sigma 2..5 urad identical");
  }
  o.check(rows_compared > 0, std::to_string(rows_compared) + " rows per sigma");
  return o;
}

// --- 7: worker-count independence ------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome worker_invariance() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "fello-acceptance-workers";
  fs::remove_all(root);
  config::ScenarioConfig c = learning_scenario();
  c.lesc.rounds = 8;
  c.sweep.parameter = "isl.pointing_sd_urad";
  c.sweep.values = {"2", "5"};
  std::string reference;
  for (unsigned w : {1u, 2u, 4u}) {
    c.run.workers = w;
    c.run.output_dir = (root / ("w" + std::to_string(w))).string();
    scenario::run_scenario(c);
    const std::string bytes = slurp(fs::path(c.run.output_dir) / "metrics.csv");
    if (reference.empty()) {
      reference = bytes;
      o.check(bytes.size() > 100, std::to_string(bytes.size()) + " bytes");
    } else {
      o.check(bytes == reference, "workers=" + std::to_string(w) + " identical");
    }
  }
  fs::remove_all(root);
  return o;
}

// --- 8: cluster size at the default threshold ------------------------------

Outcome cluster_size() {
  Outcome o;
  const config::ScenarioConfig c;
  lesc::Network net;
  net.walker = config::walker(c);
  net.isl = config::optics(c.isl);
  net.gsl = config::optics(c.gsl);
  const lesc::LescConfig cfg = config::lesc_config(c);
  lesc::ClusterState state;
  state.round = 1;
  lesc::advance_membership(state, net, cfg, lesc::Snapshot(net.walker, 0.0));
  const std::size_t k = state.clients.size();
  o.check(k >= 12 && k <= 24, "K=" + std::to_string(k) + " at delta_d=" +
                                  fmt("%g", c.lesc.delta_d_km) + "km");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 overhead totals", table2},
      {"AC2 link budget values", link_values},
      {"AC3 orbit invariants", orbit_invariants},
      {"AC4 aggregation and gradient", fl_math},
      {"AC5 learning comparison", learning},
      {"AC6 DL pointing invariance", dl_pointing_invariance},
      {"AC7 worker invariance", worker_invariance},
      {"AC8 default cluster size", cluster_size},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
