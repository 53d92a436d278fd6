// Scenario driver: runs every configured architecture at every sweep point
// and writes metrics.csv, the overhead report and a re-runnable manifest.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fello/baselines.hpp"
#include "fello/config.hpp"
#include "fello/dataset.hpp"
#include "fello/overhead.hpp"
#include "fello/simulation.hpp"

namespace fello::scenario {

namespace fs = std::filesystem;
using config::ScenarioConfig;

inline constexpr const char* kMetricsHeader = "# fello-sim metrics v1";
inline constexpr const char* kMetricsColumns =
    "architecture,sweep_value,round,accuracy,loss,cluster_size,reclustered,handover,"
    "mean_snr_db,cumulative_delay_s";

struct Datasets {
  Dataset train;
  Dataset test;
};

// Synthetic blobs are drawn once with train+test rows per class and split,
// so both halves share class centres.
inline Datasets load_datasets(const ScenarioConfig& c) {
  const auto& d = c.dataset;
  if (d.kind == "mnist") {
    return {load_mnist(c.base_dir / d.train_images, c.base_dir / d.train_labels, d.train_limit),
            load_mnist(c.base_dir / d.test_images, c.base_dir / d.test_labels, d.test_limit)};
  }
  BlobSpec spec;
  spec.n_classes = d.classes;
  spec.n_features = d.features;
  spec.samples_per_class = d.train_per_class + d.test_per_class;
  spec.spread = d.spread;
  spec.seed = derive_seed(c.run.master_seed, {tag("data")});
  const Dataset all = synthetic_blobs(spec);
  const std::size_t n_train = d.train_per_class * d.classes;
  std::vector<std::size_t> rest(all.size() - n_train);
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = n_train + i;
  return {all.head(n_train), all.subset(rest)};
}

inline Architecture architecture(const ScenarioConfig& c, const Dataset& train) {
  return {train.n_features, c.train.hidden, train.n_classes};
}

// Per-architecture delay components, in the order fello, cl, dl.
inline std::array<overhead::OverheadReport, 3> overhead_reports(const ScenarioConfig& c,
                                                                const Architecture& arch) {
  if (c.timing.mode == "analytic") {
    overhead::AnalyticInputs a;
    a.arch = arch;
    a.clients = c.timing.clients;
    a.samples_per_client = c.train.samples_per_client;
    a.rounds = c.lesc.rounds;
    a.local_epochs = c.train.local_epochs;
    a.link_rate_bps = c.timing.link_rate_gbps * 1e9;
    a.device_flops = c.timing.device_gflops * 1e9;
    return overhead::report_analytic(a);
  }
  return overhead::report_table2(c.lesc.rounds, c.train.local_epochs);
}

inline std::uint64_t run_seed(std::uint64_t master, overhead::Scheme arch, std::size_t sweep_index) {
  return derive_seed(master, {tag(overhead::to_string(arch)), sweep_index});
}

inline SimulationInputs simulation_inputs(const ScenarioConfig& c, const Datasets& data,
                                          std::uint64_t seed) {
  SimulationInputs in;
  in.net.walker = config::walker(c);
  in.net.isl = config::optics(c.isl);
  in.net.gsl = config::optics(c.gsl);
  in.net.link_seed = derive_seed(seed, {tag("links")});
  in.lesc = config::lesc_config(c);
  in.train = config::train_config(c, seed);
  in.arch = architecture(c, data.train);
  in.corruption = config::corruption(c);
  in.train_data = &data.train;
  in.test_data = &data.test;
  in.samples_per_client = c.train.samples_per_client;
  in.round_interval_s = c.lesc.round_interval_s;
  const auto reports = overhead_reports(c, in.arch);
  in.timing_fello = reports[0].inputs;
  in.timing_cl = reports[1].inputs;
  in.timing_dl = reports[2].inputs;
  in.fixed_total_aggregation = c.train.aggregation == "fixed_total";
  in.seed = seed;
  in.workers = c.run.workers;
  return in;
}

inline std::vector<RoundLog> simulate(overhead::Scheme arch, const SimulationInputs& in) {
  switch (arch) {
    case overhead::Scheme::fello: return run_fello(in);
    case overhead::Scheme::cl: return run_cl(in);
    case overhead::Scheme::dl: return run_dl(in);
  }
  return {};
}

struct SweepPoint {
  std::string label;  // "-" when there is no sweep
  ScenarioConfig config;
};

inline std::vector<SweepPoint> sweep_points(const ScenarioConfig& c) {
  if (c.sweep.parameter.empty()) return {{"-", c}};
  std::vector<SweepPoint> out;
  for (const auto& v : c.sweep.values) {
    ScenarioConfig p = c;
    config::set_value(p, c.sweep.parameter, v);
    config::validate(p);
    out.push_back({v, std::move(p)});
  }
  return out;
}

namespace detail {
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace detail

// CSV rows for one run; cumulative delay restarts at each run.
inline std::string metrics_rows(overhead::Scheme arch, const std::string& sweep_value,
                                const std::vector<RoundLog>& logs) {
  std::ostringstream os;
  double cumulative = 0.0;
  for (const auto& r : logs) {
    cumulative += r.round_delay_s;
    os << overhead::to_string(arch) << ',' << sweep_value << ',' << r.round << ','
       << detail::num(r.accuracy) << ',' << detail::num(r.global_loss) << ',' << r.cluster_size
       << ',' << (r.reclustered ? 1 : 0) << ',' << (r.handover ? 1 : 0) << ','
       << detail::num(r.mean_link_snr_db) << ',' << detail::num(cumulative) << '\n';
  }
  return os.str();
}

inline std::string manifest(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "; Resolved scenario. Run again with: fello_sim run <this file>\n";
  const auto points = sweep_points(c);
  for (const auto arch : config::architectures(c))
    for (std::size_t i = 0; i < points.size(); ++i)
      os << "; seed " << overhead::to_string(arch) << " sweep " << i << " (" << points[i].label
         << ") = " << run_seed(c.run.master_seed, arch, i) << '\n';
  os << config::serialize(c);
  return os.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
  if (!out.flush()) throw Error("write failed for " + p.string());
}

inline void write_overhead(const fs::path& dir, const std::array<overhead::OverheadReport, 3>& r) {
  write_file(dir / "overhead.txt", overhead::format_text(r));
  write_file(dir / "overhead.csv", overhead::format_csv(r));
}

struct RunSummary {
  fs::path output_dir;
  std::size_t rows = 0;
};

// Runs the whole scenario into c.run.output_dir. On any failure a FAILED
// file holding the error is left next to the partial output and the error
// is rethrown.
inline RunSummary run_scenario(const ScenarioConfig& c) {
  config::validate(c);
  const fs::path dir = c.run.output_dir;
  fs::create_directories(dir);
  fs::remove(dir / "FAILED");
  RunSummary summary{dir, 0};
  try {
    write_file(dir / "manifest.ini", manifest(c));
    const auto points = sweep_points(c);
    std::ofstream metrics(dir / "metrics.csv", std::ios::binary);
    if (!metrics) throw Error("cannot write " + (dir / "metrics.csv").string());
    metrics << kMetricsHeader << '\n' << kMetricsColumns << '\n';

    bool overhead_written = false;
    for (const auto arch : config::architectures(c)) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        const ScenarioConfig& pc = points[i].config;
        const Datasets data = load_datasets(pc);
        if (!overhead_written) {
          write_overhead(dir, overhead_reports(pc, architecture(pc, data.train)));
          overhead_written = true;
        }
        const SimulationInputs in = simulation_inputs(pc, data, run_seed(c.run.master_seed, arch, i));
        const auto logs = simulate(arch, in);
        metrics << metrics_rows(arch, points[i].label, logs);
        metrics.flush();
        summary.rows += logs.size();
      }
    }
  } catch (const std::exception& e) {
    std::ofstream(dir / "FAILED") << e.what() << '\n';
    throw;
  }
  return summary;
}

// Overhead report only; needs no data set for the table2 mode.
inline std::array<overhead::OverheadReport, 3> overhead_only(const ScenarioConfig& c) {
  config::validate(c);
  Architecture arch{c.dataset.features, c.train.hidden, c.dataset.classes};
  if (c.dataset.kind == "mnist" && c.timing.mode == "analytic")
    arch = architecture(c, load_datasets(c).train);
  return overhead_reports(c, arch);
}

struct LinkBudget {
  double distance_km = 0.0;
  double gain = 0.0;
  double gain_db = 0.0;
  double path_loss = 0.0;
  double received_power_w = 0.0;
  double shot_noise = 0.0;
  double dark_noise = 0.0;
  double thermal_noise = 0.0;
  double noise_power = 0.0;
  double snr_linear = 0.0;
  double ber = 0.0;
  double rate_bps = 0.0;
};

// Nominal (zero pointing error) ISL budget between two satellites at time t.
inline LinkBudget link_budget(const ScenarioConfig& c, SatIndex from, SatIndex to, double t) {
  config::validate(c);
  const auto w = config::walker(c);
  const auto p = config::optics(c.isl);
  orbits::check_index(w, from);
  orbits::check_index(w, to);
  LinkBudget b;
  b.distance_km = orbits::distance(w, from, to, t);
  b.gain = optical::antenna_gain(p.telescope_diameter_m, p.wavelength_m);
  b.gain_db = optical::linear_to_db(b.gain);
  b.path_loss = optical::path_loss(p.wavelength_m, b.distance_km);
  const auto link = optical::nominal_link(p, b.distance_km);
  b.received_power_w = link.received_power_w;
  b.shot_noise = optical::shot_noise(p, link.received_power_w);
  b.dark_noise = optical::dark_current_noise(p);
  b.thermal_noise = optical::thermal_noise(p);
  b.noise_power = link.noise_power;
  b.snr_linear = link.snr_linear;
  b.ber = link.ber;
  b.rate_bps = link.rate_bps;
  return b;
}

inline std::string format_link_budget(const LinkBudget& b) {
  std::ostringstream os;
  auto row = [&](const char* k, const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-22s", k);
    os << buf;
    std::snprintf(buf, sizeof buf, f, v);
    os << buf << '\n';
  };
  row("distance_km", "%.6f", b.distance_km);
  row("antenna_gain", "%.6e", b.gain);
  row("antenna_gain_db", "%.4f", b.gain_db);
  row("path_loss", "%.6e", b.path_loss);
  row("received_power_w", "%.6e", b.received_power_w);
  row("shot_noise", "%.6e", b.shot_noise);
  row("dark_current_noise", "%.6e", b.dark_noise);
  row("thermal_noise", "%.6e", b.thermal_noise);
  row("noise_power", "%.6e", b.noise_power);
  row("snr_linear", "%.6e", b.snr_linear);
  row("snr_db", "%.4f", optical::linear_to_db(b.snr_linear));
  row("ber", "%.6e", b.ber);
  row("rate_bps", "%.6e", b.rate_bps);
  return os.str();
}

}  // namespace fello::scenario
