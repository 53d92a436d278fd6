// Scenario configuration: an INI file with one section per subsystem.
//
// Values are kept in the units they are written in (degrees, microradians,
// dB, ...) so that serialize(load(x)) reproduces x exactly; the accessors at
// the bottom convert to the SI structs the simulator consumes. Every key has
// a default mirroring the reference deployment, so an empty file is a
// complete scenario. Comments are whole lines starting with ';' or '#'.
#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fello/errors.hpp"
#include "fello/fedavg.hpp"
#include "fello/lesc.hpp"
#include "fello/mlp.hpp"
#include "fello/optical_link.hpp"
#include "fello/orbits.hpp"
#include "fello/overhead.hpp"

namespace fello::config {

// --- scalar codecs --------------------------------------------------------

namespace codec {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shortest decimal that parses back to the same double.
inline std::string format(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
inline std::string format(int v) { return std::to_string(v); }
inline std::string format(std::size_t v) { return std::to_string(v); }
inline std::string format(unsigned v) { return std::to_string(v); }
inline std::string format(bool v) { return v ? "true" : "false"; }
inline std::string format(const std::string& v) { return v; }
inline std::string format(const std::optional<double>& v) { return v ? format(*v) : "auto"; }
inline std::string format(const std::optional<int>& v) { return v ? format(*v) : "inf"; }
inline std::string format(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || s.empty())
    throw std::invalid_argument("'" + s + "' is not a valid number");
  return v;
}

inline void parse(const std::string& s, double& v) { v = parse_number<double>(s); }
inline void parse(const std::string& s, int& v) { v = parse_number<int>(s); }
inline void parse(const std::string& s, std::size_t& v) { v = parse_number<std::size_t>(s); }
inline void parse(const std::string& s, unsigned& v) { v = parse_number<unsigned>(s); }
inline void parse(const std::string& s, bool& v) {
  if (s == "true") v = true;
  else if (s == "false") v = false;
  else throw std::invalid_argument("'" + s + "' is not true/false");
}
inline void parse(const std::string& s, std::string& v) { v = s; }
inline void parse(const std::string& s, std::optional<double>& v) {
  if (s == "auto") v.reset();
  else v = parse_number<double>(s);
}
inline void parse(const std::string& s, std::optional<int>& v) {
  if (s == "inf" || s == "infinity") v.reset();
  else v = parse_number<int>(s);
}
inline void parse(const std::string& s, std::vector<std::string>& v) {
  v.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) v.push_back(item);
  }
}

}  // namespace codec

// --- sections -------------------------------------------------------------

struct ConstellationSection {
  int n_orbits = 36;
  int sats_per_orbit = 20;
  double inclination_deg = 70.0;
  double altitude_km = 570.0;
  double earth_radius_km = orbits::kEarthRadiusKm;
  double earth_rotation_rate = orbits::kEarthRotationRate;
  std::string phasing = "standard";  // standard | paper_literal
  std::string y_sign = "standard";   // standard | paper_literal
  std::optional<double> mean_motion;  // rad/s, auto = from altitude

  template <typename F>
  void visit(F&& f) {
    f("n_orbits", n_orbits);
    f("sats_per_orbit", sats_per_orbit);
    f("inclination_deg", inclination_deg);
    f("altitude_km", altitude_km);
    f("earth_radius_km", earth_radius_km);
    f("earth_rotation_rate", earth_rotation_rate);
    f("phasing", phasing);
    f("y_sign", y_sign);
    f("mean_motion", mean_motion);
  }
  bool operator==(const ConstellationSection&) const = default;
};

struct OpticsSection {
  double wavelength_nm = 1500.0;
  double bandwidth_ghz = 1.25;
  double tx_power_mw = 30.0;
  double tx_efficiency = 0.8;
  double rx_efficiency = 0.8;
  double telescope_diameter_mm = 60.0;
  double pointing_sd_urad = 3.0;
  double responsivity = 0.6007;
  double dark_current_na = 1.0;
  double noise_temp_k = 500.0;
  double load_resistance_ohm = 1000.0;
  std::string snr_form = "literal";  // literal | electrical
  std::string ber = "ook";           // ook | fixed
  double ber_fixed = 0.0;

  template <typename F>
  void visit(F&& f) {
    f("wavelength_nm", wavelength_nm);
    f("bandwidth_ghz", bandwidth_ghz);
    f("tx_power_mw", tx_power_mw);
    f("tx_efficiency", tx_efficiency);
    f("rx_efficiency", rx_efficiency);
    f("telescope_diameter_mm", telescope_diameter_mm);
    f("pointing_sd_urad", pointing_sd_urad);
    f("responsivity", responsivity);
    f("dark_current_na", dark_current_na);
    f("noise_temp_k", noise_temp_k);
    f("load_resistance_ohm", load_resistance_ohm);
    f("snr_form", snr_form);
    f("ber", ber);
    f("ber_fixed", ber_fixed);
  }
  bool operator==(const OpticsSection&) const = default;
};

struct LescSection {
  std::string threshold_mode = "distance";  // distance | snr
  double delta_d_km = 2600.0;
  double delta_gamma = 20.0;
  std::string delta_gamma_units = "db";  // db | linear
  std::optional<int> recluster_period = 1;
  double recluster_fraction = 0.7;
  double gsl_snr_threshold_db = 20.0;
  int rounds = 40;
  double gs_lat_deg = 25.0;
  double gs_lon_deg = 121.0;
  double min_elevation_deg = 10.0;
  std::optional<double> round_interval_s;  // auto = FELLO per-round delay

  template <typename F>
  void visit(F&& f) {
    f("threshold_mode", threshold_mode);
    f("delta_d_km", delta_d_km);
    f("delta_gamma", delta_gamma);
    f("delta_gamma_units", delta_gamma_units);
    f("recluster_period", recluster_period);
    f("recluster_fraction", recluster_fraction);
    f("gsl_snr_threshold_db", gsl_snr_threshold_db);
    f("rounds", rounds);
    f("gs_lat_deg", gs_lat_deg);
    f("gs_lon_deg", gs_lon_deg);
    f("min_elevation_deg", min_elevation_deg);
    f("round_interval_s", round_interval_s);
  }
  bool operator==(const LescSection&) const = default;
};

struct TrainSection {
  double learning_rate = 0.05;
  int local_epochs = 2;
  std::size_t batch_size = 32;
  std::size_t hidden = 64;
  std::size_t samples_per_client = 2208;
  std::string aggregation = "participating";  // participating | fixed_total

  template <typename F>
  void visit(F&& f) {
    f("learning_rate", learning_rate);
    f("local_epochs", local_epochs);
    f("batch_size", batch_size);
    f("hidden", hidden);
    f("samples_per_client", samples_per_client);
    f("aggregation", aggregation);
  }
  bool operator==(const TrainSection&) const = default;
};

struct CorruptionSection {
  std::string mode = "awgn";  // none | awgn | packet
  double kappa = 1.0;
  std::size_t packet_bits = 1024;

  template <typename F>
  void visit(F&& f) {
    f("mode", mode);
    f("kappa", kappa);
    f("packet_bits", packet_bits);
  }
  bool operator==(const CorruptionSection&) const = default;
};

struct DatasetSection {
  std::string kind = "synthetic";  // synthetic | mnist
  std::string train_images = "train-images-idx3-ubyte";
  std::string train_labels = "train-labels-idx1-ubyte";
  std::string test_images = "t10k-images-idx3-ubyte";
  std::string test_labels = "t10k-labels-idx1-ubyte";
  std::size_t train_limit = 60000;
  std::size_t test_limit = 10000;
  std::size_t classes = 10;
  std::size_t features = 784;
  std::size_t train_per_class = 600;
  std::size_t test_per_class = 100;
  double spread = 0.15;

  template <typename F>
  void visit(F&& f) {
    f("kind", kind);
    f("train_images", train_images);
    f("train_labels", train_labels);
    f("test_images", test_images);
    f("test_labels", test_labels);
    f("train_limit", train_limit);
    f("test_limit", test_limit);
    f("classes", classes);
    f("features", features);
    f("train_per_class", train_per_class);
    f("test_per_class", test_per_class);
    f("spread", spread);
  }
  bool operator==(const DatasetSection&) const = default;
};

struct TimingSection {
  std::string mode = "table2";  // table2 | analytic
  double link_rate_gbps = 80.0;
  double device_gflops = 1000.0;
  std::size_t clients = 20;  // cluster size assumed by the analytic report

  template <typename F>
  void visit(F&& f) {
    f("mode", mode);
    f("link_rate_gbps", link_rate_gbps);
    f("device_gflops", device_gflops);
    f("clients", clients);
  }
  bool operator==(const TimingSection&) const = default;
};

struct RunSection {
  std::vector<std::string> architectures{"fello", "cl", "dl"};
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  unsigned workers = 1;

  template <typename F>
  void visit(F&& f) {
    f("architectures", architectures);
    f("master_seed", master_seed);
    f("output_dir", output_dir);
    f("workers", workers);
  }
  bool operator==(const RunSection&) const = default;
};

struct SweepSection {
  std::string parameter;  // "section.key"; empty = no sweep
  std::vector<std::string> values;

  template <typename F>
  void visit(F&& f) {
    f("parameter", parameter);
    f("values", values);
  }
  bool operator==(const SweepSection&) const = default;
};

struct ScenarioConfig {
  ConstellationSection constellation;
  OpticsSection isl;
  OpticsSection gsl;
  LescSection lesc;
  TrainSection train;
  CorruptionSection corruption;
  DatasetSection dataset;
  TimingSection timing;
  RunSection run;
  SweepSection sweep;
  // Directory relative paths in [dataset] are resolved against.
  std::filesystem::path base_dir;

  template <typename F>
  void visit_sections(F&& f) {
    f("constellation", constellation);
    f("isl", isl);
    f("gsl", gsl);
    f("lesc", lesc);
    f("train", train);
    f("corruption", corruption);
    f("dataset", dataset);
    f("timing", timing);
    f("run", run);
    f("sweep", sweep);
  }

  bool operator==(const ScenarioConfig& o) const {
    return constellation == o.constellation && isl == o.isl && gsl == o.gsl && lesc == o.lesc &&
           train == o.train && corruption == o.corruption && dataset == o.dataset &&
           timing == o.timing && run == o.run && sweep == o.sweep;
  }
};

// --- conversions to simulator types ----------------------------------------

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline orbits::WalkerConfig walker(const ScenarioConfig& c) {
  const auto& s = c.constellation;
  orbits::WalkerConfig w;
  w.n_orbits = s.n_orbits;
  w.sats_per_orbit = s.sats_per_orbit;
  w.inclination = s.inclination_deg * kDeg;
  w.altitude_km = s.altitude_km;
  w.earth_radius_km = s.earth_radius_km;
  w.earth_rotation_rate = s.earth_rotation_rate;
  w.phasing = s.phasing == "paper_literal" ? orbits::Phasing::paper_literal
                                           : orbits::Phasing::standard;
  w.literal_y_sign = s.y_sign == "paper_literal";
  w.mean_motion_override = s.mean_motion;
  return w;
}

inline optical::OpticalParams optics(const OpticsSection& s) {
  optical::OpticalParams p;
  p.wavelength_m = s.wavelength_nm * 1e-9;
  p.bandwidth_hz = s.bandwidth_ghz * 1e9;
  p.tx_power_w = s.tx_power_mw * 1e-3;
  p.tx_efficiency = s.tx_efficiency;
  p.rx_efficiency = s.rx_efficiency;
  p.telescope_diameter_m = s.telescope_diameter_mm * 1e-3;
  p.pointing_sd_rad = s.pointing_sd_urad * 1e-6;
  p.responsivity_a_per_w = s.responsivity;
  p.dark_current_a = s.dark_current_na * 1e-9;
  p.noise_temp_k = s.noise_temp_k;
  p.load_resistance_ohm = s.load_resistance_ohm;
  p.snr_form = s.snr_form == "electrical" ? optical::SnrForm::electrical : optical::SnrForm::literal;
  p.ber_model = s.ber == "fixed" ? optical::BerModel::fixed(s.ber_fixed) : optical::BerModel::ook();
  return p;
}

inline lesc::LescConfig lesc_config(const ScenarioConfig& c) {
  const auto& s = c.lesc;
  lesc::LescConfig l;
  l.threshold_mode = s.threshold_mode == "snr" ? lesc::ThresholdMode::snr
                                               : lesc::ThresholdMode::distance;
  l.delta_d_km = s.delta_d_km;
  l.delta_gamma = s.delta_gamma_units == "linear" ? s.delta_gamma
                                                  : optical::db_to_linear(s.delta_gamma);
  l.recluster_period = s.recluster_period;
  l.recluster_fraction = s.recluster_fraction;
  l.gsl_snr_threshold = optical::db_to_linear(s.gsl_snr_threshold_db);
  l.rounds = s.rounds;
  l.gs_lat = s.gs_lat_deg * kDeg;
  l.gs_lon = s.gs_lon_deg * kDeg;
  l.min_elevation = s.min_elevation_deg * kDeg;
  return l;
}

inline TrainConfig train_config(const ScenarioConfig& c, std::uint64_t seed) {
  TrainConfig t;
  t.learning_rate = c.train.learning_rate;
  t.local_epochs = c.train.local_epochs;
  t.batch_size = c.train.batch_size;
  t.seed = seed;
  return t;
}

inline Corruption corruption(const ScenarioConfig& c) {
  if (c.corruption.mode == "awgn") return Corruption::awgn(c.corruption.kappa);
  if (c.corruption.mode == "packet") return Corruption::packet(c.corruption.packet_bits);
  return Corruption::none();
}

inline std::vector<overhead::Scheme> architectures(const ScenarioConfig& c) {
  std::vector<overhead::Scheme> out;
  for (const auto& a : c.run.architectures) {
    if (a == "fello") out.push_back(overhead::Scheme::fello);
    else if (a == "cl") out.push_back(overhead::Scheme::cl);
    else if (a == "dl") out.push_back(overhead::Scheme::dl);
  }
  return out;
}

// --- validation -----------------------------------------------------------

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

inline void one_of(const std::string& v, std::initializer_list<const char*> allowed,
                   const std::string& field) {
  std::string list;
  for (const char* a : allowed) {
    if (v == a) return;
    list += (list.empty() ? "" : ", ") + std::string(a);
  }
  throw ConfigError(field, "'" + v + "' is not one of {" + list + "}");
}

inline void check_optics(const OpticsSection& s, const std::string& sec) {
  auto pos = [&](double v, const char* key) {
    require(v > 0.0 && std::isfinite(v), sec + "." + key, "must be > 0");
  };
  pos(s.wavelength_nm, "wavelength_nm");
  pos(s.bandwidth_ghz, "bandwidth_ghz");
  pos(s.tx_power_mw, "tx_power_mw");
  pos(s.tx_efficiency, "tx_efficiency");
  pos(s.rx_efficiency, "rx_efficiency");
  require(s.tx_efficiency <= 1.0, sec + ".tx_efficiency", "must be <= 1");
  require(s.rx_efficiency <= 1.0, sec + ".rx_efficiency", "must be <= 1");
  pos(s.telescope_diameter_mm, "telescope_diameter_mm");
  pos(s.pointing_sd_urad, "pointing_sd_urad");
  pos(s.responsivity, "responsivity");
  pos(s.dark_current_na, "dark_current_na");
  pos(s.noise_temp_k, "noise_temp_k");
  pos(s.load_resistance_ohm, "load_resistance_ohm");
  one_of(s.snr_form, {"literal", "electrical"}, sec + ".snr_form");
  one_of(s.ber, {"ook", "fixed"}, sec + ".ber");
  require(s.ber_fixed >= 0.0 && s.ber_fixed <= 1.0, sec + ".ber_fixed", "must lie in [0, 1]");
}

}  // namespace detail

// Throws ConfigError naming the offending field.
inline void validate(const ScenarioConfig& c) {
  using detail::one_of;
  using detail::require;
  const auto& k = c.constellation;
  require(k.n_orbits >= 1, "constellation.n_orbits", "must be >= 1");
  require(k.sats_per_orbit >= 1, "constellation.sats_per_orbit", "must be >= 1");
  require(k.inclination_deg >= 0.0 && k.inclination_deg <= 180.0, "constellation.inclination_deg",
          "must lie in [0, 180]");
  require(k.altitude_km > 0.0, "constellation.altitude_km", "must be > 0");
  require(k.earth_radius_km > 0.0, "constellation.earth_radius_km", "must be > 0");
  require(std::isfinite(k.earth_rotation_rate), "constellation.earth_rotation_rate",
          "must be finite");
  one_of(k.phasing, {"standard", "paper_literal"}, "constellation.phasing");
  one_of(k.y_sign, {"standard", "paper_literal"}, "constellation.y_sign");
  require(!k.mean_motion || (*k.mean_motion >= 0.0 && std::isfinite(*k.mean_motion)),
          "constellation.mean_motion", "must be >= 0 or auto");

  detail::check_optics(c.isl, "isl");
  detail::check_optics(c.gsl, "gsl");

  const auto& l = c.lesc;
  one_of(l.threshold_mode, {"distance", "snr"}, "lesc.threshold_mode");
  require(l.delta_d_km > 0.0, "lesc.delta_d_km", "must be > 0");
  one_of(l.delta_gamma_units, {"db", "linear"}, "lesc.delta_gamma_units");
  require(std::isfinite(l.delta_gamma), "lesc.delta_gamma", "must be finite");
  require(l.delta_gamma_units == "db" || l.delta_gamma >= 0.0, "lesc.delta_gamma",
          "linear threshold must be >= 0");
  require(!l.recluster_period || *l.recluster_period >= 1, "lesc.recluster_period",
          "must be >= 1 or inf");
  require(l.recluster_fraction > 0.0 && l.recluster_fraction <= 1.0, "lesc.recluster_fraction",
          "must lie in (0, 1]");
  require(std::isfinite(l.gsl_snr_threshold_db), "lesc.gsl_snr_threshold_db", "must be finite");
  require(l.rounds >= 1, "lesc.rounds", "must be >= 1");
  require(std::abs(l.gs_lat_deg) <= 90.0, "lesc.gs_lat_deg", "must lie in [-90, 90]");
  require(l.min_elevation_deg >= -90.0 && l.min_elevation_deg <= 90.0, "lesc.min_elevation_deg",
          "must lie in [-90, 90]");
  require(!l.round_interval_s || *l.round_interval_s >= 0.0, "lesc.round_interval_s",
          "must be >= 0 or auto");

  const auto& t = c.train;
  require(t.learning_rate > 0.0, "train.learning_rate", "must be > 0");
  require(t.local_epochs >= 1, "train.local_epochs", "must be >= 1");
  require(t.batch_size >= 1, "train.batch_size", "must be >= 1");
  require(t.hidden >= 1, "train.hidden", "must be >= 1");
  require(t.samples_per_client >= 1, "train.samples_per_client", "must be >= 1");
  one_of(t.aggregation, {"participating", "fixed_total"}, "train.aggregation");

  one_of(c.corruption.mode, {"none", "awgn", "packet"}, "corruption.mode");
  require(c.corruption.kappa >= 0.0, "corruption.kappa", "must be >= 0");
  require(c.corruption.packet_bits >= 1, "corruption.packet_bits", "must be >= 1");

  const auto& d = c.dataset;
  one_of(d.kind, {"synthetic", "mnist"}, "dataset.kind");
  if (d.kind == "mnist") {
    for (const auto& [key, path] : {std::pair{"dataset.train_images", d.train_images},
                                    {"dataset.train_labels", d.train_labels},
                                    {"dataset.test_images", d.test_images},
                                    {"dataset.test_labels", d.test_labels}}) {
      const auto p = c.base_dir / path;
      require(std::filesystem::exists(p), key, "file '" + p.string() + "' does not exist");
    }
  } else {
    require(d.classes >= 2, "dataset.classes", "must be >= 2");
    require(d.features >= 1, "dataset.features", "must be >= 1");
    require(d.train_per_class >= 1, "dataset.train_per_class", "must be >= 1");
    require(d.test_per_class >= 1, "dataset.test_per_class", "must be >= 1");
    require(d.spread >= 0.0, "dataset.spread", "must be >= 0");
    require(t.samples_per_client <= d.classes * d.train_per_class, "train.samples_per_client",
            "exceeds the synthetic training set size");
  }

  one_of(c.timing.mode, {"table2", "analytic"}, "timing.mode");
  if (c.timing.mode == "analytic") {
    require(c.timing.link_rate_gbps > 0.0, "timing.link_rate_gbps", "must be > 0");
    require(c.timing.device_gflops > 0.0, "timing.device_gflops", "must be > 0");
    require(c.timing.clients >= 1, "timing.clients", "must be >= 1");
  }

  require(!c.run.architectures.empty(), "run.architectures", "must name at least one");
  std::set<std::string> seen;
  for (const auto& a : c.run.architectures) {
    one_of(a, {"fello", "cl", "dl"}, "run.architectures");
    require(seen.insert(a).second, "run.architectures", "'" + a + "' listed twice");
  }
  require(c.run.workers >= 1, "run.workers", "must be >= 1");

  if (!c.sweep.parameter.empty())
    require(!c.sweep.values.empty(), "sweep.values", "a sweep needs at least one value");
}

// --- text form ------------------------------------------------------------

// Sets one "section.key" from its text form. Throws ConfigError for unknown
// keys or unparsable values.
inline void set_value(ScenarioConfig& c, const std::string& path, const std::string& text) {
  const auto dot = path.find('.');
  if (dot == std::string::npos) throw ConfigError(path, "expected 'section.key'");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  bool found_section = false;
  bool found_key = false;
  c.visit_sections([&](const char* name, auto& sec) {
    if (section != name) return;
    found_section = true;
    sec.visit([&](const char* k, auto& field) {
      if (key != k) return;
      found_key = true;
      try {
        codec::parse(codec::trim(text), field);
      } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
      }
    });
  });
  if (!found_section) throw ConfigError(path, "unknown section '" + section + "'");
  if (!found_key) throw ConfigError(path, "unknown key");
}

inline std::string serialize(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  std::ostringstream os;
  bool first = true;
  c.visit_sections([&](const char* name, auto& sec) {
    os << (first ? "" : "\n") << '[' << name << "]\n";
    first = false;
    sec.visit([&](const char* k, auto& field) { os << k << " = " << codec::format(field) << '\n'; });
  });
  return os.str();
}

inline ScenarioConfig parse_config(std::istream& in, const std::string& source,
                                   const std::filesystem::path& base_dir = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  ScenarioConfig c;
  c.base_dir = base_dir;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "key outside of any section");
    for (const auto& [key, value] : body) set_value(c, section + "." + key, value.data());
  }
  validate(c);
  return c;
}

inline ScenarioConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "<string>");
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", path.string() + ": cannot open");
  return parse_config(in, path.string(), path.parent_path());
}

// Fidelity bundle: printed y sign, pi phasing, fixed-total aggregation and
// the literal SNR quotient.
inline void apply_paper_literal(ScenarioConfig& c) {
  c.constellation.phasing = "paper_literal";
  c.constellation.y_sign = "paper_literal";
  c.train.aggregation = "fixed_total";
  c.isl.snr_form = "literal";
  c.gsl.snr_form = "literal";
}

}  // namespace fello::config
