// Closed-form delay model for the three learning architectures and the
// system-overhead report (delay, compute, memory).
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fello/errors.hpp"
#include "fello/mlp.hpp"

namespace fello::overhead {

enum class Scheme { fello, cl, dl };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::fello: return "fello";
    case Scheme::cl: return "cl";
    case Scheme::dl: return "dl";
  }
  return "?";
}

struct OverheadInputs {
  int rounds = 40;
  int local_epochs = 2;
  double t_send_s = 0.0;   // one model (fello) or raw-data (cl) transfer
  double t_epoch_s = 0.0;  // one training epoch
  double t_agg_s = 0.0;    // one aggregation
  Scheme mode = Scheme::fello;

  void validate() const {
    if (rounds < 0 || local_epochs < 0) throw DomainError("rounds and epochs must be >= 0");
    if (t_send_s < 0.0 || t_epoch_s < 0.0 || t_agg_s < 0.0)
      throw DomainError("component times must be >= 0");
  }
};

namespace detail {
inline void expect_mode(const OverheadInputs& in, Scheme s) {
  if (in.mode != s)
    throw DomainError(std::string("overhead inputs are for ") + to_string(in.mode) + ", not " +
                      to_string(s));
  in.validate();
}
}  // namespace detail

// A (2 T_s + E T_e + T_a)
inline double overhead_fello(const OverheadInputs& in) {
  detail::expect_mode(in, Scheme::fello);
  return in.rounds * (2.0 * in.t_send_s + in.local_epochs * in.t_epoch_s + in.t_agg_s);
}

// (A E) T_e
inline double overhead_dl(const OverheadInputs& in) {
  detail::expect_mode(in, Scheme::dl);
  return static_cast<double>(in.rounds * in.local_epochs) * in.t_epoch_s;
}

// T_s + (A E) T_e
inline double overhead_cl(const OverheadInputs& in) {
  detail::expect_mode(in, Scheme::cl);
  return in.t_send_s + static_cast<double>(in.rounds * in.local_epochs) * in.t_epoch_s;
}

inline double total_delay(const OverheadInputs& in) {
  switch (in.mode) {
    case Scheme::fello: return overhead_fello(in);
    case Scheme::cl: return overhead_cl(in);
    case Scheme::dl: return overhead_dl(in);
  }
  return 0.0;
}

// Delay contributed by round `round` (1-based); summing over 1..A gives
// total_delay. CL pays its single raw-data transfer in round 1.
inline double round_delay(const OverheadInputs& in, int round) {
  switch (in.mode) {
    case Scheme::fello:
      return 2.0 * in.t_send_s + in.local_epochs * in.t_epoch_s + in.t_agg_s;
    case Scheme::cl:
      return (round == 1 ? in.t_send_s : 0.0) + in.local_epochs * in.t_epoch_s;
    case Scheme::dl:
      return in.local_epochs * in.t_epoch_s;
  }
  return 0.0;
}

// Component times from payload sizes and device throughput.
inline OverheadInputs derive_times(Scheme mode, int rounds, int local_epochs, double payload_bytes,
                                   double link_rate_bps, double flops_per_epoch,
                                   double device_flops, double aggregation_flops = 0.0) {
  if (mode != Scheme::dl && !(link_rate_bps > 0.0))
    throw DomainError("link rate must be > 0 to derive transfer times");
  if (!(device_flops > 0.0)) throw DomainError("device throughput must be > 0");
  if (payload_bytes < 0.0 || flops_per_epoch < 0.0 || aggregation_flops < 0.0)
    throw DomainError("payload and flop counts must be >= 0");
  OverheadInputs in;
  in.mode = mode;
  in.rounds = rounds;
  in.local_epochs = local_epochs;
  in.t_send_s = mode == Scheme::dl ? 0.0 : 8.0 * payload_bytes / link_rate_bps;
  in.t_epoch_s = flops_per_epoch / device_flops;
  in.t_agg_s = mode == Scheme::fello ? aggregation_flops / device_flops : 0.0;
  return in;
}

// Measured component times of the reference 20-client deployment.
inline OverheadInputs table2_inputs(Scheme mode, int rounds = 40, int local_epochs = 2) {
  OverheadInputs in;
  in.mode = mode;
  in.rounds = rounds;
  in.local_epochs = local_epochs;
  switch (mode) {
    case Scheme::fello:
      in.t_send_s = 0.101e-3;
      in.t_epoch_s = 29.38e-3;
      in.t_agg_s = 0.089e-3;
      break;
    case Scheme::cl:
      in.t_send_s = 0.445e-3;
      in.t_epoch_s = 195.88e-3;
      break;
    case Scheme::dl:
      in.t_epoch_s = 29.38e-3;
      break;
  }
  return in;
}

struct OverheadReport {
  Scheme mode = Scheme::fello;
  OverheadInputs inputs;
  double total_delay_s = 0.0;
  double compute_flops = 0.0;
  std::optional<double> server_memory_bytes;
  double client_memory_bytes = 0.0;
};

inline constexpr double kMegabyte = 1e6;

inline std::array<OverheadReport, 3> report_table2(int rounds = 40, int local_epochs = 2) {
  std::array<OverheadReport, 3> r;
  const std::array<Scheme, 3> order{Scheme::fello, Scheme::cl, Scheme::dl};
  for (std::size_t i = 0; i < 3; ++i) {
    r[i].mode = order[i];
    r[i].inputs = table2_inputs(order[i], rounds, local_epochs);
    r[i].total_delay_s = total_delay(r[i].inputs);
  }
  r[0].compute_flops = 0.878e12;
  r[1].compute_flops = 17.56e12;
  r[2].compute_flops = 0.878e12;
  r[0].server_memory_bytes = 0.52 * kMegabyte;
  r[1].server_memory_bytes = 140.28 * kMegabyte;
  r[0].client_memory_bytes = 7.04 * kMegabyte;
  r[1].client_memory_bytes = 7.01 * kMegabyte;
  r[2].client_memory_bytes = 7.04 * kMegabyte;
  return r;
}

struct AnalyticInputs {
  Architecture arch;
  std::size_t clients = 20;
  std::size_t samples_per_client = 2208;
  int rounds = 40;
  int local_epochs = 2;
  double link_rate_bps = 80e9;
  double device_flops = 1e12;
};

// Compute and memory from layer sizes: 4 bytes per value, CL additionally
// holds the pooled raw data on its server.
inline std::array<OverheadReport, 3> report_analytic(const AnalyticInputs& a) {
  const double params = static_cast<double>(a.arch.parameter_count());
  const double model_bytes = 4.0 * params;
  const double shard_bytes =
      4.0 * static_cast<double>(a.samples_per_client * a.arch.n_features);
  const double k = static_cast<double>(a.clients);
  const double per_sample = train_flops_per_sample(a.arch);
  const double epoch_flops = per_sample * static_cast<double>(a.samples_per_client);
  const double total_epochs = static_cast<double>(a.rounds * a.local_epochs);

  std::array<OverheadReport, 3> r;
  r[0].mode = Scheme::fello;
  r[0].inputs = derive_times(Scheme::fello, a.rounds, a.local_epochs, model_bytes,
                             a.link_rate_bps, epoch_flops, a.device_flops, 2.0 * k * params);
  r[0].compute_flops = epoch_flops * total_epochs;
  r[0].server_memory_bytes = model_bytes;
  r[0].client_memory_bytes = model_bytes + shard_bytes;

  r[1].mode = Scheme::cl;
  r[1].inputs = derive_times(Scheme::cl, a.rounds, a.local_epochs, k * shard_bytes,
                             a.link_rate_bps, k * epoch_flops, a.device_flops);
  r[1].compute_flops = k * epoch_flops * total_epochs;
  r[1].server_memory_bytes = model_bytes + k * shard_bytes;
  r[1].client_memory_bytes = shard_bytes;

  r[2].mode = Scheme::dl;
  r[2].inputs = derive_times(Scheme::dl, a.rounds, a.local_epochs, 0.0, a.link_rate_bps,
                             epoch_flops, a.device_flops);
  r[2].compute_flops = epoch_flops * total_epochs;
  r[2].client_memory_bytes = model_bytes + shard_bytes;

  for (auto& x : r) x.total_delay_s = total_delay(x.inputs);
  return r;
}

namespace detail {
inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
}  // namespace detail

// Aligned text table; numbers rounded the same way as the CSV.
inline std::string format_text(const std::array<OverheadReport, 3>& r) {
  std::ostringstream os;
  auto line = [&](const std::string& label, auto&& cell) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%-26s", label.c_str());
    os << buf;
    for (const auto& x : r) {
      std::snprintf(buf, sizeof buf, "%16s", cell(x).c_str());
      os << buf;
    }
    os << '\n';
  };
  line("", [](const OverheadReport& x) { return std::string(to_string(x.mode)); });
  line("compute [TFLOP]", [](const OverheadReport& x) {
    return detail::fmt("%.3f", x.compute_flops / 1e12);
  });
  line("transfer T_s [ms]", [](const OverheadReport& x) {
    return x.mode == Scheme::dl ? std::string("-") : detail::fmt("%.3f", x.inputs.t_send_s * 1e3);
  });
  line("epoch T_e [ms]", [](const OverheadReport& x) {
    return detail::fmt("%.3f", x.inputs.t_epoch_s * 1e3);
  });
  line("aggregation T_a [ms]", [](const OverheadReport& x) {
    return x.mode == Scheme::fello ? detail::fmt("%.3f", x.inputs.t_agg_s * 1e3) : std::string("-");
  });
  line("total delay [s]", [](const OverheadReport& x) {
    return detail::fmt("%.2f", x.total_delay_s);
  });
  line("server memory [MB]", [](const OverheadReport& x) {
    return x.server_memory_bytes ? detail::fmt("%.2f", *x.server_memory_bytes / kMegabyte)
                                 : std::string("-");
  });
  line("client memory [MB]", [](const OverheadReport& x) {
    return detail::fmt("%.2f", x.client_memory_bytes / kMegabyte);
  });
  return os.str();
}

inline std::string format_csv(const std::array<OverheadReport, 3>& r) {
  std::ostringstream os;
  os << "architecture,compute_tflop,t_send_ms,t_epoch_ms,t_agg_ms,total_delay_s,"
        "server_memory_mb,client_memory_mb\n";
  for (const auto& x : r) {
    os << to_string(x.mode) << ',' << detail::fmt("%.3f", x.compute_flops / 1e12) << ','
       << (x.mode == Scheme::dl ? std::string("-") : detail::fmt("%.3f", x.inputs.t_send_s * 1e3))
       << ',' << detail::fmt("%.3f", x.inputs.t_epoch_s * 1e3) << ','
       << (x.mode == Scheme::fello ? detail::fmt("%.3f", x.inputs.t_agg_s * 1e3)
                                   : std::string("-"))
       << ',' << detail::fmt("%.2f", x.total_delay_s) << ','
       << (x.server_memory_bytes ? detail::fmt("%.2f", *x.server_memory_bytes / kMegabyte)
                                 : std::string("-"))
       << ',' << detail::fmt("%.2f", x.client_memory_bytes / kMegabyte) << '\n';
  }
  return os.str();
}

}  // namespace fello::overhead
