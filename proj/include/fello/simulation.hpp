// Round loop shared by the three learning architectures, and the federated
// (FELLO) run itself.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string_view>
#include <thread>
#include <utility>
#include <exception>
#include <vector>

#include "fello/dataset.hpp"
#include "fello/fedavg.hpp"
#include "fello/lesc.hpp"
#include "fello/mlp.hpp"
#include "fello/orbits.hpp"
#include "fello/overhead.hpp"
#include "fello/random.hpp"

namespace fello {

using orbits::SatIndex;

struct RoundLog {
  int round = 0;
  double time_s = 0.0;
  std::optional<SatIndex> edge;
  std::size_t cluster_size = 0;
  bool reclustered = false;
  bool handover = false;
  bool coverage_gap = false;
  double accuracy = 0.0;
  double global_loss = 0.0;
  double mean_link_snr_db = std::numeric_limits<double>::quiet_NaN();
  double round_delay_s = 0.0;
  // Per-member test accuracy; filled by the distributed baseline only.
  std::vector<std::pair<SatIndex, double>> member_accuracy;
};

struct SimulationInputs {
  lesc::Network net;
  lesc::LescConfig lesc;
  TrainConfig train;
  Architecture arch;
  Corruption corruption;
  const Dataset* train_data = nullptr;
  const Dataset* test_data = nullptr;
  std::size_t samples_per_client = 2208;
  // Orbital time advanced per round; when unset the FELLO per-round delay
  // of `timing` is used.
  std::optional<double> round_interval_s;
  overhead::OverheadInputs timing_fello = overhead::table2_inputs(overhead::Scheme::fello);
  overhead::OverheadInputs timing_cl = overhead::table2_inputs(overhead::Scheme::cl);
  overhead::OverheadInputs timing_dl = overhead::table2_inputs(overhead::Scheme::dl);
  // Divide by the clustered sample total instead of the participating one.
  bool fixed_total_aggregation = false;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  double round_interval() const {
    return round_interval_s.value_or(overhead::round_delay(timing_fello, 1));
  }

  void validate() const {
    if (!train_data || !test_data) throw DomainError("training and test data are required");
    train_data->validate();
    test_data->validate();
    if (train_data->n_features != arch.n_features || test_data->n_features != arch.n_features)
      throw ShapeError("dataset feature count does not match the model");
    if (train_data->n_classes != arch.n_classes || test_data->n_classes != arch.n_classes)
      throw ShapeError("dataset class count does not match the model");
    if (samples_per_client < 1 || samples_per_client > train_data->size())
      throw DomainError("samples_per_client must lie in [1, training set size]");
    if (round_interval() < 0.0) throw DomainError("round interval must be >= 0");
    net.walker.validate();
    net.isl.validate();
    net.gsl.validate();
    lesc.validate();
    train.validate();
  }
};

// Seed derivation for every random draw in a run. Each stream is keyed by
// what it is for, so results do not depend on evaluation order.
namespace streams {

inline std::uint64_t initial_model(std::uint64_t seed) { return derive_seed(seed, {tag("init")}); }

inline std::uint64_t shard(std::uint64_t seed, std::size_t client, int admitted_round) {
  return derive_seed(seed, {tag("shard"), client, static_cast<std::uint64_t>(admitted_round)});
}

inline std::uint64_t client(std::uint64_t seed, std::string_view purpose, int round,
                            std::size_t client) {
  return derive_seed(seed, {tag(purpose), static_cast<std::uint64_t>(round), client});
}

inline std::uint64_t round(std::uint64_t seed, std::string_view purpose, int round) {
  return derive_seed(seed, {tag(purpose), static_cast<std::uint64_t>(round)});
}

}  // namespace streams

// Runs fn(i) for i in [0, n) on up to `workers` threads. fn must only write
// to slot i of its outputs.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t w = std::min<std::size_t>(std::max(1u, workers), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += w) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// On-board data of current members. A satellite admitted (or re-admitted)
// in round a draws a fresh shard from the stream keyed by (client, a).
class ShardBook {
 public:
  explicit ShardBook(const SimulationInputs& in) : in_(&in) {}

  void admit(SatIndex c, int round) {
    Rng rng(streams::shard(in_->seed, orbits::linear_index(in_->net.walker, c), round));
    shards_[c] = sample_shard(*in_->train_data, in_->samples_per_client, rng);
  }

  // Drops everyone not in `members`.
  void retain(const std::vector<SatIndex>& members) {
    std::erase_if(shards_, [&](const auto& kv) {
      return !std::binary_search(members.begin(), members.end(), kv.first);
    });
  }

  const Dataset& at(SatIndex c) const { return shards_.at(c); }

 private:
  const SimulationInputs* in_;
  std::map<SatIndex, Dataset> shards_;
};

inline double mean_snr_db(const lesc::MembershipStep& step) {
  if (step.links.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const auto& [c, link] : step.links) sum += optical::linear_to_db(link.snr_linear);
  return sum / static_cast<double>(step.links.size());
}

inline RoundLog start_log(const lesc::ClusterState& state, const lesc::MembershipStep& step,
                          double t) {
  RoundLog log;
  log.round = state.round;
  log.time_s = t;
  log.edge = state.edge;
  log.cluster_size = step.coverage_gap ? 0 : state.clients.size();
  log.reclustered = step.reclustered;
  log.handover = step.handover;
  log.coverage_gap = step.coverage_gap;
  log.mean_link_snr_db = mean_snr_db(step);
  return log;
}

inline ModelParams initial_global_model(const SimulationInputs& in) {
  Rng rng(streams::initial_model(in.seed));
  return init_model(in.arch, rng);
}

// Federated learning over the clustered constellation. Every round: advance
// the orbit clock, maintain membership, download the global model over each
// client's link, train E local epochs, upload, aggregate, evaluate.
inline std::vector<RoundLog> run_fello(const SimulationInputs& in) {
  in.validate();
  const auto& walker = in.net.walker;
  lesc::ClusterState state;
  state.global_model = initial_global_model(in);
  ShardBook shards(in);
  std::map<SatIndex, ModelParams> local;  // each member's last local model
  std::vector<RoundLog> logs;
  const double dt = in.round_interval();

  for (int a = 1; a <= in.lesc.rounds; ++a) {
    const double t = a * dt;
    const lesc::Snapshot snap(walker, t);
    state.round = a;
    const auto step = lesc::advance_membership(state, in.net, in.lesc, snap);
    RoundLog log = start_log(state, step, t);

    if (!step.coverage_gap) {
      shards.retain(state.clients);
      std::erase_if(local, [&](const auto& kv) {
        return !std::binary_search(state.clients.begin(), state.clients.end(), kv.first);
      });
      for (const SatIndex& c : step.admitted) {
        shards.admit(c, a);
        local[c] = state.global_model;
      }

      const std::size_t k = state.clients.size();
      std::vector<ClientUpdate> uploads(k);
      std::vector<ModelParams> trained(k);
      parallel_for(k, in.workers, [&](std::size_t i) {
        const SatIndex c = state.clients[i];
        const std::size_t id = orbits::linear_index(walker, c);
        const auto& link = step.links.at(c);
        Rng down(streams::client(in.seed, "down", a, id));
        const ModelParams received =
            corrupt_model(state.global_model, local.at(c), link, in.corruption, down);
        Rng train_rng(streams::client(in.seed, "train", a, id));
        trained[i] = train_local(shards.at(c), received, in.train, train_rng);
        Rng up(streams::client(in.seed, "up", a, id));
        uploads[i] = {corrupt_model(trained[i], state.global_model, link, in.corruption, up),
                      shards.at(c).size()};
      });
      for (std::size_t i = 0; i < k; ++i) local[state.clients[i]] = std::move(trained[i]);

      if (k > 0) {
        std::optional<double> fixed;
        if (in.fixed_total_aggregation)
          fixed = static_cast<double>(std::max<std::size_t>(state.baseline_size, 1) *
                                      in.samples_per_client);
        state.global_model = aggregate(uploads, fixed);
      }
    }

    const EvalResult ev = evaluate(state.global_model, *in.test_data);
    log.accuracy = ev.accuracy;
    log.global_loss = ev.loss;
    log.round_delay_s = overhead::round_delay(in.timing_fello, a);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace fello
