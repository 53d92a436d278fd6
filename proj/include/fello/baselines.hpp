// Centralized (CL) and distributed (DL) reference architectures. Both track
// cluster membership exactly like the federated run so that curves share
// the same round axis.
#pragma once

#include <cstddef>
#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "fello/simulation.hpp"

namespace fello {

// Clients ship their raw shards to the edge whenever a cluster is formed;
// the edge trains E epochs per round on the pooled data with a stream that
// persists until the next pool refresh.
inline std::vector<RoundLog> run_cl(const SimulationInputs& in) {
  in.validate();
  const auto& walker = in.net.walker;
  lesc::ClusterState state;
  ModelParams model = initial_global_model(in);
  ShardBook shards(in);
  Dataset pool{in.arch.n_features, in.arch.n_classes, {}, {}};
  Rng pool_rng(0);
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
      for (const SatIndex& c : step.admitted) shards.admit(c, a);

      if (step.clustered) {
        const std::size_t k = state.clients.size();
        std::vector<std::vector<double>> received(k);
        parallel_for(k, in.workers, [&](std::size_t i) {
          const SatIndex c = state.clients[i];
          const Dataset& shard = shards.at(c);
          const std::vector<double> nothing(shard.features.size(), 0.0);
          Rng rng(streams::client(in.seed, "cl-data", a, orbits::linear_index(walker, c)));
          received[i] =
              corrupt_values(shard.features, nothing, step.links.at(c), in.corruption, rng);
        });
        pool = Dataset{in.arch.n_features, in.arch.n_classes, {}, {}};
        for (std::size_t i = 0; i < k; ++i) {
          const Dataset& shard = shards.at(state.clients[i]);
          pool.features.insert(pool.features.end(), received[i].begin(), received[i].end());
          pool.labels.insert(pool.labels.end(), shard.labels.begin(), shard.labels.end());
        }
        pool_rng = Rng(streams::round(in.seed, "cl-pool", a));
      }

      if (!pool.empty())
        for (int e = 0; e < in.train.local_epochs; ++e)
          model = sgd_epoch(std::move(model), pool, in.train, pool_rng);
    }

    const EvalResult ev = evaluate(model, *in.test_data);
    log.accuracy = ev.accuracy;
    log.global_loss = ev.loss;
    log.round_delay_s = overhead::round_delay(in.timing_cl, a);
    logs.push_back(std::move(log));
  }
  return logs;
}

// Every member trains alone; a newly admitted member starts from the common
// initial model. Membership uses nominal (zero pointing error) links, so no
// channel randomness enters this run.
inline std::vector<RoundLog> run_dl(const SimulationInputs& in) {
  in.validate();
  const auto& walker = in.net.walker;
  lesc::ClusterState state;
  const ModelParams initial = initial_global_model(in);
  ShardBook shards(in);
  std::map<SatIndex, ModelParams> models;
  std::vector<RoundLog> logs;
  const double dt = in.round_interval();

  for (int a = 1; a <= in.lesc.rounds; ++a) {
    const double t = a * dt;
    const lesc::Snapshot snap(walker, t);
    state.round = a;
    const auto step =
        lesc::advance_membership(state, in.net, in.lesc, snap, lesc::LinkPolicy::nominal);
    RoundLog log = start_log(state, step, t);

    if (!step.coverage_gap) {
      shards.retain(state.clients);
      std::erase_if(models, [&](const auto& kv) {
        return !std::binary_search(state.clients.begin(), state.clients.end(), kv.first);
      });
      for (const SatIndex& c : step.admitted) {
        shards.admit(c, a);
        models[c] = initial;
      }

      const std::size_t k = state.clients.size();
      std::vector<ModelParams> trained(k);
      std::vector<EvalResult> evals(k);
      parallel_for(k, in.workers, [&](std::size_t i) {
        const SatIndex c = state.clients[i];
        Rng rng(streams::client(in.seed, "dl-train", a, orbits::linear_index(walker, c)));
        trained[i] = train_local(shards.at(c), models.at(c), in.train, rng);
        evals[i] = evaluate(trained[i], *in.test_data);
      });
      double acc = 0.0;
      double loss = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        models[state.clients[i]] = std::move(trained[i]);
        log.member_accuracy.emplace_back(state.clients[i], evals[i].accuracy);
        acc += evals[i].accuracy;
        loss += evals[i].loss;
      }
      if (k > 0) {
        log.accuracy = acc / static_cast<double>(k);
        log.global_loss = loss / static_cast<double>(k);
      } else {
        log.accuracy = std::numeric_limits<double>::quiet_NaN();
        log.global_loss = std::numeric_limits<double>::quiet_NaN();
      }
    } else {
      log.accuracy = std::numeric_limits<double>::quiet_NaN();
      log.global_loss = std::numeric_limits<double>::quiet_NaN();
    }
    log.round_delay_s = overhead::round_delay(in.timing_dl, a);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace fello
