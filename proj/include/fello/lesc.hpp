// Edge selection and client clustering: the ground station picks the
// nearest visible satellite as edge server, the edge clusters neighbours
// whose link meets a distance or SNR threshold, prunes degraded clients
// every round, re-clusters on attrition and hands over when its ground
// link fails.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "fello/errors.hpp"
#include "fello/mlp.hpp"
#include "fello/optical_link.hpp"
#include "fello/orbits.hpp"
#include "fello/random.hpp"

namespace fello::lesc {

using orbits::EcefPosition;
using orbits::SatIndex;

enum class ThresholdMode { distance, snr };

struct LescConfig {
  ThresholdMode threshold_mode = ThresholdMode::distance;
  double delta_d_km = 2600.0;
  double delta_gamma = 100.0;                 // linear
  std::optional<int> recluster_period = 1;    // rounds; nullopt = never
  double recluster_fraction = 0.7;            // epsilon
  double gsl_snr_threshold = 100.0;           // linear (20 dB)
  int rounds = 40;
  double gs_lat = 25.0 * std::numbers::pi / 180.0;
  double gs_lon = 121.0 * std::numbers::pi / 180.0;
  double min_elevation = 10.0 * std::numbers::pi / 180.0;

  void validate() const {
    if (rounds < 1) throw DomainError("rounds must be >= 1");
    if (recluster_period && *recluster_period < 1)
      throw DomainError("recluster_period must be >= 1 or infinite");
    if (!(recluster_fraction > 0.0 && recluster_fraction <= 1.0))
      throw DomainError("recluster_fraction must lie in (0, 1]");
    if (!(delta_d_km > 0.0)) throw DomainError("delta_d_km must be > 0");
    if (!(delta_gamma >= 0.0)) throw DomainError("delta_gamma must be >= 0");
    if (!(gsl_snr_threshold >= 0.0)) throw DomainError("gsl_snr_threshold must be >= 0");
    if (std::abs(gs_lat) > std::numbers::pi / 2.0) throw DomainError("gs_lat out of range");
  }
};

// How ISL quality is obtained. `sampled` draws pointing errors from the
// keyed substream; `nominal` uses zero pointing error and never touches
// randomness.
enum class LinkPolicy { sampled, nominal };

// Everything needed to evaluate geometry and links at a given time.
struct Network {
  orbits::WalkerConfig walker;
  optical::OpticalParams isl;
  optical::OpticalParams gsl;
  std::uint64_t link_seed = 1;
};

inline EcefPosition ground_station(const Network& net, const LescConfig& cfg) {
  return orbits::ground_station_position(cfg.gs_lat, cfg.gs_lon, net.walker.earth_radius_km);
}

// Substream for the link between a and b in a round. The pair is unordered so
// both directions of an exchange see the same channel draw.
inline Rng link_rng(const Network& net, int round, const orbits::WalkerConfig& w, SatIndex a,
                    SatIndex b) {
  auto ia = orbits::linear_index(w, a);
  auto ib = orbits::linear_index(w, b);
  if (ib < ia) std::swap(ia, ib);
  return Rng(derive_seed(net.link_seed, {tag("isl"), static_cast<std::uint64_t>(round), ia, ib}));
}

inline optical::LinkSample isl_link(const Network& net, int round, SatIndex a, SatIndex b,
                                    double distance_km, LinkPolicy policy) {
  if (policy == LinkPolicy::nominal) return optical::nominal_link(net.isl, distance_km);
  Rng rng = link_rng(net, round, net.walker, a, b);
  return optical::evaluate_link(net.isl, distance_km, rng);
}

// Positions of the whole constellation at one instant.
class Snapshot {
 public:
  Snapshot(const orbits::WalkerConfig& w, double t) : walker_(&w), t_(t), pos_(orbits::snapshot(w, t)) {}

  double time() const { return t_; }
  const EcefPosition& at(SatIndex s) const { return pos_[orbits::linear_index(*walker_, s)]; }
  double distance(SatIndex a, SatIndex b) const {
    if (a == b) throw DomainError("distance between a satellite and itself");
    return orbits::distance(at(a), at(b));
  }

 private:
  const orbits::WalkerConfig* walker_;
  double t_;
  std::vector<EcefPosition> pos_;
};

struct GslQuality {
  double snr = 0.0;        // linear; 0 below the elevation mask
  double elevation = 0.0;  // radians
  double distance_km = 0.0;
};

// Ground link evaluated with the GSL parameter block and zero pointing
// error, so quality is a decreasing function of distance.
inline GslQuality gsl_quality(const Network& net, const LescConfig& cfg, const EcefPosition& gs,
                              const EcefPosition& sat) {
  GslQuality q;
  q.distance_km = orbits::distance(gs, sat);
  q.elevation = orbits::elevation(gs, sat);
  if (q.elevation >= cfg.min_elevation)
    q.snr = optical::nominal_link(net.gsl, q.distance_km).snr_linear;
  return q;
}

inline GslQuality gsl_quality(const Network& net, const LescConfig& cfg, SatIndex sat, double t) {
  return gsl_quality(net, cfg, ground_station(net, cfg), orbits::position_at(net.walker, sat, t));
}

// Nearest visible satellite; lowest index wins exact ties.
inline SatIndex select_edge(const Network& net, const LescConfig& cfg, const Snapshot& snap) {
  const EcefPosition gs = ground_station(net, cfg);
  std::optional<SatIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const SatIndex& s : orbits::all_satellites(net.walker)) {
    const EcefPosition& p = snap.at(s);
    if (orbits::elevation(gs, p) < cfg.min_elevation) continue;
    const double d = orbits::distance(gs, p);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  if (!best) throw CoverageError("no satellite visible from the ground station");
  return *best;
}

inline SatIndex select_edge(const Network& net, const LescConfig& cfg, double t) {
  return select_edge(net, cfg, Snapshot(net.walker, t));
}

// Admission test used when (re-)clustering.
inline bool admits(const LescConfig& cfg, const optical::LinkSample& link) {
  return cfg.threshold_mode == ThresholdMode::distance ? link.distance_km < cfg.delta_d_km
                                                       : link.snr_linear > cfg.delta_gamma;
}

// Removal test used when pruning.
inline bool violates(const LescConfig& cfg, const optical::LinkSample& link) {
  return cfg.threshold_mode == ThresholdMode::distance ? link.distance_km > cfg.delta_d_km
                                                       : link.snr_linear < cfg.delta_gamma;
}

inline optical::LinkSample client_link(const Network& net, const Snapshot& snap, int round,
                                       SatIndex edge, SatIndex client, LinkPolicy policy) {
  return isl_link(net, round, edge, client, snap.distance(edge, client), policy);
}

// All satellites meeting the threshold around `edge`, ascending, edge excluded.
inline std::vector<SatIndex> cluster(const Network& net, const LescConfig& cfg,
                                     const Snapshot& snap, int round, SatIndex edge,
                                     LinkPolicy policy = LinkPolicy::sampled) {
  std::vector<SatIndex> out;
  for (const SatIndex& s : orbits::all_satellites(net.walker)) {
    if (s == edge) continue;
    if (admits(cfg, client_link(net, snap, round, edge, s, policy))) out.push_back(s);
  }
  return out;
}

struct ClusterState {
  int round = 0;
  std::optional<SatIndex> edge;
  std::vector<SatIndex> clients;  // ascending
  std::size_t baseline_size = 0;  // K'
  ModelParams global_model;
};

inline ClusterState prune_clients(ClusterState state, const Network& net, const LescConfig& cfg,
                                  const Snapshot& snap, LinkPolicy policy = LinkPolicy::sampled) {
  if (!state.edge) return state;
  std::erase_if(state.clients, [&](SatIndex c) {
    return violates(cfg, client_link(net, snap, state.round, *state.edge, c, policy));
  });
  return state;
}

// K_a < eps K' and a divisible by T_rc.
inline bool recluster_due(std::size_t cluster_size, std::size_t baseline, double fraction,
                          int round, std::optional<int> period) {
  if (!period) return false;
  return static_cast<double>(cluster_size) < fraction * static_cast<double>(baseline) &&
         round % *period == 0;
}

inline ClusterState maybe_recluster(ClusterState state, const Network& net, const LescConfig& cfg,
                                    const Snapshot& snap, bool& fired,
                                    LinkPolicy policy = LinkPolicy::sampled) {
  fired = false;
  if (!state.edge) return state;
  if (!recluster_due(state.clients.size(), state.baseline_size, cfg.recluster_fraction,
                     state.round, cfg.recluster_period))
    return state;
  state.clients = cluster(net, cfg, snap, state.round, *state.edge, policy);
  state.baseline_size = state.clients.size();
  fired = true;
  return state;
}

// Replaces the edge when its ground link drops below the threshold (or when
// there is no edge yet). The global model moves to the new edge untouched.
// Throws CoverageError when a new edge is needed but none is visible.
inline ClusterState maybe_handover(ClusterState state, const Network& net, const LescConfig& cfg,
                                   const Snapshot& snap, bool& fired,
                                   LinkPolicy policy = LinkPolicy::sampled) {
  fired = false;
  if (state.edge) {
    const auto q = gsl_quality(net, cfg, ground_station(net, cfg), snap.at(*state.edge));
    if (!(q.snr < cfg.gsl_snr_threshold)) return state;
  }
  const SatIndex next = select_edge(net, cfg, snap);
  if (state.edge && next == *state.edge) return state;
  state.edge = next;
  state.clients = cluster(net, cfg, snap, state.round, next, policy);
  state.baseline_size = state.clients.size();
  fired = true;
  return state;
}

// What one round of membership maintenance did.
struct MembershipStep {
  bool clustered = false;    // fresh cluster formed (initial, handover or re-cluster)
  bool handover = false;
  bool reclustered = false;
  bool coverage_gap = false;
  std::vector<SatIndex> admitted;  // members not present last round
  std::map<SatIndex, optical::LinkSample> links;  // edge-client link per member
};

// One round of membership maintenance: edge check (forced in round 1),
// pruning and conditional re-clustering for later rounds, then the link
// samples every current member uses this round.
inline MembershipStep advance_membership(ClusterState& state, const Network& net,
                                         const LescConfig& cfg, const Snapshot& snap,
                                         LinkPolicy policy = LinkPolicy::sampled) {
  MembershipStep step;
  const std::vector<SatIndex> before = state.clients;
  const bool had_edge = state.edge.has_value();
  if (state.round == 1) state.edge.reset();
  try {
    bool fired = false;
    // By copy: a coverage error must leave the caller's state (and model) intact.
    state = maybe_handover(state, net, cfg, snap, fired, policy);
    step.clustered = fired;
    step.handover = fired && had_edge && state.round > 1;
  } catch (const CoverageError&) {
    // Retry at the next round; nobody trains meanwhile.
    step.coverage_gap = true;
    return step;
  }
  if (state.round > 1 && state.edge && !step.clustered) {
    state = prune_clients(std::move(state), net, cfg, snap, policy);
    bool fired = false;
    state = maybe_recluster(std::move(state), net, cfg, snap, fired, policy);
    step.reclustered = fired;
    step.clustered = fired;
  }
  for (const SatIndex& c : state.clients) {
    if (!std::binary_search(before.begin(), before.end(), c)) step.admitted.push_back(c);
    step.links.emplace(c, client_link(net, snap, state.round, *state.edge, c, policy));
  }
  return step;
}

}  // namespace fello::lesc
