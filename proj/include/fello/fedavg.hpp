// Weighted model averaging and channel impairment of exchanged vectors.
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fello/errors.hpp"
#include "fello/mlp.hpp"
#include "fello/optical_link.hpp"
#include "fello/random.hpp"

namespace fello {

struct ClientUpdate {
  ModelParams model;
  std::size_t n_samples = 0;
};

// sum_k (N_k / N) w_k, with N the participating total unless a fixed total is
// supplied. Inputs are summed in the order given; callers pass them in
// ascending client order so the result is bit-reproducible.
inline ModelParams aggregate(std::span<const ClientUpdate> updates,
                             std::optional<double> fixed_total = std::nullopt) {
  if (updates.empty()) throw DomainError("aggregate over an empty client set");
  const Architecture& arch = updates.front().model.arch;
  double participating = 0.0;
  for (const auto& u : updates) {
    if (!(u.model.arch == arch) || u.model.size() != updates.front().model.size())
      throw ShapeError("aggregate over models of different architecture");
    participating += static_cast<double>(u.n_samples);
  }
  const double total = fixed_total.value_or(participating);
  if (!(total > 0.0)) throw DomainError("aggregate needs a positive sample total");

  ModelParams out(arch);
  for (const auto& u : updates) {
    const double w = static_cast<double>(u.n_samples) / total;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += w * u.model.values[i];
  }
  return out;
}

struct Corruption {
  enum class Kind { none, awgn, packet };
  Kind kind = Kind::none;
  double kappa = 0.0;           // awgn scale
  std::size_t packet_bits = 0;  // packet payload size

  static Corruption none() { return {}; }
  static Corruption awgn(double kappa) { return {Kind::awgn, kappa, 0}; }
  static Corruption packet(std::size_t bits) { return {Kind::packet, 0.0, bits}; }
};

// Values travel as 32-bit words.
inline constexpr std::size_t kBitsPerValue = 32;

// Each packet of `bits` bits fails independently with 1 - (1 - p_e)^bits.
inline std::vector<bool> packet_failures(std::size_t n_packets, std::size_t bits, double bit_error,
                                         Rng& rng) {
  const double p_fail = 1.0 - std::pow(1.0 - bit_error, static_cast<double>(bits));
  std::vector<bool> failed(n_packets);
  for (std::size_t i = 0; i < n_packets; ++i) failed[i] = rng.uniform() < p_fail;
  return failed;
}

// none: identity. awgn: adds N(0, (kappa/sqrt(gamma))^2) per value; with
// gamma == 0 nothing arrives and the receiver keeps its previous values.
// packet: values touched by a failed packet keep the receiver's previous
// values.
inline std::vector<double> corrupt_values(std::span<const double> sent,
                                          std::span<const double> receiver_prev,
                                          const optical::LinkSample& link, const Corruption& c,
                                          Rng& rng) {
  if (sent.size() != receiver_prev.size())
    throw ShapeError("sent and previous vectors differ in length");
  std::vector<double> out(sent.begin(), sent.end());
  switch (c.kind) {
    case Corruption::Kind::none:
      break;
    case Corruption::Kind::awgn: {
      if (!(link.snr_linear > 0.0)) {
        out.assign(receiver_prev.begin(), receiver_prev.end());
        break;
      }
      const double sd = c.kappa / std::sqrt(link.snr_linear);
      for (double& v : out) v += sd * rng.normal();
      break;
    }
    case Corruption::Kind::packet: {
      if (c.packet_bits == 0) throw DomainError("packet size must be >= 1 bit");
      const std::size_t total_bits = sent.size() * kBitsPerValue;
      const std::size_t n_packets = (total_bits + c.packet_bits - 1) / c.packet_bits;
      const auto failed = packet_failures(n_packets, c.packet_bits, link.ber, rng);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t first = i * kBitsPerValue / c.packet_bits;
        const std::size_t last = (i * kBitsPerValue + kBitsPerValue - 1) / c.packet_bits;
        for (std::size_t p = first; p <= last; ++p) {
          if (failed[p]) {
            out[i] = receiver_prev[i];
            break;
          }
        }
      }
      break;
    }
  }
  return out;
}

inline ModelParams corrupt_model(const ModelParams& sent, const ModelParams& receiver_prev,
                                 const optical::LinkSample& link, const Corruption& c, Rng& rng) {
  if (c.kind == Corruption::Kind::none) return sent;
  if (!(sent.arch == receiver_prev.arch)) throw ShapeError("model architectures differ");
  ModelParams out(sent.arch);
  out.values = corrupt_values(sent.values, receiver_prev.values, link, c, rng);
  return out;
}

}  // namespace fello
