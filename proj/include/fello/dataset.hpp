#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fello/errors.hpp"
#include "fello/orbits.hpp"
#include "fello/random.hpp"

namespace fello {

// Row-major feature matrix with one class label per row.
struct Dataset {
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }

  void validate() const {
    if (n_classes < 2) throw ShapeError("dataset needs at least two classes");
    if (features.size() != labels.size() * n_features)
      throw ShapeError("feature rows do not align with labels");
    for (int y : labels)
      if (y < 0 || static_cast<std::size_t>(y) >= n_classes)
        throw ShapeError("label " + std::to_string(y) + " outside [0, " +
                         std::to_string(n_classes) + ")");
  }

  Dataset subset(std::span<const std::size_t> idx) const {
    Dataset out{n_features, n_classes, {}, {}};
    out.features.reserve(idx.size() * n_features);
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
      const auto r = row(i);
      out.features.insert(out.features.end(), r.begin(), r.end());
      out.labels.push_back(labels[i]);
    }
    return out;
  }

  Dataset head(std::size_t n) const {
    std::vector<std::size_t> idx(std::min(n, size()));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return subset(idx);
  }

  // Appends rows of another dataset with the same shape.
  void append(const Dataset& other) {
    if (other.n_features != n_features || other.n_classes != n_classes)
      throw ShapeError("cannot append datasets of different shape");
    features.insert(features.end(), other.features.begin(), other.features.end());
    labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  }
};

// --- MNIST IDX ------------------------------------------------------------

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error(path + ": truncated IDX header");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

inline std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open");
  return in;
}

}  // namespace detail

// Raw pixel bytes scaled to [0, 1]; at most `limit` images.
inline std::vector<double> read_idx_images(const std::filesystem::path& path,
                                           std::size_t& n_features,
                                           std::size_t limit = SIZE_MAX) {
  auto in = detail::open_binary(path);
  const std::string p = path.string();
  if (detail::read_be32(in, p) != kIdxImagesMagic) throw Error(p + ": bad IDX image magic");
  const std::size_t count = detail::read_be32(in, p);
  const std::size_t rows = detail::read_be32(in, p);
  const std::size_t cols = detail::read_be32(in, p);
  n_features = rows * cols;
  const std::size_t n = std::min(count, limit);
  std::vector<unsigned char> raw(n * n_features);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw Error(p + ": truncated IDX image data");
  std::vector<double> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(),
                 [](unsigned char c) { return static_cast<double>(c) / 255.0; });
  return out;
}

inline std::vector<int> read_idx_labels(const std::filesystem::path& path,
                                        std::size_t limit = SIZE_MAX) {
  auto in = detail::open_binary(path);
  const std::string p = path.string();
  if (detail::read_be32(in, p) != kIdxLabelsMagic) throw Error(p + ": bad IDX label magic");
  const std::size_t count = detail::read_be32(in, p);
  const std::size_t n = std::min(count, limit);
  std::vector<unsigned char> raw(n);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n)))
    throw Error(p + ": truncated IDX label data");
  return {raw.begin(), raw.end()};
}

inline Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels,
                          std::size_t limit = SIZE_MAX, std::size_t n_classes = 10) {
  Dataset ds;
  ds.n_classes = n_classes;
  ds.features = read_idx_images(images, ds.n_features, limit);
  ds.labels = read_idx_labels(labels, limit);
  ds.validate();
  return ds;
}

// --- synthetic data -------------------------------------------------------

struct BlobSpec {
  std::size_t n_classes = 10;
  std::size_t n_features = 32;
  std::size_t samples_per_class = 600;
  double spread = 0.15;  // per-feature SD around each class centre
  std::uint64_t seed = 1;
};

// Gaussian class blobs. Centres uniform in [0.25, 0.75]^F, samples clipped
// to [0, 1]. Rows are emitted class-interleaved: 0, 1, ..., C-1, 0, 1, ...
inline Dataset synthetic_blobs(const BlobSpec& spec) {
  if (spec.n_classes < 2) throw DomainError("synthetic data needs >= 2 classes");
  if (spec.n_features < 1) throw DomainError("synthetic data needs >= 1 feature");
  Rng rng(derive_seed(spec.seed, {tag("blobs")}));
  std::vector<double> centres(spec.n_classes * spec.n_features);
  for (double& c : centres) c = 0.25 + 0.5 * rng.uniform();

  Dataset ds{spec.n_features, spec.n_classes, {}, {}};
  ds.features.reserve(spec.n_classes * spec.samples_per_class * spec.n_features);
  for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      for (std::size_t f = 0; f < spec.n_features; ++f) {
        const double v = centres[c * spec.n_features + f] + spec.spread * rng.normal();
        ds.features.push_back(std::clamp(v, 0.0, 1.0));
      }
      ds.labels.push_back(static_cast<int>(c));
    }
  }
  return ds;
}

// --- partitioning ---------------------------------------------------------

// N_k rows drawn uniformly without replacement (partial Fisher-Yates).
inline Dataset sample_shard(const Dataset& full, std::size_t n_k, Rng& rng) {
  if (n_k < 1) throw DomainError("shard size must be >= 1");
  if (n_k > full.size())
    throw DomainError("shard size " + std::to_string(n_k) + " exceeds dataset size " +
                      std::to_string(full.size()));
  std::vector<std::size_t> idx(full.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(full.size() - i));
    std::swap(idx[i], idx[j]);
  }
  return full.subset(std::span<const std::size_t>(idx.data(), n_k));
}

// Independent sampling per client, in the given client order. Shards may
// overlap across clients.
inline std::map<orbits::SatIndex, Dataset> partition_data(const Dataset& full,
                                                          std::span<const orbits::SatIndex> clients,
                                                          std::size_t n_k, Rng& rng) {
  std::map<orbits::SatIndex, Dataset> out;
  for (const auto& c : clients) out[c] = sample_shard(full, n_k, rng);
  return out;
}

}  // namespace fello
