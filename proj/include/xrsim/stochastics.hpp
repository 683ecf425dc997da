#pragma once

#include <cstdint>
#include <initializer_list>

namespace xrsim {

/// Splittable pseudo-random stream.
///
/// The generator state is derived purely from (seed, stream_id), so two
/// streams with the same pair produce identical sequences on every platform,
/// and a stream never depends on how many other streams exist. The core is
/// xoshiro256** seeded through splitmix64; normal deviates use the polar
/// method so no standard-library distribution (whose algorithms are
/// implementation-defined) is involved.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double standard_normal();
  bool bernoulli(double p) { return uniform() < p; }

  /// Child stream keyed by `tag`; independent of draws already taken here.
  RngStream derive(std::uint64_t tag) const;

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
};

/// Combines a list of identifiers (ue, flow, purpose, ...) into one stream id.
std::uint64_t make_stream_id(std::initializer_list<std::uint64_t> parts);

/// Well-known purposes for stream derivation. The numeric values are part of
/// the reproducibility contract; do not renumber.
enum class RngPurpose : std::uint64_t {
  drop = 1,
  traffic = 2,
  channel = 3,
  harq = 4,
  drx = 5,
  site_shadowing = 6,
};

enum class Truncation { rejection, clamp };

struct TruncGaussSpec {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;

  /// Throws ConfigError when the triple is inconsistent.
  void validate() const;
};

/// Gaussian(mean, std) conditioned on [min, max]. With Truncation::clamp the
/// unconditioned draw is clipped to the bounds instead (cross-check mode).
double sample_trunc_gauss(RngStream& rng, const TruncGaussSpec& spec,
                          Truncation mode = Truncation::rejection);

}  // namespace xrsim
