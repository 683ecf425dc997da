#include "xrsim/stochastics.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <set>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2));
  return splitmix64(x);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

void warn_once(const std::string& key, const std::string& message) {
  static std::mutex m;
  static std::set<std::string> seen;
  std::lock_guard lock(m);
  if (seen.insert(key).second) std::cerr << "warning: " << message << '\n';
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = mix(seed, stream_id);
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::standard_normal() {
  // Marsaglia polar method; the second deviate is discarded so the stream
  // position stays a pure function of the number of calls.
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

RngStream RngStream::derive(std::uint64_t tag) const {
  return RngStream(seed_, mix(stream_id_, tag));
}

std::uint64_t make_stream_id(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = mix(h, p);
  return h;
}

void TruncGaussSpec::validate() const {
  if (!(std >= 0.0) || !std::isfinite(std))
    throw ConfigError("truncated gaussian: std must be finite and >= 0");
  if (!(min <= max)) throw ConfigError("truncated gaussian: min > max");
  if (!(min <= mean && mean <= max))
    throw ConfigError("truncated gaussian: mean outside [min, max]");
  if (std > 0.0 && !(min < max))
    throw ConfigError("truncated gaussian: min == max with positive std");
}

double sample_trunc_gauss(RngStream& rng, const TruncGaussSpec& spec, Truncation mode) {
  spec.validate();
  if (spec.std == 0.0) return spec.mean;

  if (mode == Truncation::clamp) {
    const double v = spec.mean + spec.std * rng.standard_normal();
    return std::fmin(std::fmax(v, spec.min), spec.max);
  }

  const double width = spec.max - spec.min;
  if (width >= spec.std) {
    // Gaussian proposal; the mean lies inside, so acceptance is >= ~0.34.
    for (;;) {
      const double v = spec.mean + spec.std * rng.standard_normal();
      if (v >= spec.min && v <= spec.max) return v;
    }
  }
  // Narrow window: uniform proposal with Gaussian acceptance. The density
  // peak is inside the window, so acceptance is >= exp(-1/2).
  for (;;) {
    const double v = rng.uniform(spec.min, spec.max);
    const double z = (v - spec.mean) / spec.std;
    if (rng.uniform() < std::exp(-0.5 * z * z)) return v;
  }
}

}  // namespace xrsim
