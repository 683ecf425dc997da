#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "xrsim/errors.hpp"
#include "xrsim/stochastics.hpp"

using namespace xrsim;

namespace {

struct Stats {
  double mean = 0.0;
  double std = 0.0;
  double skew = 0.0;
  double min = 1e300;
  double max = -1e300;
};

Stats describe(const std::vector<double>& v) {
  Stats s;
  for (double x : v) {
    s.mean += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean /= v.size();
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= v.size();
  m3 /= v.size();
  s.std = std::sqrt(m2);
  s.skew = m3 / std::pow(m2, 1.5);
  return s;
}

std::vector<double> draw(const TruncGaussSpec& spec, std::size_t n, Truncation mode,
                         std::uint64_t seed = 7) {
  RngStream rng(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = sample_trunc_gauss(rng, spec, mode);
  return v;
}

}  // namespace

TEST_CASE("same (seed, stream) pair reproduces the sequence") {
  RngStream a(42, 9), b(42, 9), c(42, 10);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("derived streams do not depend on parent draws") {
  RngStream parent(5, 1);
  const RngStream before = parent.derive(3);
  for (int i = 0; i < 17; ++i) parent.uniform();
  RngStream after = parent.derive(3);
  RngStream b = before;
  for (int i = 0; i < 100; ++i) CHECK(b.next_u64() == after.next_u64());
}

TEST_CASE("stream ids separate their parts") {
  std::set<std::uint64_t> ids;
  for (std::uint64_t a = 0; a < 20; ++a)
    for (std::uint64_t b = 0; b < 20; ++b) ids.insert(make_stream_id({a, b}));
  CHECK(ids.size() == 400);
  CHECK(make_stream_id({1, 2}) != make_stream_id({2, 1}));
}

TEST_CASE("uniform and normal first moments") {
  RngStream rng(1, 1);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.standard_normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("rejection sampling matches the quadrature moments") {
  // Video frame size law: +-50 % of the mean with a 10.5 % std, and the
  // jitter law N(0, 2) on [-4, 4].
  const TruncGaussSpec specs[] = {
      {62500.0, 6562.5, 31250.0, 93750.0},
      {0.0, 2.0, -4.0, 4.0},
      {10.0, 5.0, 8.0, 30.0},  // asymmetric window
      {0.0, 10.0, -1.0, 1.0},  // narrower than one std
  };
  for (const auto& spec : specs) {
    CAPTURE(spec.mean);
    CAPTURE(spec.std);
    const auto v = draw(spec, 1000000, Truncation::rejection);
    const Stats s = describe(v);
    const auto ref = oracle::truncated_gaussian(spec.mean, spec.std, spec.min, spec.max);
    CHECK(s.min >= spec.min);
    CHECK(s.max <= spec.max);
    CHECK(std::abs(s.mean - ref.mean) < 0.005 * ref.std + 1e-12);
    CHECK(s.std == doctest::Approx(ref.std).epsilon(0.01));
  }
}

TEST_CASE("asymmetric window skews the draw toward the wider side") {
  const auto v = draw({10.0, 5.0, 8.0, 30.0}, 200000, Truncation::rejection);
  CHECK(describe(v).skew > 0.3);
  const auto sym = draw({0.0, 2.0, -4.0, 4.0}, 200000, Truncation::rejection);
  CHECK(std::abs(describe(sym).skew) < 0.02);
}

TEST_CASE("clamp mode piles mass onto the bounds") {
  const TruncGaussSpec spec{0.0, 2.0, -1.0, 1.0};
  const auto v = draw(spec, 400000, Truncation::clamp);
  const auto at_bound = std::count_if(v.begin(), v.end(), [](double x) { return std::abs(x) == 1.0; });
  // P(|Z| > 0.5) for Z ~ N(0, 1).
  CHECK(static_cast<double>(at_bound) / v.size() == doctest::Approx(0.617).epsilon(0.01));
  const auto ref = oracle::clamped_gaussian(0.0, 2.0, -1.0, 1.0);
  CHECK(describe(v).std == doctest::Approx(ref.std).epsilon(0.01));
}

TEST_CASE("degenerate and invalid specs") {
  RngStream rng(3, 3);
  CHECK(sample_trunc_gauss(rng, {100.0, 0.0, 100.0, 100.0}) == 100.0);
  CHECK_THROWS_AS(sample_trunc_gauss(rng, {0.0, 1.0, 2.0, 3.0}), ConfigError);
  CHECK_THROWS_AS(sample_trunc_gauss(rng, {0.0, -1.0, -1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(sample_trunc_gauss(rng, {0.0, 1.0, 0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(sample_trunc_gauss(rng, {0.0, 1.0, 1.0, -1.0}), ConfigError);
}
