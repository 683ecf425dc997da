#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "xrsim/errors.hpp"
#include "xrsim/traffic.hpp"

using namespace xrsim;

TEST_CASE("video size law follows rate / (fps * 8)") {
  const auto vr = build_video_stream(Service::VR, Direction::DL, 60.0, 30e6);
  CHECK(vr.size_bytes.mean == doctest::Approx(62500.0));
  CHECK(vr.size_bytes.std == doctest::Approx(0.105 * 62500.0));
  CHECK(vr.size_bytes.min == doctest::Approx(31250.0));
  CHECK(vr.size_bytes.max == doctest::Approx(93750.0));
  CHECK(vr.pdb_ms == 10.0);

  const auto cg = build_video_stream(Service::CG, Direction::DL, 60.0, 8e6);
  CHECK(cg.size_bytes.mean == doctest::Approx(16666.667).epsilon(1e-6));
  CHECK(cg.pdb_ms == 15.0);

  const auto ar_ul = build_video_stream(Service::AR, Direction::UL, 60.0, 10e6, std::nullopt);
  CHECK(ar_ul.size_bytes.mean == doctest::Approx(20833.333).epsilon(1e-6));
  CHECK(ar_ul.pdb_ms == 30.0);
  CHECK_FALSE(ar_ul.jitter_ms.has_value());
}

TEST_CASE("unsupported combinations are rejected") {
  CHECK_THROWS_AS(build_video_stream(Service::VR, Direction::DL, 50.0, 30e6), ConfigError);
  CHECK_THROWS_AS(build_video_stream(Service::VR, Direction::UL, 60.0, 10e6), ConfigError);
  CHECK_THROWS_AS(build_audio_stream(Service::CG, Direction::UL, 1.12e6), ConfigError);
}

TEST_CASE("motion stream: 100 bytes every 4 ms") {
  const auto m = build_motion_stream();
  RngStream rng(1, 2);
  const auto pk = generate_arrivals(m, rng, 100.0);
  REQUIRE(pk.size() == 25);
  for (std::size_t i = 0; i < pk.size(); ++i) {
    CHECK(pk[i].size_bytes == 100);
    CHECK(pk[i].arrival_ms == doctest::Approx(4.0 * i));
    CHECK(pk[i].deadline_ms - pk[i].arrival_ms == doctest::Approx(10.0));
  }
}

TEST_CASE("audio packets are constant size at 100 per second") {
  const auto a = build_audio_stream(Service::AR, Direction::DL, 0.756e6);
  RngStream rng(1, 2);
  const auto pk = generate_arrivals(a, rng, 1000.0);
  CHECK(pk.size() == 100);
  for (const auto& p : pk) CHECK(p.size_bytes == 945);
  CHECK(a.pdb_ms == 30.0);
  const auto ul = build_audio_stream(Service::AR, Direction::UL, 1.12e6);
  CHECK(ul.size_bytes.mean == doctest::Approx(1400.0));
}

TEST_CASE("jitter stays within the window around the nominal grid") {
  const auto v = build_video_stream(Service::VR, Direction::DL, 60.0, 30e6);
  RngStream rng(9, 1);
  const auto pk = generate_arrivals(v, rng, 20000.0, 3.0);
  const double period = 1000.0 / 60.0;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : pk) {
    const double k = std::round((p.arrival_ms - 3.0) / period);
    const double j = p.arrival_ms - 3.0 - k * period;
    CHECK(j >= -4.0);
    CHECK(j <= 4.0);
    sum += j;
    ++n;
    CHECK(p.deadline_ms - p.arrival_ms == doctest::Approx(10.0));
  }
  CHECK(std::abs(sum / n) < 0.1);
  // Consecutive gaps are period +- 8 ms at most.
  for (std::size_t i = 1; i < pk.size(); ++i) {
    const double gap = pk[i].arrival_ms - pk[i - 1].arrival_ms;
    CHECK(gap >= period - 8.0 - 1e-9);
    CHECK(gap <= period + 8.0 + 1e-9);
  }
}

TEST_CASE("empirical sizes match the truncated gaussian oracle") {
  const auto v = build_video_stream(Service::CG, Direction::DL, 60.0, 30e6);
  RngStream rng(4, 4);
  const auto pk = generate_arrivals(v, rng, 1000.0 * 100000 / 60.0);
  REQUIRE(pk.size() >= 99990);
  double s = 0.0, s2 = 0.0;
  for (const auto& p : pk) {
    s += p.size_bytes;
    s2 += static_cast<double>(p.size_bytes) * p.size_bytes;
  }
  const double mean = s / pk.size();
  const double sd = std::sqrt(s2 / pk.size() - mean * mean);
  const auto ref = oracle::truncated_gaussian(62500.0, 6562.5, 31250.0, 93750.0);
  CHECK(mean == doctest::Approx(62500.0).epsilon(0.01));
  CHECK(sd == doctest::Approx(ref.std).epsilon(0.05));
}

TEST_CASE("multi-stream split halves the frame and doubles the rate") {
  const auto v = build_video_stream(Service::VR, Direction::DL, 60.0, 30e6);
  const auto [a, b] = split_multi_stream(v);
  CHECK(a.size_bytes.mean == doctest::Approx(31250.0));
  CHECK(a.size_bytes.std == doctest::Approx(0.105 * 31250.0));
  CHECK(a.fps == 120.0);
  CHECK(a.avg_rate_bps + b.avg_rate_bps == doctest::Approx(30e6));
  CHECK(a.phase != b.phase);
  CHECK_THROWS_AS(split_multi_stream(a), ConfigError);
  CHECK_NOTHROW(split_multi_stream(a, true));
  CHECK_THROWS_AS(split_multi_stream(build_motion_stream()), ConfigError);

  // The members interleave: together they emit on the 120 fps grid.
  auto a0 = a, b0 = b;
  a0.jitter_ms.reset();
  b0.jitter_ms.reset();
  RngStream r1(1, 1), r2(1, 2);
  const auto pa = generate_arrivals(a0, r1, 1000.0);
  const auto pb = generate_arrivals(b0, r2, 1000.0);
  CHECK(pa.size() == 60);
  CHECK(pb.size() == 60);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].arrival_ms == doctest::Approx(i * 1000.0 / 60.0));
    CHECK(pb[i].arrival_ms == doctest::Approx(i * 1000.0 / 60.0 + 1000.0 / 120.0));
  }
}

TEST_CASE("session composition per service") {
  const auto vr = make_session_template(Service::VR);
  REQUIRE(vr.streams.size() == 2);
  CHECK(vr.streams[0].direction == Direction::DL);
  CHECK(vr.streams[1].kind == StreamKind::motion_control);

  const auto ar = make_session_template(Service::AR);
  REQUIRE(ar.streams.size() == 3);
  CHECK(ar.streams[2].direction == Direction::UL);
  CHECK(ar.streams[2].kind == StreamKind::video);

  SessionOptions o;
  o.multi_stream_video = true;
  o.include_audio = true;
  o.include_ul_audio = true;
  const auto ar_full = make_session_template(Service::AR, o);
  // DL pair, motion, UL pair, DL audio, UL audio.
  CHECK(ar_full.streams.size() == 7);
}

TEST_CASE("a UE's traffic does not depend on other UEs") {
  const auto tmpl = make_session_template(Service::AR);
  const RngStream root(11, 0);
  const auto ue_rng = [&](std::uint32_t ue) { return root.derive(make_stream_id({2, 0, ue})); };
  const auto a = generate_session(tmpl, 3, ue_rng(3), 2000.0);
  // Generating other sessions first must not change UE 3.
  for (std::uint32_t u = 0; u < 3; ++u) generate_session(tmpl, u, ue_rng(u), 2000.0);
  const auto b = generate_session(tmpl, 3, ue_rng(3), 2000.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    REQUIRE(a[s].size() == b[s].size());
    for (std::size_t i = 0; i < a[s].size(); ++i) {
      CHECK(a[s][i].arrival_ms == b[s][i].arrival_ms);
      CHECK(a[s][i].size_bytes == b[s][i].size_bytes);
    }
  }
  const auto other = generate_session(tmpl, 4, ue_rng(4), 2000.0);
  CHECK(other[0][0].size_bytes != a[0][0].size_bytes);
}

TEST_CASE("arrivals stay inside the horizon") {
  const auto v = build_video_stream(Service::VR, Direction::DL, 90.0, 45e6);
  RngStream rng(2, 2);
  const auto pk = generate_arrivals(v, rng, 500.0, 1.0);
  for (const auto& p : pk) {
    CHECK(p.arrival_ms >= 0.0);
    CHECK(p.arrival_ms < 500.0);
  }
  CHECK(generate_arrivals(v, rng, 0.0).empty());
}
