#include <doctest.h>

#include <cmath>
#include <random>

#include "wigsim/channel.hpp"
#include "wigsim/error.hpp"

using namespace wigsim;

namespace {

// Gains for two links 0->1 and 2->3 with cross paths 2->1 and 0->3.
ChannelState two_link_state(double direct, double cross) {
  ChannelState st(1);
  st.set_gain(0, 1, direct);
  st.set_gain(2, 3, direct);
  st.set_gain(2, 1, cross);
  st.set_gain(0, 3, cross);
  return st;
}

}  // namespace

TEST_CASE("config defaults and validation") {
  ChannelConfig cfg;
  CHECK(cfg.bandwidth_hz == 1e6);
  CHECK(cfg.p_max_w == 0.5);
  CHECK(cfg.payload_bits == 1e6);
  CHECK(cfg.tau_max_s == 0.5);
  CHECK(cfg.pathloss_a == 30.6);
  CHECK(cfg.pathloss_b == 36.7);
  CHECK_NOTHROW(cfg.validate());
  for (double ChannelConfig::*field : {&ChannelConfig::bandwidth_hz, &ChannelConfig::noise_power_w,
                                       &ChannelConfig::payload_bits, &ChannelConfig::tau_max_s,
                                       &ChannelConfig::p_max_w, &ChannelConfig::min_distance_m}) {
    auto bad = cfg;
    bad.*field = 0.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad.*field = -1.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
  }
  auto per_node = cfg;
  per_node.payload_bits_per_node = {1e6, 2e6};
  CHECK(per_node.payload(1) == 2e6);
  CHECK(per_node.required_rate(1) == 4e6);
  CHECK(cfg.payload(7) == 1e6);
}

TEST_CASE("placement") {
  ChannelConfig cfg;
  SUBCASE("single node inside the square") {
    const auto p = place_nodes(1, cfg, 3);
    REQUIRE(p.size() == 1);
    CHECK(p[0].x >= 0.0);
    CHECK(p[0].x < 100.0);
    CHECK(p[0].y >= 0.0);
    CHECK(p[0].y < 100.0);
  }
  SUBCASE("deterministic per seed") {
    const auto a = place_nodes(10, cfg, 42), b = place_nodes(10, cfg, 42), c = place_nodes(10, cfg, 43);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(a[i].x == b[i].x);
      CHECK(a[i].y == b[i].y);
    }
    CHECK(a[0].x != c[0].x);
  }
  SUBCASE("zero side puts everyone at the origin, distances clamp") {
    cfg.area_side_m = 0.0;
    const auto p = place_nodes(3, cfg, 1);
    for (const auto& q : p) {
      CHECK(q.x == 0.0);
      CHECK(q.y == 0.0);
    }
    CHECK(link_distance(cfg, p, 0, 2) == cfg.min_distance_m);
  }
  SUBCASE("fixed distance mode") {
    cfg.placement = Placement::fixed_distance;
    const auto p = place_nodes(4, cfg, 1);
    CHECK(link_distance(cfg, p, 0, 3) == 100.0);
    CHECK(link_distance(cfg, p, 2, 1) == 100.0);
  }
}

TEST_CASE("path loss at the reference distance") {
  ChannelConfig cfg;
  // 30.6 + 36.7 * log10(100) = 104 dB.
  CHECK(path_gain(cfg, 100.0) == doctest::Approx(std::pow(10.0, -10.4)).epsilon(1e-14));
  CHECK(path_gain(cfg, 100.0) == doctest::Approx(3.981071705534972e-11).epsilon(1e-12));
  CHECK(path_gain(cfg, 1.0) == doctest::Approx(std::pow(10.0, -3.06)).epsilon(1e-14));
  CHECK(path_gain(cfg, 50.0) > path_gain(cfg, 100.0));
}

TEST_CASE("fading draws are unit-mean exponential") {
  double sum = 0.0, sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double g = fading_draw(5, static_cast<std::size_t>(i), 0, 1);
    CHECK_UNARY(g >= 0.0);
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  CHECK(mean >= 0.99);
  CHECK(mean <= 1.01);
  CHECK(sum_sq / n == doctest::Approx(2.0).epsilon(0.05));  // E[g^2] = 2
}

TEST_CASE("channel sampling") {
  ChannelConfig cfg;
  cfg.placement = Placement::fixed_distance;
  const auto pos = place_nodes(4, cfg, 0);
  const std::vector<DirectedLink> pairs{{0, 1}, {2, 3}, {2, 1}, {0, 3}};
  const auto st = sample_channel(pos, pairs, 7, cfg, 99);
  CHECK(st.slot() == 7);
  CHECK(st.size() == 4);
  for (const auto& p : pairs) {
    CHECK(st.gain(p.tx, p.rx) == doctest::Approx(path_gain(cfg, 100.0) * fading_draw(99, 7, p.tx, p.rx)));
  }
  CHECK_THROWS_AS(st.gain(1, 0), InternalError);

  SUBCASE("a pair's gain does not depend on what else is sampled") {
    const std::vector<DirectedLink> one{{2, 1}};
    CHECK(sample_channel(pos, one, 7, cfg, 99).gain(2, 1) == st.gain(2, 1));
  }
  SUBCASE("slots draw independently") {
    CHECK(sample_channel(pos, pairs, 8, cfg, 99).gain(0, 1) != st.gain(0, 1));
  }
  SUBCASE("gains are clamped away from zero") {
    cfg.pathloss_a = 400.0;
    const auto weak = sample_channel(pos, pairs, 7, cfg, 99);
    CHECK(weak.gain(0, 1) == kMinGain);
  }
}

TEST_CASE("sinr") {
  SUBCASE("no interference") {
    ChannelState st;
    st.set_gain(0, 1, 4.0);
    const std::vector<double> p{2.0, 0.0};
    const std::vector<NodeId> tx{0};
    CHECK(sinr({0, 1}, p, tx, st, 1.0) == 8.0);
  }
  SUBCASE("one interferer") {
    // direct 4 * 2 = 8, cross 1.5 * 2 = 3, noise 1 -> 8 / 4.
    const auto st = two_link_state(4.0, 1.5);
    const std::vector<double> p{2.0, 0.0, 2.0, 0.0};
    const std::vector<NodeId> tx{0, 2};
    CHECK(sinr({0, 1}, p, tx, st, 1.0) == 2.0);
  }
  SUBCASE("zero power") {
    const auto st = two_link_state(4.0, 1.5);
    const std::vector<double> p{0.0, 0.0, 2.0, 0.0};
    const std::vector<NodeId> tx{0, 2};
    CHECK(sinr({0, 1}, p, tx, st, 1.0) == 0.0);
  }
  SUBCASE("monotone in own and interfering power") {
    const auto st = two_link_state(3.0, 0.7);
    const std::vector<NodeId> tx{0, 2};
    double prev_own = -1.0, prev_int = 1e300;
    for (double p = 0.1; p < 5.0; p += 0.1) {
      const std::vector<double> own{p, 0.0, 1.0, 0.0};
      const std::vector<double> intf{1.0, 0.0, p, 0.0};
      const double a = sinr({0, 1}, own, tx, st, 0.5);
      const double b = sinr({0, 1}, intf, tx, st, 0.5);
      CHECK(a > prev_own);
      CHECK(b <= prev_int);
      prev_own = a;
      prev_int = b;
    }
  }
  SUBCASE("missing cross gain is an internal error") {
    ChannelState st;
    st.set_gain(0, 1, 1.0);
    const std::vector<double> p{1.0, 0.0, 1.0};
    const std::vector<NodeId> tx{0, 2};
    CHECK_THROWS_AS(sinr({0, 1}, p, tx, st, 1.0), InternalError);
  }
}

TEST_CASE("rates and outage") {
  CHECK(achievable_rate(0.0, 1e6) == 0.0);
  CHECK(achievable_rate(3.0, 1e6) == 2e6);
  CHECK(achievable_rate(1.0, 1.0) == 1.0);
  CHECK(achievable_rate(5.0, 2e6) == doctest::Approx(2.0 * achievable_rate(5.0, 1e6)));
  CHECK(achievable_rate(2.0, 1e6) > achievable_rate(1.999, 1e6));

  CHECK(min_rate(1e6, 0.5) == 2e6);
  CHECK(min_rate(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(min_rate(1.0, 0.0), ParameterError);

  const double r = 2e6;
  CHECK(communication_indicator(r, r));
  CHECK_FALSE(communication_indicator(std::nextafter(r, 0.0), r));
  CHECK(communication_indicator(0.0, 0.0));
}

TEST_CASE("transmission energy") {
  CHECK(transmission_energy(0.5, 1e6, 2e6, 0.5) == 0.25);
  CHECK(transmission_energy(0.5, 1e6, 4e6, 0.5) == 0.125);
  // Outage keeps the channel for the whole deadline.
  CHECK(transmission_energy(0.5, 1e6, 1e6, 0.5) == 0.25);
  CHECK(transmission_energy(0.5, 1e6, 0.0, 0.5) == 0.25);
  CHECK(transmission_energy(0.0, 1e6, 0.0, 0.5) == 0.0);
}
