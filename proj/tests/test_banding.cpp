// Copyright 2026 The quditsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "quditsum/banding.hpp"

using namespace quditsum;

namespace {

double raw_bound(int d, int n, double eps) {
  return 0.5 * std::log((n - 1) * (d * d - 1.0) * std::numbers::pi * std::numbers::pi / (3 * eps)) / std::log(double(d));
}

}  // namespace

TEST_CASE("min_banding_order examples") {
  const auto b2 = min_banding_order(2, 9, 0.01);
  CHECK(b2.q_min == 7);
  CHECK(b2.raw == doctest::Approx(6.474).epsilon(1e-3));
  CHECK(b2.raw == doctest::Approx(raw_bound(2, 9, 0.01)).epsilon(1e-12));
  const auto b3 = min_banding_order(3, 9, 0.01);
  CHECK(b3.q_min == 5);
  CHECK(b3.raw == doctest::Approx(4.531).epsilon(1e-3));
  CHECK(min_banding_order(2, 1, 0.01).q_min == 1);
  CHECK(min_banding_order(2, 3, 0.01).q_effective == 3);
  CHECK_THROWS_AS(min_banding_order(2, 9, 0.0), DomainError);
  CHECK_THROWS_AS(min_banding_order(2, 9, 1.0), DomainError);
}

TEST_CASE("bound soundness") {
  for (int d = 2; d <= 5; ++d)
    for (int n = 2; n <= 30; ++n)
      for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto b = min_banding_order(d, n, eps);
        CHECK(b.q_min == std::max(1, int(std::ceil(raw_bound(d, n, eps)))));
        CHECK(closed_form_worst(d, n, b.q_effective, 0.0) >= 1 - eps);
        if (d > 2) CHECK(b.raw < min_banding_order(d - 1, n, eps).raw);
      }
}

TEST_CASE("geometric tail inequality") {
  for (int d = 2; d <= 6; ++d)
    for (int r = 1; r < d; ++r)
      for (double x : {0.1, 1.0, 3.0})
        for (int J = 1; J <= 20; ++J) {
          double s = 0;
          for (int j = 1; j <= J; ++j) s += x * (d - 1) * (d - r) / std::pow(double(d), j);
          CHECK(s <= (d - r) * x + 1e-12);
        }
}

TEST_CASE("qbest_search") {
  for (int n : {3, 8}) {
    const auto c = qbest_search(2, n, 0.0, ChannelKind::PDC, InputPolicy::worst());
    CHECK(c.q_best == n);
    CHECK(c.f_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.curve.size() == std::size_t(n));
  }
  const auto c = qbest_search(2, 19, 0.1, ChannelKind::PDC, InputPolicy::worst());
  CHECK(c.q_best <= 6);
  int arg = 1;
  for (int q = 1; q <= 19; ++q) {
    CHECK(c.curve[q - 1] == doctest::Approx(closed_form_worst(2, 19, q, 0.1)).epsilon(1e-14));
    if (c.curve[q - 1] > c.curve[arg - 1]) arg = q;
  }
  CHECK(c.q_best == arg);
  CHECK(c.f_max == c.curve[arg - 1]);

  const auto w = qbest_search(3, 19, 0.04, ChannelKind::PDC, InputPolicy::worst());
  const auto u = qbest_search(3, 19, 0.04, ChannelKind::PDC, InputPolicy::uniform(1));
  CHECK(u.q_best <= w.q_best);

  // Depolarizing cells share the phase-damping values.
  const auto dp = qbest_search(3, 10, 0.05, ChannelKind::CDPC, InputPolicy::worst());
  const auto pd = qbest_search(3, 10, 0.05, ChannelKind::PDC, InputPolicy::worst());
  CHECK(dp.q_best == pd.q_best);
  CHECK(dp.f_max == doctest::Approx(pd.f_max).epsilon(1e-12));
}

TEST_CASE("amplitude-damping cells use simulation") {
  const auto c = qbest_search(2, 4, 0.05, ChannelKind::ADC, InputPolicy::worst());
  CHECK(c.curve.size() == 4);
  for (double f : c.curve) {
    CHECK(f > 0.0);
    CHECK(f <= 1.0);
  }
  CHECK(c.f_max == *std::max_element(c.curve.begin(), c.curve.end()));
}

TEST_CASE("input policies") {
  CHECK(InputPolicy::worst().resolve(3, 4) == DigitString(4, 2));
  CHECK(InputPolicy::uniform(1).resolve(3, 2) == DigitString{1, 1});
  CHECK(InputPolicy::explicit_digits({1, 0, 2}).resolve(3, 3) == DigitString{1, 0, 2});
  CHECK_THROWS_AS(InputPolicy::explicit_digits({1, 0}).resolve(3, 3), DomainError);
  CHECK_THROWS_AS(InputPolicy::uniform(3).resolve(3, 3), DomainError);
}

TEST_CASE("qbest_map") {
  SweepGrid one{{2}, {7}, {0.05}, ChannelKind::PDC, InputPolicy::worst()};
  const auto m1 = qbest_map(one);
  REQUIRE(m1.cells.size() == 1);
  const auto s = qbest_search(2, 7, 0.05, ChannelKind::PDC, InputPolicy::worst());
  CHECK(m1.cells[0].q_best == s.q_best);
  CHECK(m1.cells[0].f_max == s.f_max);

  SweepGrid g;
  g.d = {2, 3};
  for (int n = 10; n <= 50; ++n) g.n.push_back(n);
  g.p = {0.1, 0.2};
  const auto serial = qbest_map(g, 1), parallel = qbest_map(g, 4);
  REQUIRE(serial.cells.size() == 2 * 41 * 2);
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].q_best == parallel.cells[i].q_best);
    CHECK(serial.cells[i].f_max == parallel.cells[i].f_max);
  }
  CHECK(serial.cells[0].d == 2);
  CHECK(serial.cells[0].p == 0.1);
  CHECK(serial.cells[1].n == 11);
  CHECK(serial.cells[41].p == 0.2);
  REQUIRE(serial.saturation.size() == 4);
  for (const auto& sat : serial.saturation) {
    for (const auto& c : serial.cells)
      if (c.d == sat.d && c.p == sat.p && c.n >= sat.n0) CHECK(c.q_best == sat.q_best);
  }
  // d = 2, p in [0.1, 0.2]: constant over the whole scanned range.
  for (const auto& sat : serial.saturation)
    if (sat.d == 2) CHECK(sat.n0 == 10);
}

TEST_CASE("noiseless banding curve") {
  const auto c = noiseless_banding_curve(2, 2, InputPolicy::worst());
  REQUIRE(c.size() == 2);
  CHECK(c[0].second == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c[1].second == doctest::Approx(1.0).epsilon(1e-14));
  for (int d = 2; d <= 4; ++d) {
    const auto curve = noiseless_banding_curve(d, 12, InputPolicy::worst());
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second >= curve[i - 1].second - 1e-14);
    CHECK(curve.back().second == doctest::Approx(1.0).epsilon(1e-12));
  }
  auto first_reach = [](int d) {
    for (const auto& [q, f] : noiseless_banding_curve(d, 12, InputPolicy::worst()))
      if (f >= 0.99) return q;
    return 99;
  };
  CHECK(first_reach(3) < first_reach(2));
}
