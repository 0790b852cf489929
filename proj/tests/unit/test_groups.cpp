// Copyright 2026 The wconv Authors.
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

#include <map>
#include <queue>
#include <random>
#include <set>

#include "core/error.hpp"
#include "core/groups.hpp"
#include "doctest.h"

using namespace wconv;

namespace {

// Independent BFS over (a, b, c) triples with the matrix product written out.
std::map<std::array<long, 3>, int> heisenberg_bfs(int radius) {
  std::map<std::array<long, 3>, int> dist;
  std::queue<std::array<long, 3>> q;
  dist[{0, 0, 0}] = 0;
  q.push({0, 0, 0});
  const int gens[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    const int d = dist[x];
    if (d == radius) continue;
    for (auto& s : gens) {
      // [[1,a,c],[0,1,b],[0,0,1]] * [[1,s0,0],[0,1,s1],[0,0,1]]
      std::array<long, 3> y = {x[0] + s[0], x[1] + s[1], x[2] + x[0] * s[1]};
      if (dist.emplace(y, d + 1).second) q.push(y);
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("multiply and inverse on each family") {
  CHECK(multiply(GroupElement::lattice({1, 2}), GroupElement::lattice({3, -1})) ==
        GroupElement::lattice({4, 1}));
  CHECK(multiply(GroupElement::heisenberg(1, 0, 0), GroupElement::heisenberg(0, 1, 0)) ==
        GroupElement::heisenberg(1, 1, 1));
  CHECK(multiply(GroupElement::subset({1, 3}), GroupElement::subset({3, 5})) ==
        GroupElement::subset({1, 5}));
  CHECK(inverse(GroupElement::lattice({5})) == GroupElement::lattice({-5}));
  CHECK(inverse(GroupElement::heisenberg(1, 1, 1)) == GroupElement::heisenberg(-1, -1, 0));
  CHECK(inverse(GroupElement::subset({2, 7})) == GroupElement::subset({2, 7}));
}

TEST_CASE("Heisenberg product matches 3x3 matrix multiplication") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int i = 0; i < 200; ++i) {
    const long a = d(rng), b = d(rng), c = d(rng), a2 = d(rng), b2 = d(rng), c2 = d(rng);
    // upper-triangular product: (a+a2, b+b2, c+c2+a*b2)
    const GroupElement z =
        multiply(GroupElement::heisenberg(a, b, c), GroupElement::heisenberg(a2, b2, c2));
    CHECK(z == GroupElement::heisenberg(a + a2, b + b2, c + c2 + a * b2));
    const GroupElement x = GroupElement::heisenberg(a, b, c);
    CHECK(multiply(x, inverse(x)) == GroupElement::heisenberg(0, 0, 0));
    CHECK(inverse(inverse(x)) == x);
  }
}

TEST_CASE("word length examples") {
  CHECK(GroupModel::lattice(1).length(GroupElement::lattice({7})) == 7);
  const GroupModel h = GroupModel::heisenberg();
  CHECK(h.length(GroupElement::heisenberg(0, 0, 1)) == 4);
  CHECK(h.length(h.identity()) == 0);
  CHECK(GroupModel::lattice(3).length(GroupModel::lattice(3).identity()) == 0);
  const GroupModel lf = GroupModel::locally_finite(10);
  CHECK(lf.length(lf.identity()) == 0);
  CHECK(lf.length(GroupElement::subset({3, 1})) == 3);
}

TEST_CASE("family mismatch and caps raise errors") {
  const GroupModel z2 = GroupModel::lattice(2);
  CHECK_THROWS_AS(z2.length(GroupElement::heisenberg(1, 0, 0)), Error);
  CHECK_THROWS_AS(z2.length(GroupElement::lattice({1})), Error);
  const GroupModel small = GroupModel::lattice(2, {4, 1000});
  try {
    small.ball(5);
    FAIL("expected radius error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRadiusExceeded);
  }
  const GroupModel tiny = GroupModel::heisenberg({32, 100});
  try {
    tiny.ball(10);
    FAIL("expected size cap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSizeCap);
  }
  CHECK_THROWS_AS(GroupModel::locally_finite(5).length(GroupElement::subset({6})), Error);
}

TEST_CASE("ball sizes") {
  CHECK(GroupModel::lattice(1).ball(3).size() == 7);
  CHECK(GroupModel::lattice(2).ball(2).size() == 13);
  for (const GroupModel& g : {GroupModel::lattice(2), GroupModel::heisenberg(),
                              GroupModel::locally_finite(6)}) {
    const auto b = g.ball(0);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == g.identity());
  }
  CHECK(GroupModel::locally_finite(6).ball(4).size() == 16);
}

TEST_CASE("Heisenberg sphere sizes match the known growth series") {
  // growth series of H3(Z) with the standard generators
  const std::vector<std::uint64_t> known = {1,   4,    12,   36,   82,   164, 294,
                                            476, 724, 1052, 1464, 1972, 2590};
  CHECK(GroupModel::heisenberg().sphere_sizes(12) == known);
}

TEST_CASE("BFS lengths agree with an independent BFS and the closed form") {
  const int R = 14;
  const auto dist = heisenberg_bfs(R);
  const GroupModel h = GroupModel::heisenberg();
  const auto ball = h.ball(R);
  CHECK(ball.size() == dist.size());
  for (const auto& [x, d] : dist) {
    REQUIRE(heisenberg_length(x[0], x[1], x[2]) == d);
  }
  for (const GroupElement& x : ball) {
    REQUIRE(dist.count({x.c[0], x.c[1], x.c[2]}) == 1);
  }
}

TEST_CASE("closed-form Heisenberg length is the word metric far from the identity") {
  // tau(e) = 0, |tau(xs) - tau(x)| = 1, and every x != e has a neighbour one
  // step closer: together these characterise the word metric.
  const GroupModel h = GroupModel::heisenberg();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> ab(-400, 400);
  std::uniform_int_distribution<long> cc(-200000, 200000);
  const auto& gens = h.generators();
  for (int i = 0; i < 4000; ++i) {
    const GroupElement x = GroupElement::heisenberg(ab(rng), ab(rng), i % 2 ? cc(rng) : ab(rng));
    const int t = h.length(x);
    bool has_descent = false;
    for (const GroupElement& s : gens) {
      const int ts = h.length(multiply(x, s));
      REQUIRE(std::abs(ts - t) == 1);
      has_descent = has_descent || ts == t - 1;
    }
    REQUIRE(has_descent);
    CHECK(h.length(inverse(x)) == t);
  }
}

TEST_CASE("BFS length equals brute force over words of length <= 4") {
  for (const GroupModel& g : {GroupModel::lattice(2), GroupModel::heisenberg()}) {
    std::map<GroupElement, int> best;
    std::vector<GroupElement> frontier = {g.identity()};
    best[g.identity()] = 0;
    for (int n = 1; n <= 4; ++n) {
      std::vector<GroupElement> next;
      for (const GroupElement& w : frontier) {
        for (const GroupElement& s : g.generators()) {
          const GroupElement y = multiply(w, s);
          next.push_back(y);
          if (!best.count(y)) best[y] = n;
        }
      }
      frontier = std::move(next);
    }
    for (const auto& [x, n] : best) CHECK(g.length(x) == n);
    CHECK(g.ball(4).size() == best.size());
  }
}

TEST_CASE("word length is subadditive and symmetric on balls") {
  for (const GroupModel& g : {GroupModel::lattice(2), GroupModel::heisenberg(),
                              GroupModel::locally_finite(8)}) {
    const auto b = g.ball(3);
    for (const GroupElement& x : b) {
      CHECK(g.length(inverse(x)) == g.length(x));
      for (const GroupElement& y : b) {
        REQUIRE(g.length(multiply(x, y)) <= g.length(x) + g.length(y));
      }
    }
  }
}

TEST_CASE("growth report fits") {
  const GrowthReport z2 = growth_report(GroupModel::lattice(2), 20);
  CHECK(z2.polynomial_degree == doctest::Approx(2.0).epsilon(0.15));
  for (int n = 0; n <= 20; ++n) CHECK(z2.balls[n] == std::uint64_t(2 * n * n + 2 * n + 1));
  const GrowthReport z1 = growth_report(GroupModel::lattice(1), 20);
  CHECK(std::abs(z1.polynomial_degree - 1.0) <= 0.2);
  const GrowthReport h = growth_report(GroupModel::heisenberg(), 12);
  CHECK(h.polynomial_degree >= 3.5);
  CHECK(h.polynomial_degree <= 4.5);
  std::uint64_t cum = 0;
  for (std::size_t n = 0; n < h.spheres.size(); ++n) {
    cum += h.spheres[n];
    CHECK(h.balls[n] == cum);
  }
  CHECK_THROWS_AS(growth_report(GroupModel::lattice(1), 2), Error);
}

TEST_CASE("log shell counts") {
  const GroupModel z3 = GroupModel::lattice(3);
  const auto s3 = z3.sphere_sizes(10);
  for (int n = 0; n <= 10; ++n) {
    const ShellCount sc = z3.log_shell_count(n);
    CHECK(sc.exact);
    CHECK(std::exp(sc.log_count) == doctest::Approx(double(s3[n])).epsilon(1e-10));
  }
  // far shells of Z^2 have 4n elements
  CHECK(std::exp(GroupModel::lattice(2).log_shell_count(5000).log_count) ==
        doctest::Approx(20000.0).epsilon(1e-9));
  // beyond the radius cap only a majorant is available
  const GroupModel h8 = GroupModel::heisenberg({8, 5'000'000});
  const auto exact = GroupModel::heisenberg().sphere_sizes(14);
  for (int n = 0; n <= 14; ++n) {
    const ShellCount sc = h8.log_shell_count(n);
    CHECK(sc.exact == (n <= 8));
    CHECK(std::exp(sc.log_count) >= double(exact[n]) * (1 - 1e-12));
  }
  const GroupModel lf = GroupModel::locally_finite(12);
  CHECK(std::exp(lf.log_shell_count(0).log_count) == doctest::Approx(1.0));
  CHECK(std::exp(lf.log_shell_count(5).log_count) == doctest::Approx(16.0));
}
