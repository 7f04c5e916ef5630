#include <doctest.h>

#include <cmath>

#include "dicomo/error.hpp"
#include "dicomo/gwsim.hpp"
#include "dicomo/graphgen.hpp"
#include "dicomo/neighborhood.hpp"
#include "oracles.hpp"

using namespace dicomo;

namespace {

void check_invariants(const NeighborhoodProfile& p) {
  REQUIRE(!p.sizes.empty());
  REQUIRE(p.sizes[0] == 1);
  if (p.died_at) {
    REQUIRE(p.sizes[*p.died_at] == 0);
    for (unsigned t = 0; t < *p.died_at; ++t) REQUIRE(p.sizes[t] > 0);
    for (std::size_t t = *p.died_at; t < p.sizes.size(); ++t) REQUIRE(p.sizes[t] == 0);
  }
  if (p.expansion_time) {
    REQUIRE(p.sizes[*p.expansion_time] >= p.omega);
    REQUIRE(*p.expansion_time >= 1);
    for (unsigned t = 1; t < *p.expansion_time; ++t) REQUIRE(p.sizes[t] < p.omega);
  }
}

BiDegreeSequence balanced_random(std::mt19937_64& meta, std::size_t n, std::uint32_t max_deg) {
  std::vector<DegreePair> pairs(n);
  std::uint64_t in = 0, out = 0;
  for (auto& p : pairs) {
    p = {static_cast<std::uint32_t>(meta() % (max_deg + 1)), static_cast<std::uint32_t>(meta() % (max_deg + 1))};
    in += p.in;
    out += p.out;
  }
  while (in < out) ++pairs[meta() % n].in, ++in;
  while (out < in) ++pairs[meta() % n].out, ++out;
  return validate_sequence(pairs);
}

} // namespace

TEST_CASE("default_omega") {
  CHECK(default_omega(1) == 1);
  CHECK(default_omega(100) == 10);
  CHECK(default_omega(10'000) == 1000);
  // (ln n)^6 first drops below n/10 around n = 4e9
  CHECK(default_omega(std::size_t{1} << 40) == static_cast<std::uint64_t>(std::ceil(std::pow(40 * std::log(2.0), 6))));
}

TEST_CASE("neighborhood_profile: examples") {
  Rng rng(1);
  const auto line = validate_sequence(std::vector<DegreePair>(100, {1, 1}));
  for (HalfEdge s = 0; s < 100; ++s) {
    const auto p = neighborhood_profile(line, s, Direction::out, 2, 1000, rng);
    check_invariants(p);
    for (auto x : p.sizes) CHECK(x <= 1);
    CHECK(!p.expansion_time);
  }

  const auto forced = validate_sequence({{0, 1}, {1, 0}});
  const auto p = neighborhood_profile(forced, 0, Direction::out, 5, 10, rng);
  CHECK(p.sizes == std::vector<std::uint64_t>{1, 0});
  CHECK(p.died_at == 1u);
  CHECK(!p.expansion_time);

  try {
    neighborhood_profile(forced, 0, Direction::out, 0, 10, rng);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_error);
  }
}

TEST_CASE("neighborhood_profile: (2,2) graph expands by depth 7") {
  Rng rng(2);
  for (std::size_t n : {1000, 10'000}) {
    const auto seq = validate_sequence(std::vector<DegreePair>(n, {2, 2}));
    const auto g = pair_uniform(seq, rng);
    unsigned late = 0, early_deaths = 0, expanded = 0;
    for (Direction dir : {Direction::out, Direction::in})
      for (HalfEdge s = 0; s < g.m(); ++s) {
        const auto p = neighborhood_profile(g, s, dir, 50, 100);
        check_invariants(p);
        if (!p.expansion_time) {
          // the start vertex counts as discovered, so pairing back into it ends the profile
          REQUIRE(p.died_at);
          CHECK(*p.died_at <= 2);
          ++early_deaths;
          continue;
        }
        ++expanded;
        CHECK(*p.expansion_time >= 6);
        late += *p.expansion_time > 7;
      }
    // about 2 * m * (2/m) = 4 such returns are expected per graph
    CHECK(early_deaths <= 20);
    // whp statement: a handful of double collisions near the root at n = 10^3, none at 10^4
    if (n >= 10'000) CHECK(late == 0);
    else CHECK(late <= expanded / 1000);
  }
}

TEST_CASE("property: graph profile equals the lazy profile on the same pairing") {
  std::mt19937_64 meta(3);
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto seq = balanced_random(meta, 5 + meta() % 80, 3);
    if (seq.m() == 0) continue;
    const auto g = pair_uniform(seq, rng);
    Explorer ex(seq);
    const std::uint64_t omega = 1 + meta() % 20;
    for (Direction dir : {Direction::out, Direction::in})
      for (HalfEdge s = 0; s < seq.m(); ++s) {
        ExploreStop stop;
        stop.omega = omega;
        stop.max_depth = 50;
        const auto lazy = profile_of(ex.run(s, dir, stop, replay_chooser(g, dir)), omega);
        const auto eager = neighborhood_profile(g, s, dir, omega, 50);
        check_invariants(eager);
        REQUIRE(lazy.sizes == eager.sizes);
        REQUIRE(lazy.expansion_time == eager.expansion_time);
        REQUIRE(lazy.died_at == eager.died_at);
      }
  }
}

TEST_CASE("property: eager profile matches the level-size oracle") {
  std::mt19937_64 meta(5);
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto seq = balanced_random(meta, 3 + meta() % 50, 3);
    if (seq.m() == 0) continue;
    const auto g = pair_uniform(seq, rng);
    const std::vector<std::uint32_t> perm(g.pairing().begin(), g.pairing().end());
    for (HalfEdge s = 0; s < seq.m(); ++s) {
      auto want = oracle::level_sizes(seq, perm, s, 30);
      auto got = neighborhood_profile(g, s, Direction::out, std::numeric_limits<std::uint64_t>::max(), 30).sizes;
      while (!want.empty() && want.back() == 0 && want.size() > 1 && want[want.size() - 2] == 0) want.pop_back();
      got.resize(want.size(), 0);
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("thin_depth_scan: (2,2) has no thin neighbourhoods") {
  Rng rng(7);
  const std::size_t n = 10'000;
  const auto seq = validate_sequence(std::vector<DegreePair>(n, {2, 2}));
  const std::uint64_t omega = default_omega(n);
  const auto scan = thin_depth_scan(seq, Direction::out, omega, rng, 1000);
  CHECK(scan.probes == 1000);
  CHECK(scan.omega == omega);
  CHECK(scan.max_thin_depth <= static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(omega)))) + 3);
  CHECK(scan.death_times.empty());
}

TEST_CASE("thin_depth_scan: Poisson(2) product scales like ln n / ln(1/nu_hat)") {
  Rng rng(8);
  const std::size_t n = 10'000;
  const auto seq = sample_sequence(JointDegreeDistribution::poisson_product(2, 2), n, rng).sequence;
  const std::uint64_t omega = std::min<std::uint64_t>(default_omega(n), 200);
  const auto scan = thin_depth_scan(seq, Direction::out, omega, rng, seq.m());
  CHECK(scan.probes == seq.m());
  const double t_plus = std::log(static_cast<double>(n)) / std::log(1 / oracle::poisson_dual(2.0));
  // late expanders spend about log_2(omega) levels growing to width omega before the thin stretch counts
  const double burn_in = std::ceil(std::log2(static_cast<double>(omega)));
  CHECK(scan.max_thin_depth >= burn_in);
  const double ratio = (scan.max_thin_depth - burn_in) / t_plus;
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 1.5);
}

TEST_CASE("thin_depth_scan: subcritical alive depth scales like log_2 n") {
  Rng rng(9);
  const std::size_t n = 10'000;
  const auto dist = JointDegreeDistribution::table({{0, 1, 1.0 / 3}, {1, 0, 1.0 / 3}, {1, 1, 1.0 / 3}});
  const auto seq = sample_sequence(dist, n, rng).sequence;
  const auto scan = thin_depth_scan(seq, Direction::out, default_omega(n), rng, seq.m());
  CHECK(scan.unresolved == 0);
  CHECK(scan.expansion_times.empty());
  const double ratio = scan.max_thin_depth / std::log2(static_cast<double>(n));
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 1.5);
}

TEST_CASE("property: thin fraction on a DCM graph decays like nu_hat^t") {
  Rng rng(10);
  const std::size_t n = 10'000;
  const std::uint64_t omega = 50;
  const auto seq = sample_sequence(JointDegreeDistribution::poisson_product(2, 2), n, rng).sequence;
  const auto g = pair_uniform(seq, rng);
  // start after the burn-in ceil(log_2 omega) = 6, where the thin event is not yet rare
  const std::vector<unsigned> ts{7, 8, 9, 10, 11};
  std::vector<std::uint64_t> thin(ts.size(), 0);
  for (HalfEdge s = 0; s < g.m(); ++s) {
    const auto p = neighborhood_profile(g, s, Direction::out, omega, ts.back());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      bool ok = p.sizes.size() > ts[i];
      for (unsigned r = 1; ok && r <= ts[i]; ++r) ok = p.sizes[r] > 0 && p.sizes[r] < omega;
      thin[i] += ok;
    }
  }
  std::vector<Estimate> ests;
  for (auto c : thin) ests.push_back(Estimate{static_cast<double>(c) / g.m(), 0.0, g.m(), c});
  for (auto c : thin) CHECK(c > 0);
  CHECK(log_slope(ts, ests) <= std::log(oracle::poisson_dual(2.0)) + 0.15);
}

TEST_CASE("neighborhood_profile on a conditioned explorer") {
  Rng rng(11);
  const auto seq = validate_sequence(std::vector<DegreePair>(200, {2, 2}));
  ExploreStop stop;
  stop.omega = 10;
  const auto prior = lazy_explore(seq, 0, Direction::out, stop, rng);
  Explorer ex(seq, prior);
  try {
    neighborhood_profile(ex, 0, Direction::out, 10, 20, rng);
    FAIL("expected StartAlreadyPaired");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::start_already_paired);
  }
  for (HalfEdge h = 0; h < seq.m(); ++h)
    if (prior.status[1][h] == HalfEdgeStatus::undiscovered) {
      const auto p = neighborhood_profile(ex, h, Direction::in, 10, 20, rng);
      check_invariants(p);
      CHECK(p.direction == Direction::in);
      break;
    }
}
