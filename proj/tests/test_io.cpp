#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dicomo/error.hpp"
#include "dicomo/graphgen.hpp"
#include "dicomo/io.hpp"
#include "oracles.hpp"

using namespace dicomo;

namespace {

template <class Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return Errc::unsupported;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("degree files round-trip") {
  std::istringstream in("# figure one\n1 2\n\n3 2\n1 1\n");
  const auto seq = read_degree_sequence(in);
  REQUIRE(seq.n() == 3);
  CHECK(seq[1] == DegreePair{3, 2});
  std::ostringstream out;
  write_degree_sequence(out, seq);
  std::istringstream back(out.str());
  const auto again = read_degree_sequence(back);
  REQUIRE(again.n() == seq.n());
  for (std::size_t v = 0; v < seq.n(); ++v) CHECK(again[v] == seq[v]);
}

TEST_CASE("degree file errors") {
  std::istringstream bad("1 1\n2 x\n");
  CHECK(code_of([&] { read_degree_sequence(bad); }) == Errc::parse_error);
  std::istringstream bad2("1 1\n2 x\n");
  CHECK(message_of([&] { read_degree_sequence(bad2); }).find("line 2") != std::string::npos);
  std::istringstream extra("1 1 1\n");
  CHECK(code_of([&] { read_degree_sequence(extra); }) == Errc::parse_error);
  std::istringstream neg("-1 1\n");
  CHECK(code_of([&] { read_degree_sequence(neg); }) == Errc::parse_error);
  std::istringstream unbalanced("1 0\n");
  CHECK(code_of([&] { read_degree_sequence(unbalanced); }) == Errc::sum_mismatch);
  CHECK(code_of([] { read_degree_file("/nonexistent/degrees.txt"); }) == Errc::parse_error);
}

TEST_CASE("edge lists round-trip") {
  std::mt19937_64 meta(1);
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_digraph(1 + meta() % 30, meta);
    std::ostringstream out;
    const std::optional<std::uint64_t> seed = trial % 2 ? std::optional<std::uint64_t>(meta()) : std::nullopt;
    write_edge_list(out, g, seed);
    std::istringstream in(out.str());
    const auto back = read_edge_list(in);
    CHECK(back.graph.n() == g.n());
    CHECK(back.graph.edges() == g.edges());
    CHECK(back.seed == seed);
  }
  const auto seq = validate_sequence({{1, 1}, {1, 1}, {1, 1}});
  const auto simple = sample_simple(seq, rng, 1000);
  std::ostringstream out;
  write_edge_list(out, simple, 7);
  CHECK(out.str().rfind("# n=3 m=3 simple=true seed=7\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_edge_list(in);
  CHECK(back.simple);
  CHECK(back.graph.simple());
}

TEST_CASE("edge list errors and headerless input") {
  std::istringstream headerless("0 3\n3 1\n");
  const auto g = read_edge_list(headerless).graph;
  CHECK(g.n() == 4);
  CHECK(g.m() == 2);
  std::istringstream out_of_range("# n=2 m=1 simple=false seed=none\n0 5\n");
  CHECK(code_of([&] { read_edge_list(out_of_range); }) == Errc::parse_error);
  std::istringstream wrong_m("# n=2 m=3 simple=false seed=none\n0 1\n");
  CHECK(code_of([&] { read_edge_list(wrong_m); }) == Errc::parse_error);
  std::istringstream lying("# n=2 m=2 simple=true seed=none\n0 1\n0 1\n");
  CHECK(code_of([&] { read_edge_list(lying); }) == Errc::parse_error);
  std::istringstream junk("0 1\nzero one\n");
  CHECK(message_of([&] { read_edge_list(junk); }).find("line 2") != std::string::npos);
}

TEST_CASE("pmf_from_json") {
  CHECK(pmf_from_json(Json::parse(R"({"type":"point","value":3})"))[3] == 1.0);
  CHECK(pmf_from_json(Json(2))[2] == 1.0);
  const auto p = pmf_from_json(Json::parse(R"({"type":"poisson","mean":2})"));
  CHECK(p.mean() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(p[3] == doctest::Approx(oracle::poisson_pmf(2, 3)).epsilon(1e-9));
  const auto t = pmf_from_json(Json::parse(R"({"type":"table","pmf":[0.25,0.5,0.25]})"));
  CHECK(t.mean() == doctest::Approx(1.0));
  const auto t2 = pmf_from_json(Json::parse(R"({"type":"table","table":[[0,0.5],[4,0.5]]})"));
  CHECK(t2[4] == 0.5);
  const auto pl = pmf_from_json(Json::parse(R"({"type":"powerlaw","exponent":3.5,"min_value":2})"));
  CHECK(pl[1] == 0.0);
  CHECK(pl[2] > pl[3]);

  CHECK(code_of([] { pmf_from_json(Json::parse(R"({"type":"table","pmf":[0.5,0.6]})")); }) ==
        Errc::not_normalized);
  CHECK(code_of([] { pmf_from_json(Json::parse(R"({"type":"gamma"})")); }) == Errc::invalid_distribution);
  CHECK(code_of([] { pmf_from_json(Json::parse(R"({"type":"poisson"})")); }) == Errc::invalid_distribution);
}

TEST_CASE("distribution_from_json families") {
  const auto point = distribution_from_json(Json::parse(R"({"family":"point","in":2,"out":2})"));
  CHECK(point.mixed_moment() == 4.0);
  const auto pois = distribution_from_json(Json::parse(R"({"family":"poisson_product","mean":2})"));
  CHECK(pois.is_product());
  CHECK(pois.mixed_moment() == doctest::Approx(4.0).epsilon(1e-9));
  const auto table =
      distribution_from_json(Json::parse(R"({"family":"table","table":[[0,1,0.5],[1,0,0.5]]})"));
  CHECK(table.mean_in() == doctest::Approx(0.5));
  const auto prod = distribution_from_json(
      Json::parse(R"({"family":"product","in":{"type":"poisson","mean":2},"out":{"type":"point","value":2}})"));
  CHECK(prod.mixed_moment() == doctest::Approx(4.0).epsilon(1e-9));
  const auto pl = distribution_from_json(Json::parse(R"({"family":"powerlaw_product","exponent":3.5})"));
  CHECK(pl.mean_in() == doctest::Approx(pl.mean_out()));

  CHECK(code_of([] { distribution_from_json(Json::parse(R"({"family":"nope"})")); }) ==
        Errc::invalid_distribution);
  CHECK(code_of([] { distribution_from_json(Json::parse(R"({"family":"point","in":"x","out":1})")); }) ==
        Errc::invalid_distribution);
  const auto lopsided = distribution_from_json(Json::parse(R"({"family":"point","in":1,"out":2})"));
  CHECK(code_of([&] { theory_constants(lopsided); }) == Errc::invalid_distribution);
}

TEST_CASE("theory constants serialize with provenance") {
  const auto tc = theory_constants(JointDegreeDistribution::poisson_product(2, 2));
  const auto j = to_json(tc);
  CHECK(j.at("regime") == "supercritical");
  CHECK(j.at("nu").get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j.at("diameter_coeff").get<double>() == doctest::Approx(tc.diameter_coeff));
  CHECK(j.at("provenance").contains("truncation_mass"));
  CHECK(j.at("provenance").contains("iterations_plus"));
  CHECK(to_string(Regime::subcritical) == "subcritical");
}
