#include "dicomo/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dicomo/error.hpp"

namespace dicomo {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::uint64_t read_unsigned(std::istringstream& ss, std::size_t line, const char* what) {
  std::string token;
  if (!(ss >> token)) parse_fail(line, std::string("missing ") + what);
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }))
    parse_fail(line, std::string("bad ") + what + " '" + token + "'");
  try {
    return std::stoull(token);
  } catch (const std::exception&) {
    parse_fail(line, std::string(what) + " out of range");
  }
}

void expect_end(std::istringstream& ss, std::size_t line) {
  std::string extra;
  if (ss >> extra) parse_fail(line, "unexpected token '" + extra + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  return in;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::invalid_distribution, std::string("missing field '") + key + "'");
  return j.at(key);
}

} // namespace

BiDegreeSequence read_degree_sequence(std::istream& in) {
  std::vector<DegreePair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    const auto d_in = read_unsigned(ss, lineno, "in-degree");
    const auto d_out = read_unsigned(ss, lineno, "out-degree");
    expect_end(ss, lineno);
    constexpr auto lim = std::numeric_limits<std::uint32_t>::max();
    if (d_in > lim || d_out > lim) parse_fail(lineno, "degree exceeds 32 bits");
    pairs.push_back({static_cast<std::uint32_t>(d_in), static_cast<std::uint32_t>(d_out)});
  }
  return validate_sequence(std::move(pairs));
}

BiDegreeSequence read_degree_file(const std::string& path) {
  auto in = open_input(path);
  return read_degree_sequence(in);
}

void write_degree_sequence(std::ostream& out, const BiDegreeSequence& seq) {
  out << "# d_in d_out\n";
  for (const auto& p : seq.pairs()) out << p.in << ' ' << p.out << '\n';
}

Pmf pmf_from_json(const Json& spec) {
  try {
    if (spec.is_number_integer() && spec.get<std::int64_t>() >= 0) return Pmf::point(spec.get<std::uint32_t>());
    const auto type = require(spec, "type").get<std::string>();
    if (type == "point") return Pmf::point(require(spec, "value").get<std::uint32_t>());
    if (type == "poisson") return Pmf::poisson(require(spec, "mean").get<double>(), get_or(spec, "tail_mass", 1e-12));
    if (type == "powerlaw")
      return Pmf::powerlaw(require(spec, "exponent").get<double>(), get_or<std::uint32_t>(spec, "min_value", 1),
                           get_or(spec, "tail_mass", 1e-12));
    if (type == "table") {
      if (spec.contains("pmf")) return Pmf::from_probabilities(spec.at("pmf").get<std::vector<double>>());
      std::vector<std::pair<std::uint32_t, double>> table;
      for (const auto& row : require(spec, "table")) table.emplace_back(row.at(0).get<std::uint32_t>(), row.at(1).get<double>());
      return Pmf::from_table(table);
    }
    throw Error(Errc::invalid_distribution, "unknown pmf type '" + type + "'");
  } catch (const Json::exception& e) {
    throw Error(Errc::invalid_distribution, e.what());
  }
}

JointDegreeDistribution distribution_from_json(const Json& spec) {
  try {
    const auto family = require(spec, "family").get<std::string>();
    if (family == "point") return JointDegreeDistribution::point(require(spec, "in").get<std::uint32_t>(), require(spec, "out").get<std::uint32_t>());
    if (family == "poisson_product") {
      const double both = get_or(spec, "mean", -1.0);
      const double mean_in = spec.contains("mean_in") ? spec.at("mean_in").get<double>() : both;
      const double mean_out = spec.contains("mean_out") ? spec.at("mean_out").get<double>() : both;
      if (mean_in < 0 || mean_out < 0) throw Error(Errc::invalid_distribution, "poisson_product needs mean_in and mean_out");
      return JointDegreeDistribution::poisson_product(mean_in, mean_out, get_or(spec, "tail_mass", 1e-12));
    }
    if (family == "table") {
      std::vector<JointDegreeDistribution::Entry> entries;
      for (const auto& row : require(spec, "table")) {
        if (!row.is_array() || row.size() != 3) throw Error(Errc::invalid_distribution, "table rows must be [k, l, p]");
        entries.push_back({row[0].get<std::uint32_t>(), row[1].get<std::uint32_t>(), row[2].get<double>()});
      }
      return JointDegreeDistribution::table(std::move(entries));
    }
    if (family == "powerlaw_product") {
      const double both = get_or(spec, "exponent", -1.0);
      const double a_in = get_or(spec, "exponent_in", both);
      const double a_out = get_or(spec, "exponent_out", both);
      if (a_in < 0 || a_out < 0) throw Error(Errc::invalid_distribution, "powerlaw_product needs an exponent");
      return JointDegreeDistribution::powerlaw_product(a_in, a_out, get_or<std::uint32_t>(spec, "min_degree", 1),
                                                       get_or(spec, "tail_mass", 1e-12));
    }
    if (family == "product") return JointDegreeDistribution::product(pmf_from_json(require(spec, "in")), pmf_from_json(require(spec, "out")));
    throw Error(Errc::invalid_distribution, "unknown family '" + family + "'");
  } catch (const Json::exception& e) {
    throw Error(Errc::invalid_distribution, e.what());
  }
}

std::string to_string(Regime regime) {
  return regime == Regime::supercritical ? "supercritical" : "subcritical";
}

Json to_json(const TheoryConstants& tc) {
  return Json{
      {"lambda", tc.lambda},
      {"nu", tc.nu},
      {"s_plus", tc.s_plus},
      {"s_minus", tc.s_minus},
      {"nu_hat_plus", tc.nu_hat_plus},
      {"nu_hat_minus", tc.nu_hat_minus},
      {"t_plus_coeff", tc.t_plus_coeff},
      {"t_minus_coeff", tc.t_minus_coeff},
      {"typical_coeff", tc.typical_coeff},
      {"diameter_coeff", tc.diameter_coeff},
      {"regime", to_string(tc.regime)},
      {"provenance",
       {{"truncation_mass", tc.truncation_mass},
        {"iterations_plus", tc.iterations_plus},
        {"iterations_minus", tc.iterations_minus},
        {"duality_gap_plus", tc.duality_gap_plus},
        {"duality_gap_minus", tc.duality_gap_minus}}},
  };
}

void write_edge_list(std::ostream& out, const Digraph& g, std::optional<std::uint64_t> seed) {
  out << "# n=" << g.n() << " m=" << g.m() << " simple=" << (g.simple() ? "true" : "false") << " seed=";
  if (seed) out << *seed;
  else out << "none";
  out << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

EdgeList read_edge_list(std::istream& in) {
  EdgeList result;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> m;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::size_t largest = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) {
      if (lineno == 1 && line.find("n=") != std::string::npos) {
        std::istringstream ss(line.substr(line.find('#') + 1));
        std::string field;
        while (ss >> field) {
          const auto eq = field.find('=');
          if (eq == std::string::npos) continue;
          const auto key = field.substr(0, eq), value = field.substr(eq + 1);
          try {
            if (key == "n") n = std::stoull(value);
            else if (key == "m") m = std::stoull(value);
            else if (key == "simple") result.simple = value == "true";
            else if (key == "seed" && value != "none") result.seed = std::stoull(value);
          } catch (const std::exception&) {
            parse_fail(lineno, "bad header field '" + field + "'");
          }
        }
      }
      continue;
    }
    std::istringstream ss(line);
    const auto u = read_unsigned(ss, lineno, "source");
    const auto v = read_unsigned(ss, lineno, "target");
    expect_end(ss, lineno);
    if (u >= std::numeric_limits<Vertex>::max() || v >= std::numeric_limits<Vertex>::max())
      parse_fail(lineno, "vertex index exceeds 32 bits");
    largest = std::max<std::size_t>(largest, std::max(u, v) + 1);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  const std::size_t vertices = n.value_or(largest);
  if (largest > vertices) throw Error(Errc::parse_error, "edge endpoint exceeds header n");
  if (m && *m != edges.size()) throw Error(Errc::parse_error, "header m does not match the number of edges");
  result.graph = Digraph::from_edges(vertices, edges);
  if (result.simple) {
    if (!result.graph.is_simple()) throw Error(Errc::parse_error, "header claims simple but the graph is not");
    result.graph.mark_simple(1);
  }
  return result;
}

EdgeList read_edge_file(const std::string& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

Json read_json_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
}

} // namespace dicomo
