#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"
#include "dicomo/pmf.hpp"
#include "dicomo/theory.hpp"

namespace dicomo {

using Json = nlohmann::json;

/// One "d_in d_out" pair per line; blank lines and lines starting with '#'
/// are skipped. Errors carry the line number (Errc::parse_error).
BiDegreeSequence read_degree_sequence(std::istream& in);
BiDegreeSequence read_degree_file(const std::string& path);
void write_degree_sequence(std::ostream& out, const BiDegreeSequence& seq);

/// Offspring or marginal law:
///   {"type":"point","value":k}
///   {"type":"poisson","mean":x[,"tail_mass":eps]}
///   {"type":"powerlaw","exponent":a[,"min_value":k,"tail_mass":eps]}
///   {"type":"table","pmf":[p0,p1,...]}   or   {"type":"table","table":[[k,p],...]}
Pmf pmf_from_json(const Json& spec);

/// Joint law of (D-, D+), keyed by "family":
///   point            {"in":k,"out":l}
///   poisson_product  {"mean_in":x,"mean_out":y[,"tail_mass":eps]}  ("mean" sets both)
///   table            {"table":[[k,l,p],...]}
///   powerlaw_product {"exponent":a | "exponent_in":a,"exponent_out":b [,"min_degree":k,"tail_mass":eps]}
///   product          {"in":<pmf spec>,"out":<pmf spec>}
JointDegreeDistribution distribution_from_json(const Json& spec);

Json to_json(const TheoryConstants& tc);
std::string to_string(Regime regime);

struct EdgeList {
  Digraph graph;
  std::optional<std::uint64_t> seed;
  bool simple = false;
};

/// Header "# n=<n> m=<m> simple=<bool> seed=<seed>" then "source target" lines.
void write_edge_list(std::ostream& out, const Digraph& g, std::optional<std::uint64_t> seed);
/// Reads the format above. Without a header, n is one past the largest index.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_file(const std::string& path);

Json read_json_file(const std::string& path);

} // namespace dicomo
