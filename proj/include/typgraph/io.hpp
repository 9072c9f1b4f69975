#pragma once

// JSON and CSV formats: distributions with "num/den" probabilities,
// auxiliary channels, Markov decompositions, graph export/import, and edge
// lists.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "typgraph/core.hpp"
#include "typgraph/diagnostics.hpp"
#include "typgraph/graph.hpp"
#include "typgraph/subgraphs.hpp"

namespace typgraph {

using Json = nlohmann::json;

/// Throws InputError naming the file on a missing or malformed document.
Json load_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Fixed six decimals; non-finite values become null.
Json real_json(double v);
Json bigcount_json(const BigCount& c);
Json rational_json(const Rational& r);

/// {"x_alphabet": [...], "y_alphabet": [...], "joint": [["2/5", ...], ...]}
JointPmf joint_from_json(const Json& j);
Json joint_to_json(const JointPmf& p);
JointPmf load_joint(const std::string& path);

/// {"alphabet": [...], "probs": [...]}
Pmf pmf_from_json(const Json& j);
Json pmf_to_json(const Pmf& p);

/// {"u_alphabet": [...], "cond": [[[P(u|x,y) per u] per y] per x]}; null
/// rows allowed for zero-probability pairs.
CondPmf aux_from_json(const Json& j, const JointPmf& joint);
Json aux_to_json(const CondPmf& aux, const JointPmf& joint);

/// {"u_alphabet": [...], "weights": [...], "left": [[P(x|u)] per u],
///  "right": [[P(y|u)] per u]}; the residual is recomputed against joint.
MarkovDecomposition decomposition_from_json(const Json& j, const JointPmf& joint);
Json decomposition_to_json(const MarkovDecomposition& d);

Json params_to_json(const TypicalityParams& p);
TypicalityParams params_from_json(const Json& j);
Json spec_to_json(const GraphSpec& s);
GraphSpec spec_from_json(const Json& j);

Json stats_json(const VertexStats& s);
Json degree_bound_json(const DegreeBoundReport& r);

/// Header for an exported graph: schema, spec, sizes and degree statistics.
Json graph_header(const TypicalityGraph& g);
/// "left_rank,right_rank" followed by one line per edge in (i, j) order.
std::string edge_csv(const BipartiteGraph& g);
/// Rebuilds rosters from the spec and reads the edges back.
TypicalityGraph import_graph(const Json& header, const std::string& csv);

/// Edge list either as "left_rank,right_rank" (needs the graph header) or
/// as "x,y" digit strings (alphabet sizes inferred from the symbols seen).
EdgeDistribution parse_edge_csv(const std::string& text, const std::optional<Json>& graph_header);
std::string sequence_digits(const Sequence& s);

/// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string config_hash(const Json& config);

}  // namespace typgraph
