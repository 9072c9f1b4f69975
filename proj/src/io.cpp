#include "typgraph/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace typgraph {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << text;
}

Json load_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

Json real_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

Json bigcount_json(const BigCount& c) { return {{"value", c.str()}, {"log2", real_json(c.log2)}}; }

Json rational_json(const Rational& r) { return format_rational(r); }

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw InputError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

Rational rational_of(const Json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
      throw InputError("field '" + where + "': " + e.what());
    }
  }
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw InputError("field '" + where + "': probabilities must be \"num/den\" strings or integers");
}

Alphabet alphabet_of(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw InputError("field '" + where + "' must be a nonempty array of labels");
  std::vector<std::string> labels;
  for (const auto& l : v) {
    if (l.is_string()) {
      labels.push_back(l.get<std::string>());
    } else if (l.is_number_integer()) {
      labels.push_back(std::to_string(l.get<std::int64_t>()));
    } else {
      throw InputError("field '" + where + "': labels must be strings");
    }
  }
  try {
    return Alphabet(std::move(labels));
  } catch (const InputError& e) {
    throw InputError("field '" + where + "': " + e.what());
  }
}

std::vector<Rational> rational_row(const Json& v, std::size_t expected, const std::string& where) {
  if (!v.is_array() || v.size() != expected) {
    throw InputError("field '" + where + "' must be an array of " + std::to_string(expected) + " entries");
  }
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_of(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json rational_array(std::span<const Rational> v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(format_rational(r));
  return a;
}

template <class F>
auto rethrow_as(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError("field '" + where + "': " + e.what());
  }
}

}  // namespace

JointPmf joint_from_json(const Json& j) {
  const Alphabet xs = alphabet_of(field(j, "x_alphabet"), "x_alphabet");
  const Alphabet ys = alphabet_of(field(j, "y_alphabet"), "y_alphabet");
  const Json& rows = field(j, "joint");
  if (!rows.is_array() || rows.size() != xs.size()) {
    throw InputError("field 'joint' must have one row per x symbol (" + std::to_string(xs.size()) + ")");
  }
  std::vector<Rational> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto row = rational_row(rows[r], ys.size(), "joint[" + std::to_string(r) + "]");
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return rethrow_as("joint", [&] { return JointPmf(xs, ys, std::move(cells)); });
}

Json joint_to_json(const JointPmf& p) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < p.rows(); ++r) rows.push_back(rational_array(p.probs().subspan(r * p.cols(), p.cols())));
  return {{"x_alphabet", p.row_alphabet().labels()}, {"y_alphabet", p.col_alphabet().labels()}, {"joint", rows}};
}

JointPmf load_joint(const std::string& path) { return joint_from_json(load_json_file(path)); }

Pmf pmf_from_json(const Json& j) {
  const Alphabet a = alphabet_of(field(j, "alphabet"), "alphabet");
  auto probs = rational_row(field(j, "probs"), a.size(), "probs");
  return rethrow_as("probs", [&] { return Pmf(a, std::move(probs)); });
}

Json pmf_to_json(const Pmf& p) { return {{"alphabet", p.alphabet().labels()}, {"probs", rational_array(p.probs())}}; }

CondPmf aux_from_json(const Json& j, const JointPmf& joint) {
  const Alphabet u = alphabet_of(field(j, "u_alphabet"), "u_alphabet");
  const Json& cond = field(j, "cond");
  if (!cond.is_array() || cond.size() != joint.rows()) {
    throw InputError("field 'cond' must have one entry per x symbol (" + std::to_string(joint.rows()) + ")");
  }
  std::vector<std::optional<std::vector<Rational>>> rows;
  for (std::size_t x = 0; x < joint.rows(); ++x) {
    const std::string wx = "cond[" + std::to_string(x) + "]";
    if (!cond[x].is_array() || cond[x].size() != joint.cols()) {
      throw InputError("field '" + wx + "' must have one entry per y symbol (" + std::to_string(joint.cols()) + ")");
    }
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const std::string wxy = wx + "[" + std::to_string(y) + "]";
      if (cond[x][y].is_null()) {
        rows.emplace_back(std::nullopt);
      } else {
        rows.emplace_back(rational_row(cond[x][y], u.size(), wxy));
      }
    }
  }
  return rethrow_as("cond", [&] { return CondPmf(Alphabet::indexed(joint.rows() * joint.cols()), u, std::move(rows)); });
}

Json aux_to_json(const CondPmf& aux, const JointPmf& joint) {
  Json cond = Json::array();
  for (std::size_t x = 0; x < joint.rows(); ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const auto& r = aux.row(x * joint.cols() + y);
      row.push_back(r ? rational_array(*r) : Json(nullptr));
    }
    cond.push_back(row);
  }
  return {{"u_alphabet", aux.out_alphabet().labels()}, {"cond", cond}};
}

MarkovDecomposition decomposition_from_json(const Json& j, const JointPmf& joint) {
  MarkovDecomposition d;
  d.label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "user";
  const Alphabet u = alphabet_of(field(j, "u_alphabet"), "u_alphabet");
  auto weights = rational_row(field(j, "weights"), u.size(), "weights");
  d.weights = rethrow_as("weights", [&] { return Pmf(u, std::move(weights)); });
  auto factors = [&](const char* name, const Alphabet& out) {
    const Json& f = field(j, name);
    if (!f.is_array() || f.size() != u.size()) {
      throw InputError(std::string("field '") + name + "' must have one row per U symbol");
    }
    std::vector<std::optional<std::vector<Rational>>> rows;
    for (std::size_t k = 0; k < u.size(); ++k) {
      rows.emplace_back(rational_row(f[k], out.size(), std::string(name) + "[" + std::to_string(k) + "]"));
    }
    return rethrow_as(name, [&] { return CondPmf(u, out, std::move(rows)); });
  };
  d.left = factors("left", joint.row_alphabet());
  d.right = factors("right", joint.col_alphabet());
  verify_decomposition(d, joint);
  return d;
}

Json decomposition_to_json(const MarkovDecomposition& d) {
  auto rows = [&](const CondPmf& c) {
    Json a = Json::array();
    for (std::size_t k = 0; k < d.weights.size(); ++k) {
      a.push_back(c.row(k) ? rational_array(*c.row(k)) : Json(nullptr));
    }
    return a;
  };
  return {{"label", d.label},
          {"u_alphabet", d.weights.alphabet().labels()},
          {"weights", rational_array(d.weights.probs())},
          {"left", rows(d.left)},
          {"right", rows(d.right)},
          {"residual", format_rational(d.residual)}};
}

Json params_to_json(const TypicalityParams& p) {
  return {{"eps1", format_rational(p.eps1)},
          {"eps2", format_rational(p.eps2)},
          {"lambda", format_rational(p.lambda)},
          {"schedule", p.schedule.empty() ? Json(nullptr) : Json(p.schedule)}};
}

TypicalityParams params_from_json(const Json& j) {
  TypicalityParams p = TypicalityParams::fixed(rational_of(field(j, "eps1"), "eps1"),
                                               rational_of(field(j, "eps2"), "eps2"),
                                               rational_of(field(j, "lambda"), "lambda"));
  if (j.contains("schedule") && j["schedule"].is_string()) p.schedule = j["schedule"].get<std::string>();
  return p;
}

Json spec_to_json(const GraphSpec& s) {
  return {{"joint", joint_to_json(s.joint)},
          {"n", s.n},
          {"params", params_to_json(s.params)},
          {"mode", s.mode == GraphMode::Explicit ? "explicit" : "implicit"},
          {"cap", s.cap}};
}

GraphSpec spec_from_json(const Json& j) {
  GraphSpec s;
  s.joint = rethrow_as("spec.joint", [&] { return joint_from_json(field(j, "joint")); });
  const Json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<std::int64_t>() < 1) throw InputError("field 'n' must be a positive integer");
  s.n = n.get<std::int64_t>();
  s.params = rethrow_as("spec.params", [&] { return params_from_json(field(j, "params")); });
  const std::string mode = j.value("mode", std::string("explicit"));
  if (mode != "explicit" && mode != "implicit") throw InputError("field 'mode' must be explicit or implicit");
  s.mode = mode == "explicit" ? GraphMode::Explicit : GraphMode::Implicit;
  s.cap = j.value("cap", kDefaultCap);
  return s;
}

namespace {

Json side_json(const SideStats& s) {
  return {{"vertices", bigcount_json(s.vertices)},
          {"log2_size", real_json(s.log2_size)},
          {"min_log2_degree", real_json(s.min_log2_degree)},
          {"max_log2_degree", real_json(s.max_log2_degree)},
          {"mean_log2_degree", real_json(s.mean_log2_degree)},
          {"isolated", s.isolated.str()}};
}

}  // namespace

Json stats_json(const VertexStats& s) {
  return {{"left", side_json(s.left)}, {"right", side_json(s.right)}, {"edges", bigcount_json(s.edges)}};
}

Json degree_bound_json(const DegreeBoundReport& r) {
  return {{"passed", r.passed()},
          {"left_checked", r.left_checked.str()},
          {"right_checked", r.right_checked.str()},
          {"left_violations", r.left_violations.str()},
          {"right_violations", r.right_violations.str()},
          {"left_worst_slack", real_json(r.left_worst_slack)},
          {"right_worst_slack", real_json(r.right_worst_slack)}};
}

Json graph_header(const TypicalityGraph& g) {
  return {{"schema", "typgraph.graph/1"},
          {"spec", spec_to_json(g.spec())},
          {"left_count", bigcount_json(g.left_count())},
          {"right_count", bigcount_json(g.right_count())},
          {"edge_count", bigcount_json(g.edge_count())},
          {"stats", stats_json(stats(g))}};
}

std::string edge_csv(const BipartiteGraph& g) {
  std::string out = "left_rank,right_rank\n";
  for (std::size_t i = 0; i < g.left_count(); ++i)
    for (auto j : g.neighbours(i)) {
      out += std::to_string(i);
      out += ',';
      out += std::to_string(j);
      out += '\n';
    }
  return out;
}

namespace {

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::pair<std::string, std::string> split_pair(const std::string& line, std::size_t lineno) {
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
    throw InputError("edge CSV line " + std::to_string(lineno) + ": expected two comma-separated fields");
  }
  return {line.substr(0, comma), line.substr(comma + 1)};
}

std::uint64_t parse_rank(const std::string& s, std::size_t lineno) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("edge CSV line " + std::to_string(lineno) + ": '" + s + "' is not a vertex rank");
  }
  return std::stoull(s);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> parse_rank_edges(const std::vector<std::string>& lines) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [a, b] = split_pair(lines[k], k + 1);
    edges.emplace_back(parse_rank(a, k + 1), parse_rank(b, k + 1));
  }
  return edges;
}

}  // namespace

TypicalityGraph import_graph(const Json& header, const std::string& csv) {
  if (header.value("schema", std::string()) != "typgraph.graph/1") {
    throw InputError("graph header has an unknown schema");
  }
  GraphSpec spec = spec_from_json(field(header, "spec"));
  spec.mode = GraphMode::Explicit;
  const auto lines = csv_lines(csv);
  if (lines.empty() || lines.front() != "left_rank,right_rank") {
    throw InputError("edge CSV must start with the header 'left_rank,right_rank'");
  }
  const auto n = static_cast<std::size_t>(spec.n);
  const SequenceCodec left_codec(spec.joint.rows(), n);
  const SequenceCodec right_codec(spec.joint.cols(), n);
  auto left = typical_roster(spec.joint.row_marginal(), spec.params.eps1, spec.n, left_codec);
  auto right = typical_roster(spec.joint.col_marginal(), spec.params.eps2, spec.n, right_codec);
  std::vector<std::vector<std::uint32_t>> adjacency(left.size());
  for (const auto& [i, j] : parse_rank_edges(lines)) {
    if (i >= left.size() || j >= right.size()) {
      throw InputError("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") outside the rosters");
    }
    adjacency[i].push_back(static_cast<std::uint32_t>(j));
  }
  return TypicalityGraph(spec, BipartiteGraph(left_codec, right_codec, std::move(left), std::move(right),
                                              std::move(adjacency)));
}

std::string sequence_digits(const Sequence& s) {
  std::string out;
  for (auto v : s.symbols) {
    if (s.alphabet_size > 10) {
      if (!out.empty()) out += ' ';
      out += std::to_string(v);
    } else {
      out += static_cast<char>('0' + v);
    }
  }
  return out;
}

EdgeDistribution parse_edge_csv(const std::string& text, const std::optional<Json>& graph_header) {
  const auto lines = csv_lines(text);
  if (lines.empty()) throw InputError("edge CSV is empty");
  if (lines.front() == "left_rank,right_rank") {
    if (!graph_header) throw InputError("rank-based edge CSV needs the graph header (--graph)");
    const TypicalityGraph g = import_graph(*graph_header, text);
    if (g.explicit_graph().edge_count() == 0) throw InputError("edge CSV has no edges");
    return fano_distribution(g.explicit_graph());
  }
  if (lines.front() != "x,y") {
    throw InputError("edge CSV header must be 'x,y' or 'left_rank,right_rank'");
  }
  std::vector<std::pair<std::vector<Symbol>, std::vector<Symbol>>> raw;
  Symbol max_x = 0, max_y = 0;
  auto digits = [](const std::string& s, std::size_t lineno, Symbol& mx) {
    if (s.empty()) throw InputError("edge CSV line " + std::to_string(lineno) + ": empty sequence");
    std::vector<Symbol> out;
    for (char ch : s) {
      if (ch < '0' || ch > '9') {
        throw InputError("edge CSV line " + std::to_string(lineno) + ": sequences must be digit strings");
      }
      out.push_back(static_cast<Symbol>(ch - '0'));
      mx = std::max(mx, out.back());
    }
    return out;
  };
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [a, b] = split_pair(lines[k], k + 1);
    raw.emplace_back(digits(a, k + 1, max_x), digits(b, k + 1, max_y));
  }
  if (raw.empty()) throw InputError("edge CSV has no edges");
  const std::size_t length = raw.front().first.size();
  std::vector<LabeledEdge> edges;
  for (auto& [x, y] : raw) {
    if (x.size() != length || y.size() != length) {
      throw InputError("edge CSV: all sequences must have the same length");
    }
    edges.push_back({Sequence(max_x + 1, std::move(x)), Sequence(max_y + 1, std::move(y))});
  }
  return fano_distribution(std::move(edges), max_x + 1, max_y + 1);
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace typgraph
