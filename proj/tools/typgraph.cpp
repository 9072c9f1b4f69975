// typgraph: command-line front end.
//
//   typgraph info     --dist P.json
//   typgraph graph    --dist P.json --n 4 [--mode explicit|implicit] [--edges E.csv]
//   typgraph subgraph an|gamma --dist P.json --n 10 [--aux A.json|copy-x|constant]
//   typgraph simulate --dist P.json --n 12 --m1 4 --m2 4 --trials 100000 --seed 1
//   typgraph wring    --edges E.csv [--graph G.json] [--delta 0.05]
//
// With --out the JSON record goes to the file and a summary to stdout;
// without it the record goes to stdout and the summary to stderr.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/deviation.hpp"
#include "typgraph/diagnostics.hpp"
#include "typgraph/graph.hpp"
#include "typgraph/io.hpp"
#include "typgraph/subgraphs.hpp"
#include "typgraph/typicality.hpp"

using namespace typgraph;

namespace {

struct Options {
  std::string dist;
  std::int64_t n = 0;
  std::optional<std::string> eps1, eps2, lambda;
  std::string schedule = "cube-root";
  std::optional<double> r1, r2;
  std::optional<std::uint64_t> m1, m2;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::uint64_t cap = kDefaultCap;
  std::string mode = "explicit";
  std::string kind;
  std::string aux;
  std::string csv;
  std::string edges;
  std::string graph;
  std::optional<double> delta;
  std::size_t workers = 0;
};

std::string fixed6(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  return s == "-0.000000" ? "0.000000" : s;
}

class Emitter {
 public:
  explicit Emitter(const Options& o) : opt_(o) {}
  std::ostream& summary() { return opt_.out.empty() ? static_cast<std::ostream&>(std::cerr) : std::cout; }

  void record(const std::string& command, const Json& config, const Json& payload) {
    Json rec;
    rec["schema"] = "typgraph." + command + "/1";
    rec["command"] = command;
    rec["config"] = config;
    rec["config_hash"] = config_hash(config);
    rec["payload"] = payload;
    data(rec.dump(2) + "\n");
  }
  void data(const std::string& text) {
    if (opt_.out.empty()) {
      std::cout << text;
    } else {
      write_text_file(opt_.out, text);
    }
  }

 private:
  const Options& opt_;
};

JointPmf load_dist(const Options& o) {
  if (o.dist.empty()) throw InputError("--dist is required");
  return load_joint(o.dist);
}

void require_n(const Options& o) {
  if (o.n < 1) throw InputError("--n must be a positive integer");
}

TypicalityParams resolve_params(const Options& o) {
  TypicalityParams p = TypicalityParams::from_schedule(o.schedule, o.n);
  auto over = [](const std::optional<std::string>& v, Rational& slot, const char* name) {
    if (!v) return false;
    try {
      slot = parse_rational(*v);
    } catch (const InputError& e) {
      throw InputError(std::string("--") + name + ": " + e.what());
    }
    if (slot < 0) throw InputError(std::string("--") + name + " must be nonnegative");
    return true;
  };
  const bool a = over(o.eps1, p.eps1, "eps1");
  const bool b = over(o.eps2, p.eps2, "eps2");
  const bool c = over(o.lambda, p.lambda, "lambda");
  if (a || b || c) p.schedule.clear();
  return p;
}

Json base_config(const std::string& command, const Options& o, const JointPmf& joint, const TypicalityParams& p) {
  return {{"command", command}, {"joint", joint_to_json(joint)}, {"n", o.n}, {"params", params_to_json(p)}};
}

int cmd_info(const Options& o) {
  const JointPmf joint = load_dist(o);
  const double hx = entropy(joint.row_marginal());
  const double hy = entropy(joint.col_marginal());
  const double hxy = joint_entropy(joint);
  const double hy_x = conditional_entropy(joint, Given::X);
  const double hx_y = conditional_entropy(joint, Given::Y);
  const double i = mutual_information(joint);
  const std::vector<std::pair<std::string, double>> rows = {
      {"H(X)", hx}, {"H(Y)", hy}, {"H(XY)", hxy}, {"H(Y|X)", hy_x}, {"H(X|Y)", hx_y}, {"I(X;Y)", i}};
  Emitter e(o);
  if (o.format == "csv") {
    std::string text = "quantity,bits\n";
    for (const auto& [k, v] : rows) text += k + "," + fixed6(v) + "\n";
    e.data(text);
  } else {
    Json payload = Json::object();
    for (const auto& [k, v] : rows) payload[k] = real_json(v);
    e.record("info", {{"command", "info"}, {"joint", joint_to_json(joint)}}, payload);
  }
  for (const auto& [k, v] : rows) e.summary() << k << " = " << fixed6(v) << "\n";
  return 0;
}

void write_edges(const Options& o, const BipartiteGraph& g) {
  if (!o.edges.empty()) write_text_file(o.edges, edge_csv(g));
}

int cmd_graph(const Options& o) {
  const JointPmf joint = load_dist(o);
  require_n(o);
  GraphSpec spec{joint, o.n, resolve_params(o), GraphMode::Explicit, o.cap};
  if (o.mode == "implicit") spec.mode = GraphMode::Implicit;
  const TypicalityGraph g = build_graph(spec, o.workers);
  const VertexStats st = stats(g);
  const DegreeBoundReport db = check_degree_bound(g, joint);
  Emitter e(o);
  if (o.format == "csv") {
    if (!g.materialized()) throw InputError("--format csv needs --mode explicit");
    e.data(edge_csv(g.explicit_graph()));
  } else {
    Json config = base_config("graph", o, joint, spec.params);
    config["mode"] = o.mode;
    config["cap"] = o.cap;
    Json payload = {{"stats", stats_json(st)}, {"degree_bound", degree_bound_json(db)}};
    if (g.materialized()) payload["header"] = graph_header(g);
    e.record("graph", config, payload);
  }
  if (g.materialized()) write_edges(o, g.explicit_graph());
  e.summary() << "left=" << st.left.vertices.str() << " right=" << st.right.vertices.str()
              << " edges=" << st.edges.str() << "\n";
  e.summary() << "left degree log2 [" << fixed6(st.left.min_log2_degree) << ", " << fixed6(st.left.max_log2_degree)
              << "] right degree log2 [" << fixed6(st.right.min_log2_degree) << ", "
              << fixed6(st.right.max_log2_degree) << "]\n";
  e.summary() << "degree bound: " << (db.passed() ? "PASS" : "FAIL") << " (violations "
              << db.left_violations.str() << "/" << db.right_violations.str() << ")\n";
  return 0;
}

Json side_check_json(const SideCheck& s) {
  return {{"log2_size_rate", real_json(s.log2_size_rate)},
          {"entropy", real_json(s.entropy)},
          {"size_tolerance", real_json(s.size_tolerance)},
          {"size_ok", s.size_ok},
          {"degree_entropy", real_json(s.degree_entropy)},
          {"min_degree_rate", real_json(s.min_degree_rate)},
          {"max_degree_rate", real_json(s.max_degree_rate)},
          {"degree_violations", s.degree_violations}};
}

Json report_json(const SubgraphReport& r) {
  return {{"delta3", real_json(r.delta3)},
          {"passed", r.passed()},
          {"left", side_check_json(r.left)},
          {"right", side_check_json(r.right)}};
}

Json containment_json(const ContainmentReport& c) {
  return {{"approximation_ok", c.approximation_ok},
          {"failed_inequalities", c.failed_inequalities},
          {"left_contained", c.left_contained},
          {"right_contained", c.right_contained},
          {"edges_contained", c.edges_contained}};
}

Json rates_json(const RateTuple& r) {
  return {{"r_x", real_json(r.r_x)},
          {"r_y", real_json(r.r_y)},
          {"r_x_prime", real_json(r.r_x_prime)},
          {"r_y_prime", real_json(r.r_y_prime)}};
}

Json measurement_json(const RateMeasurement& m) {
  return {{"rates", rates_json(m.rates)},
          {"left_degree_rate", {real_json(m.left_min_degree_rate), real_json(m.left_max_degree_rate)}},
          {"right_degree_rate", {real_json(m.right_min_degree_rate), real_json(m.right_max_degree_rate)}},
          {"general_slack", real_json(m.general_slack)},
          {"nearly_complete_slack", real_json(m.nearly_complete_slack)}};
}

Json graph_size_json(const BipartiteGraph& g) {
  return {{"left", g.left_count()}, {"right", g.right_count()}, {"edges", g.edge_count()}};
}

CondPmf resolve_aux(const Options& o, const JointPmf& joint, Json& aux_config) {
  if (o.aux.empty()) throw InputError("subgraph gamma needs --aux (a file, copy-x or constant)");
  if (o.aux == "copy-x") {
    aux_config = "copy-x";
    return copy_x_aux(joint);
  }
  if (o.aux == "constant") {
    aux_config = "constant";
    return constant_aux(joint);
  }
  const Json j = load_json_file(o.aux);
  if (j.contains("weights")) {
    MarkovDecomposition d = decomposition_from_json(j, joint);
    aux_config = decomposition_to_json(d);
    if (d.residual != 0) throw InputError("decomposition in '" + o.aux + "' is not exact for the distribution");
    return aux_from_decomposition(d, joint);
  }
  CondPmf aux = aux_from_json(j, joint);
  aux_config = aux_to_json(aux, joint);
  return aux;
}

int cmd_subgraph(const Options& o) {
  if (o.kind != "an" && o.kind != "gamma") throw InputError("subgraph kind must be an or gamma");
  const JointPmf joint = load_dist(o);
  require_n(o);
  const TypicalityParams p = resolve_params(o);
  Json config = base_config("subgraph", o, joint, p);
  config["kind"] = o.kind;
  config["cap"] = o.cap;
  Emitter e(o);
  Json payload;
  const BipartiteGraph* graph = nullptr;
  std::optional<ExactTypeSubgraph> a;
  std::optional<AuxSubgraph> gamma;
  SubgraphReport rep;
  if (o.kind == "an") {
    a = build_exact_type_subgraph(joint, o.n, p, o.cap);
    rep = verify_prop1(*a);
    graph = &a->graph;
    payload["tilde"] = joint_to_json(a->tilde.approx);
    payload["containment"] = containment_json(a->containment);
  } else {
    Json aux_config;
    const CondPmf aux = resolve_aux(o, joint, aux_config);
    config["aux"] = aux_config;
    gamma = build_aux_subgraph(joint, aux, o.n, p, o.cap);
    rep = verify_prop2(*gamma);
    graph = &gamma->graph;
    payload["u_sequence"] = sequence_digits(gamma->u_seq);
    payload["containment"] = containment_json(gamma->containment);
    payload["targets"] = rates_json(gamma->targets);
    payload["conditional_mi"] = real_json(tilde_conditional_mi(*gamma));
  }
  const RateMeasurement m = measure_rates(*graph, o.n);
  payload["graph"] = graph_size_json(*graph);
  payload["verification"] = report_json(rep);
  payload["rates"] = measurement_json(m);
  if (o.format == "csv") {
    e.data(edge_csv(*graph));
  } else {
    e.record("subgraph", config, payload);
  }
  write_edges(o, *graph);
  const auto& c = payload["containment"];
  e.summary() << o.kind << ": left=" << graph->left_count() << " right=" << graph->right_count()
              << " edges=" << graph->edge_count() << "\n";
  e.summary() << (o.kind == "an" ? "verify_prop1: " : "verify_prop2: ") << (rep.passed() ? "PASS" : "FAIL")
              << " (size " << (rep.left.size_ok ? "ok" : "bad") << "/" << (rep.right.size_ok ? "ok" : "bad")
              << ", degree violations " << rep.left.degree_violations << "/" << rep.right.degree_violations
              << ", delta3 " << fixed6(rep.delta3) << ")\n";
  e.summary() << "contained in G_n: " << (c["left_contained"].get<bool>() && c["right_contained"].get<bool>() &&
                                                  c["edges_contained"].get<bool>()
                                              ? "yes"
                                              : "no")
              << "\n";
  return 0;
}

std::uint64_t resolve_m(const std::optional<std::uint64_t>& m, const std::optional<double>& r, std::int64_t n,
                        const char* name) {
  if (m) {
    if (*m == 0) throw InputError(std::string("--m") + name + " must be at least 1");
    return *m;
  }
  if (r) {
    if (*r < 0 || !std::isfinite(*r)) throw InputError(std::string("--r") + name + " must be a nonnegative rate");
    return codebook_size(*r, n);
  }
  throw InputError(std::string("simulate needs --r") + name + " or --m" + name);
}

Json optional_real(const std::optional<double>& v) { return v ? real_json(*v) : Json(nullptr); }

Json exponent_json(const ExponentEntry& e) {
  return {{"bound", real_json(e.bound)}, {"exponent", optional_real(e.exponent)}};
}

int cmd_simulate(const Options& o) {
  const JointPmf joint = load_dist(o);
  require_n(o);
  if (o.trials == 0) throw InputError("--trials must be positive");
  SimulationConfig sc;
  sc.joint = joint;
  sc.n = o.n;
  sc.params = resolve_params(o);
  sc.m1 = resolve_m(o.m1, o.r1, o.n, "1");
  sc.m2 = resolve_m(o.m2, o.r2, o.n, "2");
  sc.trials = o.trials;
  sc.seed = o.seed;
  for (int k = 0; k < 10; ++k) sc.a_grid.push_back(k / 10.0);
  sc.workers = o.workers;

  const PairProfile profile(joint, sc.params, o.n);
  const MomentEstimates m = exact_pair_moments(profile, sc.m1, sc.m2);
  const double r1 = std::log2(static_cast<double>(sc.m1)) / static_cast<double>(o.n);
  const double r2 = std::log2(static_cast<double>(sc.m2)) / static_cast<double>(o.n);
  const BoundReport b = exponent_report(m, o.n, r1, r2, mutual_information(joint), sc.a_grid);
  const MonteCarloReport mc = simulate(sc);
  const BracketVerdict v = bracket(mc, b);

  std::string csv = "a,empirical,suen\n";
  for (std::size_t k = 0; k < sc.a_grid.size(); ++k) {
    csv += fixed6(sc.a_grid[k]) + "," + fixed6(mc.tail_frequency[k]) + "," + fixed6(b.suen_tail[k]) + "\n";
  }
  if (!o.csv.empty()) write_text_file(o.csv, csv);

  Emitter e(o);
  if (o.format == "csv") {
    e.data(csv);
  } else {
    Json config = base_config("simulate", o, joint, sc.params);
    config["m1"] = sc.m1;
    config["m2"] = sc.m2;
    config["trials"] = sc.trials;
    config["seed"] = sc.seed;
    Json lll = {{"symmetric", optional_real(b.lll.symmetric)},
                {"symmetric_simplified", optional_real(b.lll.symmetric_simplified)},
                {"phi", optional_real(b.lll.phi)},
                {"best", real_json(b.lll.best())}};
    Json moments = {{"alpha", format_rational(m.alpha)},
                    {"alpha_real", real_json(to_double(m.alpha))},
                    {"left_term", real_json(to_double(m.left_term))},
                    {"right_term", real_json(to_double(m.right_term))},
                    {"gamma", real_json(m.gamma)},
                    {"theta_cap", real_json(m.theta_cap)},
                    {"theta_small", real_json(m.theta_small)},
                    {"tau", real_json(m.tau)}};
    Json suen_tail = Json::array();
    for (double s : b.suen_tail) suen_tail.push_back(real_json(s));
    Json tails = Json::array();
    for (double s : mc.tail_frequency) tails.push_back(real_json(s));
    Json bounds = {{"suen_zero", real_json(b.suen_zero)},
                   {"suen_tail", suen_tail},
                   {"lll", lll},
                   {"suen_zero_exponent", exponent_json(b.suen_zero_exponent)},
                   {"rates", {real_json(b.r1), real_json(b.r2)}},
                   {"mutual_information", real_json(b.i_xy)},
                   {"target", real_json(b.target)},
                   {"tight", b.tight},
                   {"consistent", b.consistent}};
    Json monte = {{"trials", mc.trials},
                  {"zero_count", mc.zero_count},
                  {"p_zero", real_json(mc.p_zero)},
                  {"p_zero_interval", {real_json(mc.p_zero_interval.lo), real_json(mc.p_zero_interval.hi)}},
                  {"mean_u", real_json(mc.mean_u)},
                  {"variance_u", real_json(mc.variance_u)},
                  {"std_error", real_json(mc.std_error)},
                  {"a_grid", sc.a_grid},
                  {"tail_frequency", tails}};
    Json verdict = {{"lower", real_json(v.lower)}, {"upper", real_json(v.upper)}, {"inside", v.inside}};
    e.record("simulate", config,
             {{"moments", moments}, {"bounds", bounds}, {"monte_carlo", monte}, {"verdict", verdict}});
  }
  e.summary() << "M1=" << sc.m1 << " M2=" << sc.m2 << " gamma=" << fixed6(m.gamma)
              << " mean(U)=" << fixed6(mc.mean_u) << "\n";
  e.summary() << "P(U=0) empirical " << fixed6(mc.p_zero) << " [" << fixed6(mc.p_zero_interval.lo) << ", "
              << fixed6(mc.p_zero_interval.hi) << "] bounds [" << fixed6(v.lower) << ", " << fixed6(v.upper)
              << "]\n";
  e.summary() << "bracket: " << (v.inside ? "inside" : "outside") << "\n";
  return 0;
}

int cmd_wring(const Options& o) {
  if (o.edges.empty()) throw InputError("wring needs --edges");
  const std::string text = read_text_file(o.edges);
  std::optional<Json> header;
  if (!o.graph.empty()) {
    Json g = load_json_file(o.graph);
    if (g.contains("payload") && g["payload"].contains("header")) g = g["payload"]["header"];
    header = g;
  }
  const EdgeDistribution dist = parse_edge_csv(text, header);
  double delta = 0.0;
  if (o.delta) {
    delta = *o.delta;
  } else {
    delta = default_wring_delta(dist.n(), o.schedule);
  }
  if (!(delta > 0) || !std::isfinite(delta)) throw InputError("--delta must be positive");
  const WringResult w = wring(dist, delta);
  const PinskerReport pk = pinsker_check(surviving_distribution(dist, w), delta);
  const DominantTypeResult dom = dominant_joint_type(dist);

  Json steps = Json::array();
  for (std::size_t k = 0; k < w.steps.size(); ++k) {
    const auto& s = w.steps[k];
    steps.push_back({{"step", k + 1},
                     {"position", s.position},
                     {"value", {s.x_value, s.y_value}},
                     {"max_mi_before", real_json(s.max_mi_before)},
                     {"surviving_fraction", format_rational(s.surviving_fraction)},
                     {"surviving_fraction_real", real_json(to_double(s.surviving_fraction))}});
  }
  auto reals = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(real_json(x));
    return a;
  };
  Json payload = {{"edges", dist.size()},
                  {"n", dist.n()},
                  {"delta", real_json(w.delta)},
                  {"sigma", real_json(w.sigma)},
                  {"k", w.k()},
                  {"steps", steps},
                  {"converged", w.converged},
                  {"surviving", w.surviving.size()},
                  {"surviving_fraction", format_rational(w.surviving_fraction)},
                  {"per_letter_mi", reals(w.per_letter_mi)},
                  {"exceeded_lemma_k", w.exceeded_lemma_k},
                  {"lemma_fraction_bound", optional_real(w.lemma_fraction_bound)},
                  {"lemma_bound_ok", w.lemma_bound_ok ? Json(*w.lemma_bound_ok) : Json(nullptr)},
                  {"pinsker",
                   {{"tv", reals(pk.tv)},
                    {"threshold", real_json(pk.threshold)},
                    {"all_within_threshold", pk.all_within_threshold},
                    {"all_within_mi_form", pk.all_within_mi_form}}},
                  {"dominant_type",
                   {{"counts", dom.joint_type.counts},
                    {"edge_fraction", format_rational(dom.edge_fraction)},
                    {"types_present", dom.types_present},
                    {"pigeonhole_ok", dom.pigeonhole_ok}}}};
  Json config = {{"command", "wring"}, {"edges", config_hash(Json(text))}, {"delta", real_json(delta)}};
  if (header) config["graph"] = config_hash(*header);
  Emitter e(o);
  e.record("wring", config, payload);
  e.summary() << "k=" << w.k() << " converged=" << (w.converged ? "yes" : "no")
              << " surviving=" << w.surviving.size() << "/" << dist.size() << "\n";
  e.summary() << "pinsker: " << (pk.all_within_threshold ? "within" : "above") << " 2*sqrt(delta)="
              << fixed6(pk.threshold) << "\n";
  return 0;
}

void add_dist_options(CLI::App* c, Options& o) {
  c->add_option("--dist", o.dist, "Joint distribution JSON");
  c->add_option("--out", o.out, "Write the JSON record (or CSV) here");
  c->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_graph_options(CLI::App* c, Options& o) {
  add_dist_options(c, o);
  c->add_option("--n", o.n, "Block length");
  c->add_option("--eps1", o.eps1, "X typicality radius, num/den");
  c->add_option("--eps2", o.eps2, "Y typicality radius, num/den");
  c->add_option("--lambda", o.lambda, "Joint typicality radius, num/den");
  c->add_option("--schedule", o.schedule, "Parameter schedule")->check(CLI::IsMember(schedule_names()));
  c->add_option("--cap", o.cap, "Largest |alphabet|^n enumerated explicitly");
  c->add_option("--workers", o.workers, "Worker threads, 0 for all cores");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typicality graphs of finite joint distributions"};
  app.require_subcommand(1);
  Options o;

  auto* info = app.add_subcommand("info", "Entropic summary of a distribution");
  add_dist_options(info, o);

  auto* graph = app.add_subcommand("graph", "Build the typicality graph and check degree bounds");
  add_graph_options(graph, o);
  graph->add_option("--mode", o.mode, "explicit or implicit")->check(CLI::IsMember({"explicit", "implicit"}));
  graph->add_option("--edges", o.edges, "Also write the edge CSV here");

  auto* sub = app.add_subcommand("subgraph", "Build an exact-type or auxiliary subgraph and verify it");
  add_graph_options(sub, o);
  sub->add_option("kind", o.kind, "an or gamma")->required();
  sub->add_option("--aux", o.aux, "P(U|X,Y) or decomposition JSON, or copy-x / constant");
  sub->add_option("--edges", o.edges, "Also write the edge CSV here");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo count of jointly typical codeword pairs");
  add_graph_options(sim, o);
  sim->add_option("--r1", o.r1, "X codebook rate");
  sim->add_option("--r2", o.r2, "Y codebook rate");
  sim->add_option("--m1", o.m1, "X codebook size (overrides --r1)");
  sim->add_option("--m2", o.m2, "Y codebook size (overrides --r2)");
  sim->add_option("--trials", o.trials, "Number of trials");
  sim->add_option("--seed", o.seed, "Master seed");
  sim->add_option("--csv", o.csv, "Write (a, empirical, suen) rows here");

  auto* wr = app.add_subcommand("wring", "Wring an edge set and report per-letter dependence");
  wr->add_option("--edges", o.edges, "Edge CSV (x,y or left_rank,right_rank)");
  wr->add_option("--graph", o.graph, "Graph record or header for rank CSVs");
  wr->add_option("--delta", o.delta, "Per-letter MI threshold");
  wr->add_option("--schedule", o.schedule, "Schedule for the default delta")->check(CLI::IsMember(schedule_names()));
  wr->add_option("--out", o.out, "Write the JSON record here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*info) return cmd_info(o);
    if (*graph) return cmd_graph(o);
    if (*sub) return cmd_subgraph(o);
    if (*sim) return cmd_simulate(o);
    if (*wr) return cmd_wring(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
