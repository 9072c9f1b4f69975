#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/deviation.hpp"
#include "typgraph/diagnostics.hpp"
#include "typgraph/graph.hpp"
#include "typgraph/io.hpp"
#include "typgraph/subgraphs.hpp"
#include "typgraph/typicality.hpp"

namespace py = pybind11;
using namespace typgraph;

namespace {

// Reports cross the boundary as JSON text; the Python side parses them.
JointPmf joint_of(const std::string& text) {
  try {
    return joint_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed distribution JSON: ") + e.what());
  }
}

TypicalityParams params_of(const std::string& schedule, std::int64_t n, const std::optional<std::string>& eps1,
                           const std::optional<std::string>& eps2, const std::optional<std::string>& lambda) {
  TypicalityParams p = TypicalityParams::from_schedule(schedule, n);
  if (eps1) p.eps1 = parse_rational(*eps1);
  if (eps2) p.eps2 = parse_rational(*eps2);
  if (lambda) p.lambda = parse_rational(*lambda);
  if (eps1 || eps2 || lambda) p.schedule.clear();
  return p;
}

std::vector<Rational> rationals(const std::vector<std::string>& v) {
  std::vector<Rational> out;
  for (const auto& s : v) out.push_back(parse_rational(s));
  return out;
}

py::object big(const BigInt& v) { return py::module_::import("builtins").attr("int")(py::str(v.str())); }

std::string entropies(const std::string& joint_text) {
  const JointPmf p = joint_of(joint_text);
  return Json{{"H(X)", entropy(p.row_marginal())},
              {"H(Y)", entropy(p.col_marginal())},
              {"H(XY)", joint_entropy(p)},
              {"H(Y|X)", conditional_entropy(p, Given::X)},
              {"H(X|Y)", conditional_entropy(p, Given::Y)},
              {"I(X;Y)", mutual_information(p)}}
      .dump();
}

std::string graph_report(const std::string& joint_text, std::int64_t n, const std::string& schedule,
                         const std::optional<std::string>& eps1, const std::optional<std::string>& eps2,
                         const std::optional<std::string>& lambda, bool implicit, std::uint64_t cap) {
  const JointPmf joint = joint_of(joint_text);
  GraphSpec spec{joint, n, params_of(schedule, n, eps1, eps2, lambda),
                 implicit ? GraphMode::Implicit : GraphMode::Explicit, cap};
  const TypicalityGraph g = build_graph(spec);
  Json out = {{"stats", stats_json(stats(g))}, {"degree_bound", degree_bound_json(check_degree_bound(g, joint))}};
  if (g.materialized()) {
    const auto& bg = g.explicit_graph();
    Json left = Json::array(), right = Json::array(), edges = Json::array();
    for (std::size_t i = 0; i < bg.left_count(); ++i) left.push_back(sequence_digits(bg.left_vertex(i)));
    for (std::size_t j = 0; j < bg.right_count(); ++j) right.push_back(sequence_digits(bg.right_vertex(j)));
    for (const auto& e : bg.edges()) edges.push_back({e.left, e.right});
    out["left"] = left;
    out["right"] = right;
    out["edges"] = edges;
  }
  return out.dump();
}

std::string moments(const std::string& joint_text, std::int64_t n, std::uint64_t m1, std::uint64_t m2,
                    const std::string& schedule, const std::optional<std::string>& eps1,
                    const std::optional<std::string>& eps2, const std::optional<std::string>& lambda) {
  const MomentEstimates m =
      exact_pair_moments(joint_of(joint_text), params_of(schedule, n, eps1, eps2, lambda), n, m1, m2);
  const LllBounds l = lll_lower_bounds(m);
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"alpha", format_rational(m.alpha)},
              {"gamma", m.gamma},
              {"theta_cap", m.theta_cap},
              {"theta_small", m.theta_small},
              {"tau", m.tau},
              {"suen_zero", suen_zero_bound(m.gamma, m.theta_cap, m.theta_small)},
              {"lll_symmetric", opt(l.symmetric)},
              {"lll_phi", opt(l.phi)},
              {"lll_best", l.best()}}
      .dump();
}

std::string simulate_report(const std::string& joint_text, std::int64_t n, std::uint64_t m1, std::uint64_t m2,
                            std::uint64_t trials, std::uint64_t seed, const std::string& schedule,
                            const std::optional<std::string>& eps1, const std::optional<std::string>& eps2,
                            const std::optional<std::string>& lambda, std::size_t workers) {
  SimulationConfig c;
  c.joint = joint_of(joint_text);
  c.n = n;
  c.params = params_of(schedule, n, eps1, eps2, lambda);
  c.m1 = m1;
  c.m2 = m2;
  c.trials = trials;
  c.seed = seed;
  c.workers = workers;
  const MonteCarloReport r = simulate(c);
  return Json{{"trials", r.trials},
              {"zero_count", r.zero_count},
              {"p_zero", r.p_zero},
              {"p_zero_interval", {r.p_zero_interval.lo, r.p_zero_interval.hi}},
              {"mean_u", r.mean_u},
              {"std_error", r.std_error},
              {"gamma", r.gamma}}
      .dump();
}

std::string prop1_report(const std::string& joint_text, std::int64_t n, const std::string& schedule) {
  const ExactTypeSubgraph a = build_exact_type_subgraph(joint_of(joint_text), n,
                                                        TypicalityParams::from_schedule(schedule, n));
  const SubgraphReport r = verify_prop1(a);
  return Json{{"passed", r.passed()},
              {"delta3", r.delta3},
              {"left", a.graph.left_count()},
              {"right", a.graph.right_count()},
              {"edges", a.graph.edge_count()},
              {"contained", a.containment.contained()}}
      .dump();
}

std::string wring_report(const std::vector<std::string>& xs, const std::vector<std::string>& ys, double delta) {
  if (xs.size() != ys.size()) throw InputError("x and y edge lists differ in length");
  std::string csv = "x,y\n";
  for (std::size_t i = 0; i < xs.size(); ++i) csv += xs[i] + "," + ys[i] + "\n";
  const EdgeDistribution d = parse_edge_csv(csv, std::nullopt);
  const WringResult w = wring(d, delta);
  const PinskerReport pk = pinsker_check(surviving_distribution(d, w), delta);
  return Json{{"k", w.k()},
              {"converged", w.converged},
              {"surviving_fraction", format_rational(w.surviving_fraction)},
              {"per_letter_mi", w.per_letter_mi},
              {"tv", pk.tv},
              {"threshold", pk.threshold}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_typgraph, m) {
  m.doc() = "Typicality graphs of finite joint distributions";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_MemoryError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  m.def("entropies", &entropies, py::arg("joint_json"));
  m.def(
      "typical_set_size",
      [](const std::vector<std::string>& probs, const std::string& delta, std::int64_t n) {
        const Pmf p(Alphabet::indexed(probs.size()), rationals(probs));
        return big(typical_set_size(p, parse_rational(delta), n).value);
      },
      py::arg("probs"), py::arg("delta"), py::arg("n"));
  m.def(
      "is_typical",
      [](const std::vector<Symbol>& x, const std::vector<std::string>& probs, const std::string& delta) {
        const Pmf p(Alphabet::indexed(probs.size()), rationals(probs));
        return is_typical(Sequence(probs.size(), x), p, parse_rational(delta));
      },
      py::arg("x"), py::arg("probs"), py::arg("delta"));
  m.def(
      "multinomial", [](const std::vector<std::int64_t>& counts) { return big(multinomial(counts)); },
      py::arg("counts"));
  m.def(
      "delta_schedule",
      [](const std::string& name, std::int64_t n) { return format_rational(delta_schedule(name, n)); },
      py::arg("name"), py::arg("n"));
  m.def("graph_report", &graph_report, py::arg("joint_json"), py::arg("n"), py::arg("schedule") = "cube-root",
        py::arg("eps1") = py::none(), py::arg("eps2") = py::none(), py::arg("lam") = py::none(),
        py::arg("implicit") = false, py::arg("cap") = kDefaultCap);
  m.def("moments", &moments, py::arg("joint_json"), py::arg("n"), py::arg("m1"), py::arg("m2"),
        py::arg("schedule") = "cube-root", py::arg("eps1") = py::none(), py::arg("eps2") = py::none(),
        py::arg("lam") = py::none());
  m.def("simulate", &simulate_report, py::arg("joint_json"), py::arg("n"), py::arg("m1"), py::arg("m2"),
        py::arg("trials"), py::arg("seed"), py::arg("schedule") = "cube-root", py::arg("eps1") = py::none(),
        py::arg("eps2") = py::none(), py::arg("lam") = py::none(), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("prop1_report", &prop1_report, py::arg("joint_json"), py::arg("n"), py::arg("schedule") = "cube-root");
  m.def("wring", &wring_report, py::arg("x"), py::arg("y"), py::arg("delta"));
  m.def("suen_zero_bound", &suen_zero_bound, py::arg("gamma"), py::arg("theta_cap"), py::arg("theta_small"));
  m.def("suen_tail_bound", &suen_tail_bound, py::arg("gamma"), py::arg("theta_cap"), py::arg("theta_small"),
        py::arg("a"));
  m.def("phi_root", &phi_root, py::arg("x"));
  m.def(
      "wilson_interval",
      [](std::uint64_t k, std::uint64_t t) {
        const auto w = wilson_interval(k, t);
        return std::make_pair(w.lo, w.hi);
      },
      py::arg("successes"), py::arg("trials"));
  m.def("codebook_size", &codebook_size, py::arg("rate"), py::arg("n"));
}
