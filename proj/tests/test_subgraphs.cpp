#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "typgraph/subgraphs.hpp"

using namespace typgraph;
using oracle::binary_example;

namespace {

TypicalityParams sched(std::int64_t n) { return TypicalityParams::from_schedule("cube-root", n); }

// Every (x, y) with joint type exactly `counts`; rosters are the marginal type classes.
void expect_exact_type_graph(const BipartiteGraph& g, const JointPmf& joint, std::size_t n,
                             const std::vector<std::int64_t>& counts) {
  const std::size_t rows = joint.rows(), cols = joint.cols();
  std::vector<std::int64_t> cx(rows, 0), cy(cols, 0);
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b) {
      cx[a] += counts[a * cols + b];
      cy[b] += counts[a * cols + b];
    }
  std::vector<Sequence> left, right;
  for (const auto& x : oracle::all_sequences(rows, n))
    if (oracle::counts(x) == cx) left.push_back(x);
  for (const auto& y : oracle::all_sequences(cols, n))
    if (oracle::counts(y) == cy) right.push_back(y);
  ASSERT_EQ(g.left_count(), left.size());
  ASSERT_EQ(g.right_count(), right.size());
  std::uint64_t edges = 0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    ASSERT_EQ(g.left_vertex(i), left[i]);
    for (std::size_t j = 0; j < right.size(); ++j) {
      const bool e = oracle::counts(oracle::pair_sequence(left[i], right[j])) == counts;
      edges += e;
      ASSERT_EQ(g.adjacent(i, j), e);
    }
  }
  EXPECT_EQ(g.edge_count(), edges);
}

MarkovDecomposition three_point() {
  // 3/10 (0,0) + 3/10 (1,1) + 2/5 uniform product
  const Alphabet u = Alphabet::indexed(3);
  const std::vector<std::optional<std::vector<Rational>>> f{std::vector<Rational>{1, 0},
                                                            std::vector<Rational>{0, 1},
                                                            std::vector<Rational>{Rational(1, 2), Rational(1, 2)}};
  MarkovDecomposition d;
  d.label = "three-point";
  d.weights = Pmf(u, {Rational(3, 10), Rational(3, 10), Rational(2, 5)});
  d.left = CondPmf(u, Alphabet::indexed(2), f);
  d.right = CondPmf(u, Alphabet::indexed(2), f);
  return d;
}

BipartiteGraph complete(std::size_t m, std::size_t n) {
  const SequenceCodec c(2, n);
  std::vector<std::uint64_t> codes;
  for (std::size_t i = 0; i < m; ++i) codes.push_back(i);
  std::vector<std::vector<std::uint32_t>> adj(m);
  for (auto& a : adj)
    for (std::size_t j = 0; j < m; ++j) a.push_back(static_cast<std::uint32_t>(j));
  return BipartiteGraph(c, c, codes, codes, adj);
}

}  // namespace

TEST(ExactTypeSubgraph, RoundedDiagonalAtFour) {
  const auto a = build_exact_type_subgraph(binary_example(), 4, sched(4));
  EXPECT_EQ(a.tilde.approx, oracle::joint({{Rational(1, 2), 0}, {0, Rational(1, 2)}}));
  EXPECT_EQ(a.graph.left_count(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a.graph.left_degree(i), 1u);
    EXPECT_EQ(a.graph.right_vertex(a.graph.neighbours(i)[0]), a.graph.left_vertex(i));
  }
  const auto r = verify_prop1(a);
  EXPECT_TRUE(r.passed());
  EXPECT_DOUBLE_EQ(r.left.degree_entropy, 0.0);
}

TEST(ExactTypeSubgraph, MatchesBruteForceAtTen) {
  const auto a = build_exact_type_subgraph(binary_example(), 10, sched(10));
  EXPECT_EQ(a.tilde.approx, binary_example());
  expect_exact_type_graph(a.graph, binary_example(), 10, {4, 1, 1, 4});
  const auto r = verify_prop1(a);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.delta3, 4 * std::log2(11.0) / 10, 1e-12);
  // every degree equals C(5,1)^2 = 25, so H(P~_{Y|X}) - delta3 <= log2(25)/10 <= H(P~_{Y|X})
  for (std::size_t i = 0; i < a.graph.left_count(); ++i) EXPECT_EQ(a.graph.left_degree(i), 25u);
  EXPECT_TRUE(a.containment.contained());
}

TEST(ExactTypeSubgraph, PointMass) {
  const JointPmf p = oracle::joint({{0, 1}, {0, 0}});
  const auto a = build_exact_type_subgraph(p, 5, sched(5));
  ASSERT_EQ(a.graph.left_count(), 1u);
  EXPECT_EQ(a.graph.left_degree(0), 1u);
  const auto r = verify_prop1(a);
  EXPECT_TRUE(r.passed());
  EXPECT_DOUBLE_EQ(r.left.degree_entropy, 0.0);
  EXPECT_DOUBLE_EQ(r.left.min_degree_rate, 0.0);
}

TEST(ExactTypeSubgraph, RandomMatchesBruteForceAndProp1) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t cols = 2 + rng() % 2;
    const JointPmf j = oracle::random_joint(rng, 2, cols, 1 + static_cast<std::int64_t>(rng() % 30));
    const std::int64_t n = cols == 2 ? 4 + static_cast<std::int64_t>(rng() % 7) : 3 + static_cast<std::int64_t>(rng() % 4);
    const auto a = build_exact_type_subgraph(j, n, sched(n));
    expect_exact_type_graph(a.graph, j, static_cast<std::size_t>(n), a.tilde.counts);
    EXPECT_TRUE(verify_prop1(a).passed());
    if (a.containment.approximation_ok) EXPECT_TRUE(a.containment.contained());
  }
}

TEST(ExactTypeSubgraph, CapIsEnforced) {
  EXPECT_THROW(build_exact_type_subgraph(binary_example(), 30, sched(30), 1000), CapExceeded);
}

TEST(ExactTypeSubgraph, ContainmentFlagsSmallN) {
  const auto a = build_exact_type_subgraph(binary_example(), 4, TypicalityParams::fixed(Rational(1, 10), Rational(1, 10), Rational(1, 20)));
  EXPECT_FALSE(a.containment.approximation_ok);
  EXPECT_FALSE(a.containment.failed_inequalities.empty());
  EXPECT_FALSE(a.containment.edges_contained);
}

TEST(AuxSubgraph, ConstantUEqualsExactType) {
  for (std::int64_t n : {6, 9, 12}) {
    const auto a = build_exact_type_subgraph(binary_example(), n, sched(n));
    const auto g = build_aux_subgraph(binary_example(), constant_aux(binary_example()), n, sched(n));
    EXPECT_TRUE(g.graph == a.graph);
    EXPECT_TRUE(verify_prop2(g).passed());
  }
}

TEST(AuxSubgraph, CopyXAtTwelve) {
  const std::int64_t n = 12;
  const auto g = build_aux_subgraph(binary_example(), copy_x_aux(binary_example()), n, sched(n));
  EXPECT_EQ(g.graph.left_count(), 1u);
  EXPECT_EQ(g.graph.left_vertex(0), g.u_seq);
  const auto m = measure_rates(g.graph, n);
  EXPECT_EQ(m.rates.r_x, 0.0);
  EXPECT_EQ(g.targets.r_x, 0.0);
  const double d3 = 8 * std::log2(13.0) / 12;
  EXPECT_LE(std::abs(m.left_min_degree_rate - g.targets.r_y_prime), d3);
  EXPECT_LE(std::abs(m.left_max_degree_rate - g.targets.r_y_prime), d3);
  EXPECT_TRUE(verify_prop2(g).passed());
}

TEST(AuxSubgraph, MatchesBruteForceGivenU) {
  const JointPmf joint = binary_example();
  // U depends on X only
  const CondPmf aux(Alphabet::indexed(4), Alphabet::indexed(2),
                    {std::vector<Rational>{Rational(3, 4), Rational(1, 4)}, std::vector<Rational>{Rational(3, 4), Rational(1, 4)},
                     std::vector<Rational>{Rational(1, 4), Rational(3, 4)}, std::vector<Rational>{Rational(1, 4), Rational(3, 4)}});
  const std::size_t n = 8;
  const auto g = build_aux_subgraph(joint, aux, static_cast<std::int64_t>(n), sched(8));
  const auto& c = g.tilde_uxy.counts;
  std::vector<std::int64_t> ux(4, 0), uy(4, 0);
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) {
        ux[u * 2 + x] += c[u * 4 + x * 2 + y];
        uy[u * 2 + y] += c[u * 4 + x * 2 + y];
      }
  auto triple_counts = [&](const Sequence* x, const Sequence* y) {
    std::vector<std::int64_t> out(x && y ? 8 : 4, 0);
    for (std::size_t t = 0; t < n; ++t) {
      const auto u = g.u_seq[t];
      if (x && y) ++out[u * 4 + (*x)[t] * 2 + (*y)[t]];
      else if (x) ++out[u * 2 + (*x)[t]];
      else ++out[u * 2 + (*y)[t]];
    }
    return out;
  };
  std::vector<Sequence> left, right;
  for (const auto& s : oracle::all_sequences(2, n)) {
    if (triple_counts(&s, nullptr) == ux) left.push_back(s);
    if (triple_counts(nullptr, &s) == uy) right.push_back(s);
  }
  ASSERT_EQ(g.graph.left_count(), left.size());
  ASSERT_EQ(g.graph.right_count(), right.size());
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j)
      ASSERT_EQ(g.graph.adjacent(i, j), triple_counts(&left[i], &right[j]) == c);
  EXPECT_TRUE(verify_prop2(g).passed());
}

TEST(AuxSubgraph, FunctionOfXRatesWithinDelta3) {
  const std::int64_t n = 12;
  const CondPmf aux(Alphabet::indexed(4), Alphabet::indexed(2),
                    {std::vector<Rational>{Rational(2, 3), Rational(1, 3)}, std::vector<Rational>{Rational(2, 3), Rational(1, 3)},
                     std::vector<Rational>{Rational(1, 3), Rational(2, 3)}, std::vector<Rational>{Rational(1, 3), Rational(2, 3)}});
  const auto g = build_aux_subgraph(binary_example(), aux, n, sched(n));
  const auto rep = verify_prop2(g);
  EXPECT_TRUE(rep.passed());
  const RateTuple dev = max_deviation(g.graph, n, g.targets);
  EXPECT_LE(dev.r_x, rep.left.size_tolerance + 1e-9);
  EXPECT_LE(dev.r_y, rep.right.size_tolerance + 1e-9);
  EXPECT_LE(dev.r_y_prime, rep.delta3 + 1e-9);
  EXPECT_LE(dev.r_x_prime, rep.delta3 + 1e-9);
}

TEST(AuxSubgraph, RejectsBadChannels) {
  const CondPmf wrong(Alphabet::indexed(3), Alphabet::indexed(1),
                      {std::vector<Rational>{1}, std::vector<Rational>{1}, std::vector<Rational>{1}});
  EXPECT_THROW(build_aux_subgraph(binary_example(), wrong, 6, sched(6)), InputError);
  const CondPmf hole(Alphabet::indexed(4), Alphabet::indexed(1),
                     {std::vector<Rational>{1}, std::nullopt, std::vector<Rational>{1}, std::vector<Rational>{1}});
  EXPECT_THROW(build_aux_subgraph(binary_example(), hole, 6, sched(6)), InputError);
}

TEST(MeasureRates, CompleteAndSingleEdge) {
  const auto m = measure_rates(complete(4, 4), 4);
  EXPECT_DOUBLE_EQ(m.rates.r_x, 0.5);
  EXPECT_DOUBLE_EQ(m.rates.r_y, 0.5);
  EXPECT_DOUBLE_EQ(m.rates.r_x_prime, 0.5);
  EXPECT_DOUBLE_EQ(m.rates.r_y_prime, 0.5);
  EXPECT_DOUBLE_EQ(m.nearly_complete_slack, 0.0);
  EXPECT_DOUBLE_EQ(m.general_slack, 0.0);
  const auto one = measure_rates(complete(1, 3), 3);
  EXPECT_DOUBLE_EQ(one.rates.r_x, 0.0);
  EXPECT_DOUBLE_EQ(one.rates.r_y_prime, 0.0);
}

TEST(MeasureRates, ExactTypeAtTen) {
  const auto a = build_exact_type_subgraph(binary_example(), 10, sched(10));
  const auto r = verify_prop1(a);
  const auto m = measure_rates(a.graph, 10);
  EXPECT_LE(std::abs(m.rates.r_y_prime - conditional_entropy(binary_example(), Given::X)), r.delta3);
}

TEST(MarkovDecomposition, Canonical) {
  const JointPmf p = binary_example();
  const auto ds = canonical_markov_decompositions(p);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].residual, 0);
  EXPECT_EQ(ds[1].residual, 0);
  const auto [ax, ay] = rate_point(ds[0]);
  EXPECT_DOUBLE_EQ(ax, 0.0);
  EXPECT_NEAR(ay, 0.721928, 1e-6);
  EXPECT_NEAR(ay, conditional_entropy(p, Given::X), 1e-12);
  const auto [bx, by] = rate_point(ds[1]);
  EXPECT_NEAR(bx, conditional_entropy(p, Given::Y), 1e-12);
  EXPECT_DOUBLE_EQ(by, 0.0);
  EXPECT_EQ(induced_joint(ds[0]), p);

  const JointPmf sparse = oracle::joint({{Rational(1, 2), 0, 0}, {0, 0, Rational(1, 2)}, {0, 0, 0}});
  const auto s = canonical_markov_decompositions(sparse);
  EXPECT_EQ(s[0].weights.size(), 2u);
  EXPECT_EQ(s[1].weights.size(), 2u);
}

TEST(MarkovDecomposition, ProductAndPerturbed) {
  const JointPmf prod = binary_example().product_of_marginals();
  const auto d = product_decomposition(prod);
  EXPECT_EQ(d.residual, 0);
  const auto [hx, hy] = rate_point(d);
  EXPECT_DOUBLE_EQ(hx, 1.0);
  EXPECT_DOUBLE_EQ(hy, 1.0);
  EXPECT_GT(product_decomposition(binary_example()).residual, 0);

  auto t = three_point();
  EXPECT_EQ(verify_decomposition(t, binary_example()), 0);
  const auto [tx, ty] = rate_point(t);
  EXPECT_NEAR(tx, 0.4, 1e-12);
  EXPECT_NEAR(ty, 0.4, 1e-12);

  // move 1/10 of weight from the first point to the second: cells (0,0), (1,1) shift by 1/10
  t.weights = Pmf(Alphabet::indexed(3), {Rational(1, 5), Rational(2, 5), Rational(2, 5)});
  EXPECT_EQ(verify_decomposition(t, binary_example()), Rational(1, 5));
  EXPECT_THROW(rate_point(t), InputError);
  EXPECT_THROW(aux_from_decomposition(t, binary_example()), InputError);
}

TEST(MarkovDecomposition, NearlyCompleteSlack) {
  auto t = three_point();
  verify_decomposition(t, binary_example());
  const CondPmf aux = aux_from_decomposition(t, binary_example());
  for (std::int64_t n : {8, 10, 12}) {
    const auto g = build_aux_subgraph(binary_example(), aux, n, sched(n));
    const auto rep = verify_prop2(g);
    EXPECT_TRUE(rep.passed());
    const auto m = measure_rates(g.graph, n);
    EXPECT_LE(m.nearly_complete_slack, rep.delta3 + tilde_conditional_mi(g) + 1e-9) << n;
  }
}

TEST(MarkovDecomposition, CornerPoints) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const JointPmf p = oracle::random_joint(rng, 2 + rng() % 2, 2 + rng() % 2, 30);
    const auto ds = canonical_markov_decompositions(p);
    EXPECT_EQ(rate_point(ds[0]).first, 0.0);
    EXPECT_NEAR(rate_point(ds[0]).second, conditional_entropy(p, Given::X), 1e-9);
    EXPECT_NEAR(rate_point(ds[1]).first, conditional_entropy(p, Given::Y), 1e-9);
    EXPECT_EQ(rate_point(ds[1]).second, 0.0);
  }
}
