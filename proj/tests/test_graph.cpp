#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "typgraph/graph.hpp"

using namespace typgraph;
using oracle::binary_example;

namespace {

GraphSpec spec_of(const JointPmf& j, std::int64_t n, TypicalityParams p, GraphMode m = GraphMode::Explicit) {
  return GraphSpec{j, n, std::move(p), m, kDefaultCap};
}

TypicalityParams fixed(Rational e1, Rational e2, Rational l) { return TypicalityParams::fixed(e1, e2, l); }

// Rosters and adjacency straight from the definitions.
struct BruteGraph {
  std::vector<Sequence> left, right;
  std::vector<std::vector<bool>> adj;
  std::uint64_t edges = 0;
};

BruteGraph brute(const JointPmf& j, std::size_t n, const TypicalityParams& p) {
  BruteGraph g;
  const auto px = j.row_marginal(), py = j.col_marginal();
  for (const auto& x : oracle::all_sequences(j.rows(), n))
    if (oracle::typical(x, px.probs(), p.eps1)) g.left.push_back(x);
  for (const auto& y : oracle::all_sequences(j.cols(), n))
    if (oracle::typical(y, py.probs(), p.eps2)) g.right.push_back(y);
  for (const auto& x : g.left) {
    g.adj.emplace_back();
    for (const auto& y : g.right) {
      g.adj.back().push_back(oracle::jointly_typical(x, y, j, p.lambda));
      g.edges += g.adj.back().back();
    }
  }
  return g;
}

void expect_same(const TypicalityGraph& tg, const BruteGraph& b) {
  const auto& g = tg.explicit_graph();
  ASSERT_EQ(g.left_count(), b.left.size());
  ASSERT_EQ(g.right_count(), b.right.size());
  for (std::size_t i = 0; i < b.left.size(); ++i) ASSERT_EQ(g.left_vertex(i), b.left[i]);
  for (std::size_t j = 0; j < b.right.size(); ++j) ASSERT_EQ(g.right_vertex(j), b.right[j]);
  for (std::size_t i = 0; i < b.left.size(); ++i)
    for (std::size_t j = 0; j < b.right.size(); ++j) ASSERT_EQ(g.adjacent(i, j), b.adj[i][j]) << i << "," << j;
  EXPECT_EQ(g.edge_count(), b.edges);
  EXPECT_EQ(tg.edge_count().value, b.edges);
}

}  // namespace

TEST(SequenceCodec, OrderAndRoundTrip) {
  const SequenceCodec c(3, 5);
  std::uint64_t prev = 0;
  bool first = true;
  for (const auto& s : oracle::all_sequences(3, 5)) {
    const auto code = c.encode(s);
    if (!first) EXPECT_GT(code, prev);
    EXPECT_EQ(c.decode(code), s);
    prev = code;
    first = false;
  }
  EXPECT_THROW(SequenceCodec(2, 64), CapExceeded);
}

TEST(BipartiteGraph, RejectsBadAdjacency) {
  const SequenceCodec c(2, 1);
  EXPECT_THROW(BipartiteGraph(c, c, {0, 1}, {0, 1}, {{0, 0}, {}}), InputError);
  EXPECT_THROW(BipartiteGraph(c, c, {0, 1}, {0, 1}, {{2}, {}}), InputError);
}

TEST(BuildGraph, BinaryExampleFixedParams) {
  const auto p = fixed(Rational(1, 4), Rational(1, 4), Rational(3, 20));
  const TypicalityGraph g = build_graph(spec_of(binary_example(), 4, p));
  EXPECT_EQ(g.explicit_graph().left_count(), 14u);
  EXPECT_EQ(g.explicit_graph().right_count(), 14u);
  expect_same(g, brute(binary_example(), 4, p));

  const Sequence x(2, {0, 0, 1, 1});
  std::uint64_t deg = 0;
  for (const auto& y : oracle::all_sequences(2, 4))
    deg += oracle::typical(y, binary_example().col_marginal().probs(), Rational(1, 4)) &&
           oracle::jointly_typical(x, y, binary_example(), Rational(3, 20));
  EXPECT_EQ(g.degree(Side::Left, x).value, deg);
  EXPECT_EQ(g.explicit_graph().left_degree(*g.explicit_graph().left_id(x)), deg);
}

TEST(BuildGraph, MembershipEquivalenceRandom) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t rows = 2 + rng() % 2, cols = 2;
    const JointPmf j = oracle::random_joint(rng, rows, cols, 12);
    const std::size_t n = rows == 2 ? 3 + rng() % 6 : 3 + rng() % 3;
    const auto p = fixed(Rational(static_cast<std::int64_t>(rng() % 4), 8),
                         Rational(static_cast<std::int64_t>(rng() % 4), 8),
                         Rational(static_cast<std::int64_t>(rng() % 4), 8));
    const TypicalityGraph g = build_graph(spec_of(j, static_cast<std::int64_t>(n), p), 1 + trial % 3);
    expect_same(g, brute(j, n, p));
  }
}

TEST(BuildGraph, DefaultScheduleEquivalence) {
  for (std::int64_t n : {4, 6, 8}) {
    const auto p = TypicalityParams::from_schedule("cube-root", n);
    expect_same(build_graph(spec_of(binary_example(), n, p)), brute(binary_example(), n, p));
  }
}

TEST(BuildGraph, Degenerate) {
  const JointPmf id = oracle::joint({{Rational(1, 2), 0}, {0, Rational(1, 2)}});
  const TypicalityGraph g = build_graph(spec_of(id, 6, fixed(Rational(0), Rational(0), Rational(0))));
  const auto& bg = g.explicit_graph();
  ASSERT_EQ(bg.left_count(), bg.right_count());
  for (std::size_t i = 0; i < bg.left_count(); ++i) {
    ASSERT_EQ(bg.left_degree(i), 1u);
    EXPECT_EQ(bg.right_vertex(bg.neighbours(i)[0]), bg.left_vertex(i));
  }
  EXPECT_TRUE(check_degree_bound(g, id).passed());

  const JointPmf prod = binary_example().product_of_marginals();
  const TypicalityGraph c = build_graph(spec_of(prod, 5, fixed(Rational(1), Rational(1), Rational(1))));
  EXPECT_EQ(c.explicit_graph().edge_count(), 32u * 32u);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(c.degree(Side::Left, i).value, 32);
  EXPECT_TRUE(check_degree_bound(c, prod).passed());

  const TypicalityGraph e = build_graph(spec_of(binary_example(), 3, fixed(Rational(1, 6), Rational(1, 6), Rational(0))));
  EXPECT_EQ(e.explicit_graph().edge_count(), 0u);
  EXPECT_TRUE(edge_list(e).empty());
  for (std::size_t i = 0; i < e.explicit_graph().left_count(); ++i) EXPECT_EQ(e.degree(Side::Left, i).value, 0);
}

TEST(EdgeList, CompleteTwoByTwo) {
  const JointPmf prod = oracle::joint({{Rational(1, 4), Rational(1, 4)}, {Rational(1, 4), Rational(1, 4)}});
  const TypicalityGraph g = build_graph(spec_of(prod, 1, fixed(Rational(1), Rational(1), Rational(1))));
  const auto e = edge_list(g);
  EXPECT_EQ(e, (std::vector<Edge>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(BuildGraph, CapAndImplicitMode) {
  auto s = spec_of(binary_example(), 10, TypicalityParams::from_schedule("cube-root", 10));
  s.cap = 512;
  EXPECT_THROW(build_graph(s), CapExceeded);
  s.mode = GraphMode::Implicit;
  const TypicalityGraph imp = build_graph(s);
  EXPECT_FALSE(imp.materialized());
  s.mode = GraphMode::Explicit;
  s.cap = kDefaultCap;
  const TypicalityGraph ex = build_graph(s);
  EXPECT_EQ(imp.left_count(), ex.left_count());
  EXPECT_EQ(imp.edge_count(), ex.edge_count());
  const auto& bg = ex.explicit_graph();
  for (std::size_t i = 0; i < bg.left_count(); i += 7) {
    const Sequence x = bg.left_vertex(i);
    EXPECT_EQ(imp.degree(Side::Left, x).value, bg.left_degree(i));
    for (std::size_t j = 0; j < bg.right_count(); j += 11) EXPECT_EQ(imp.adjacent(x, bg.right_vertex(j)), bg.adjacent(i, j));
  }
  for (std::size_t j = 0; j < bg.right_count(); j += 5)
    EXPECT_EQ(imp.degree(Side::Right, bg.right_vertex(j)).value, bg.right_degree(j));
  EXPECT_THROW(imp.degree(Side::Left, Sequence(2, std::vector<Symbol>(10, 0))), InputError);
  EXPECT_THROW(imp.explicit_graph(), InputError);

  const VertexStats a = stats(imp), b = stats(ex);
  EXPECT_EQ(a.left.vertices, b.left.vertices);
  EXPECT_NEAR(a.left.mean_log2_degree, b.left.mean_log2_degree, 1e-9);
  EXPECT_NEAR(a.right.min_log2_degree, b.right.min_log2_degree, 1e-12);
  EXPECT_NEAR(a.right.max_log2_degree, b.right.max_log2_degree, 1e-12);
}

TEST(BuildGraph, ImplicitScalesPastCap) {
  const auto p = TypicalityParams::from_schedule("cube-root", 200);
  const TypicalityGraph g = build_graph(spec_of(binary_example(), 200, p, GraphMode::Implicit));
  EXPECT_GT(g.edge_count().log2, 100.0);
  const JointPmf joint = binary_example();
  EXPECT_TRUE(check_degree_bound(g, joint).passed());
}

TEST(BuildGraph, TransposeConsistency) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const JointPmf j = oracle::random_joint(rng, 2, 3, 15);
    const auto p = fixed(Rational(1, 4), Rational(1, 3), Rational(1, 5));
    const TypicalityGraph a = build_graph(spec_of(j, 5, p));
    const TypicalityGraph b = build_graph(spec_of(j.transposed(), 5, fixed(p.eps2, p.eps1, p.lambda)));
    EXPECT_TRUE(a.explicit_graph().transposed() == b.explicit_graph());
  }
}

TEST(Stats, OrderingAndEnvelope) {
  for (std::int64_t n : {8, 12, 16}) {
    const auto p = TypicalityParams::from_schedule("cube-root", n);
    const TypicalityGraph g = build_graph(spec_of(binary_example(), n, p, GraphMode::Implicit));
    const VertexStats s = stats(g);
    EXPECT_LE(s.left.min_log2_degree, s.left.mean_log2_degree + 1e-12);
    EXPECT_LE(s.left.mean_log2_degree, s.left.max_log2_degree + 1e-12);
    const double d = to_double(p.eps1);
    const double kd = 2 * d;
    const double cont = kd <= 0.5 ? entropy_continuity_bound(kd, 2) : 1.0;
    const double c = cont + 2 * std::log2(n + 1.0) / static_cast<double>(n);
    EXPECT_LE(std::abs(s.left.log2_size / static_cast<double>(n) - 1.0), c);
    EXPECT_TRUE(check_degree_bound(g, binary_example()).passed());
  }
}

TEST(DegreeBound, PassesOnRandomGraphs) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const JointPmf j = oracle::random_joint(rng, 2, 2 + rng() % 2, 10);
    const auto p = fixed(Rational(static_cast<std::int64_t>(rng() % 3), 6),
                         Rational(static_cast<std::int64_t>(rng() % 3), 6),
                         Rational(static_cast<std::int64_t>(rng() % 3), 6));
    const auto r = check_degree_bound(build_graph(spec_of(j, 6, p)), j);
    EXPECT_TRUE(r.passed());
  }
}
