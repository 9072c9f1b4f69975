#pragma once

// The typicality graph: left vertices are the eps1-typical X-sequences,
// right vertices the eps2-typical Y-sequences, and an edge joins a pair
// exactly when it is lambda-jointly typical.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/typicality.hpp"

namespace typgraph {

/// Packs a fixed-length sequence into an integer whose numeric order is the
/// lexicographic order of the sequences.
class SequenceCodec {
 public:
  SequenceCodec(std::size_t alphabet_size, std::size_t length);

  std::uint64_t encode(const Sequence& s) const;
  Sequence decode(std::uint64_t code) const;
  std::size_t alphabet_size() const { return k_; }
  std::size_t length() const { return n_; }

 private:
  std::size_t k_;
  std::size_t n_;
};

struct Edge {
  std::uint32_t left;
  std::uint32_t right;
  auto operator<=>(const Edge&) const = default;
};

/// Sorted rosters of encoded sequences plus left-indexed CSR adjacency.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(SequenceCodec left_codec, SequenceCodec right_codec, std::vector<std::uint64_t> left_codes,
                 std::vector<std::uint64_t> right_codes, std::vector<std::vector<std::uint32_t>> adjacency);

  std::size_t left_count() const { return left_codes_.size(); }
  std::size_t right_count() const { return right_codes_.size(); }
  std::uint64_t edge_count() const { return targets_.size(); }

  std::span<const std::uint32_t> neighbours(std::size_t left) const;
  std::uint64_t left_degree(std::size_t i) const { return offsets_.at(i + 1) - offsets_.at(i); }
  std::uint64_t right_degree(std::size_t j) const { return right_degrees_.at(j); }
  bool adjacent(std::size_t i, std::size_t j) const;

  Sequence left_vertex(std::size_t i) const { return left_codec_.decode(left_codes_.at(i)); }
  Sequence right_vertex(std::size_t j) const { return right_codec_.decode(right_codes_.at(j)); }
  std::optional<std::uint32_t> left_id(const Sequence& x) const;
  std::optional<std::uint32_t> right_id(const Sequence& y) const;
  std::span<const std::uint64_t> left_codes() const { return left_codes_; }
  std::span<const std::uint64_t> right_codes() const { return right_codes_; }
  const SequenceCodec& left_codec() const { return left_codec_; }
  const SequenceCodec& right_codec() const { return right_codec_; }

  /// (i, j) in lexicographic order.
  std::vector<Edge> edges() const;
  BipartiteGraph transposed() const;

  bool operator==(const BipartiteGraph& o) const {
    return left_codes_ == o.left_codes_ && right_codes_ == o.right_codes_ && offsets_ == o.offsets_ &&
           targets_ == o.targets_;
  }

 private:
  SequenceCodec left_codec_{1, 1};
  SequenceCodec right_codec_{1, 1};
  std::vector<std::uint64_t> left_codes_;
  std::vector<std::uint64_t> right_codes_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
  std::vector<std::uint64_t> right_degrees_;
};

/// Type-level description of G_n: which types are typical, how large their
/// classes are, and the (type-invariant) degree of each vertex type. Needs
/// only joint-type enumeration, never sequence enumeration.
class PairProfile {
 public:
  struct SideType {
    TypeVector type;
    BigInt class_size;
    BigInt degree;
  };

  PairProfile(const JointPmf& joint, const TypicalityParams& params, std::int64_t n);

  std::int64_t n() const { return n_; }
  const std::vector<SideType>& left_types() const { return left_; }
  const std::vector<SideType>& right_types() const { return right_; }
  const BigInt& left_count() const { return left_count_; }
  const BigInt& right_count() const { return right_count_; }
  const BigInt& edge_count() const { return edge_count_; }

  /// Joint types whose row marginal is left_types()[i], in the lambda-ball,
  /// with a typical column marginal.
  const std::vector<JointTypeVector>& joint_types_for_left(std::size_t i) const { return by_left_.at(i); }

  std::optional<std::size_t> left_index(const TypeVector& t) const;
  std::optional<std::size_t> right_index(const TypeVector& t) const;

  /// Ball membership, evaluated on count vectors.
  bool left_typical(const TypeVector& t) const { return left_ball_.contains(t.counts); }
  bool right_typical(const TypeVector& t) const { return right_ball_.contains(t.counts); }
  bool pair_typical(const JointTypeVector& j) const { return joint_ball_.contains(j.counts); }

 private:
  std::int64_t n_;
  CountBall left_ball_;
  CountBall right_ball_;
  CountBall joint_ball_;
  std::vector<SideType> left_;
  std::vector<SideType> right_;
  std::map<std::vector<std::int64_t>, std::size_t> left_lookup_;
  std::map<std::vector<std::int64_t>, std::size_t> right_lookup_;
  std::vector<std::vector<JointTypeVector>> by_left_;
  BigInt left_count_;
  BigInt right_count_;
  BigInt edge_count_;
};

enum class GraphMode { Explicit, Implicit };
enum class Side { Left, Right };

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

struct GraphSpec {
  JointPmf joint;
  std::int64_t n = 1;
  TypicalityParams params;
  GraphMode mode = GraphMode::Explicit;
  std::uint64_t cap = kDefaultCap;
};

class TypicalityGraph {
 public:
  /// Wraps an already materialized adjacency (used by import).
  TypicalityGraph(GraphSpec spec, BipartiteGraph graph);
  /// Implicit graph: no rosters, queries answered from the type profile.
  explicit TypicalityGraph(GraphSpec spec);

  const GraphSpec& spec() const { return spec_; }
  GraphMode mode() const { return spec_.mode; }
  bool materialized() const { return graph_.has_value(); }
  const BipartiteGraph& explicit_graph() const;
  const PairProfile& profile() const { return profile_; }

  BigCount left_count() const;
  BigCount right_count() const;
  BigCount edge_count() const;

  BigCount degree(Side side, std::size_t id) const;
  /// Works in either mode; throws InputError if v is not a vertex.
  BigCount degree(Side side, const Sequence& v) const;
  bool adjacent(const Sequence& x, const Sequence& y) const;

 private:
  GraphSpec spec_;
  PairProfile profile_;
  std::optional<BipartiteGraph> graph_;
};

/// Explicit mode requires |X|^n and |Y|^n within spec.cap (CapExceeded
/// otherwise). Empty vertex sets are allowed.
TypicalityGraph build_graph(const GraphSpec& spec, std::size_t workers = 0);

/// Sorted typical set, as codes.
std::vector<std::uint64_t> typical_roster(const Pmf& p, const Rational& delta, std::int64_t n,
                                          const SequenceCodec& codec);

struct SideStats {
  BigCount vertices;
  double log2_size = 0.0;
  /// Over non-isolated vertices; zero when every vertex is isolated.
  double min_log2_degree = 0.0;
  double max_log2_degree = 0.0;
  double mean_log2_degree = 0.0;
  BigInt isolated = 0;
};

struct VertexStats {
  SideStats left;
  SideStats right;
  BigCount edges;
};

VertexStats stats(const TypicalityGraph& g);

struct DegreeBoundReport {
  BigInt left_checked = 0;
  BigInt right_checked = 0;
  BigInt left_violations = 0;
  BigInt right_violations = 0;
  /// min over non-isolated vertices of (log2 bound - log2 degree) / n.
  double left_worst_slack = std::numeric_limits<double>::infinity();
  double right_worst_slack = std::numeric_limits<double>::infinity();
  bool passed() const { return left_violations == 0 && right_violations == 0; }
};

/// Every left degree against |T_{eps1+lambda}(P_{Y|X} | x)|, every right
/// degree against |T_{eps2+lambda}(P_{X|Y} | y)|.
DegreeBoundReport check_degree_bound(const TypicalityGraph& g, const JointPmf& joint);

std::vector<Edge> edge_list(const TypicalityGraph& g);

}  // namespace typgraph
