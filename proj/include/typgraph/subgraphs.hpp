#pragma once

// Explicit subgraph constructions inside G_n: the exact-type subgraph A_n
// built from a denominator-n approximation of P_XY, the auxiliary-variable
// subgraph built from conditional type classes given a fixed u-sequence,
// rate measurement, and Markov decompositions X - U - Y.

#include <string>
#include <utility>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/graph.hpp"
#include "typgraph/typicality.hpp"

namespace typgraph {

/// Whether a subgraph actually sits inside G_n for the run's parameters.
/// approximation_ok records the sufficient 1/n-vs-parameter inequalities;
/// the contained flags are the exact type-level checks.
struct ContainmentReport {
  bool approximation_ok = true;
  std::vector<std::string> failed_inequalities;
  bool left_contained = false;
  bool right_contained = false;
  bool edges_contained = false;
  bool contained() const { return left_contained && right_contained && edges_contained; }
};

struct ExactTypeSubgraph {
  ApproxResult<JointPmf> tilde;
  TypeVector left_type;
  TypeVector right_type;
  JointTypeVector joint_type;
  BipartiteGraph graph;
  ContainmentReport containment;
};

/// Rosters T_0(P~_X), T_0(P~_Y); x ~ y iff their joint type is exactly P~_XY.
ExactTypeSubgraph build_exact_type_subgraph(const JointPmf& joint, std::int64_t n, const TypicalityParams& params,
                                            std::uint64_t cap = kDefaultCap);

struct SideCheck {
  double log2_size_rate = 0.0;  // (1/n) log2 |roster|
  double entropy = 0.0;         // target vertex rate
  double size_tolerance = 0.0;
  bool size_ok = false;
  double degree_entropy = 0.0;  // target degree rate
  double min_degree_rate = 0.0;
  double max_degree_rate = 0.0;
  std::uint64_t degree_violations = 0;
};

struct SubgraphReport {
  double delta3 = 0.0;
  SideCheck left;
  SideCheck right;
  bool passed() const {
    return left.size_ok && right.size_ok && left.degree_violations == 0 && right.degree_violations == 0;
  }
};

/// Roster log-sizes within |X| log2(n+1)/n of H(P~_X) (resp. Y), and every
/// degree in [2^{n(H - delta3)}, 2^{nH}] for H = H(P~_{Y|X}) on the left and
/// H(P~_{X|Y}) on the right, delta3 = |X||Y| log2(n+1)/n.
SubgraphReport verify_prop1(const ExactTypeSubgraph& a);

struct RateTuple {
  double r_x = 0.0;
  double r_y = 0.0;
  double r_x_prime = 0.0;  // degree rate of right vertices
  double r_y_prime = 0.0;  // degree rate of left vertices
};

struct AuxSubgraph {
  CondPmf aux;  // P_{U|XY}; given symbol index x*|Y| + y
  /// P~_UXY with rows U and columns the pairs (x, y) in row-major order.
  ApproxResult<JointPmf> tilde_uxy;
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  Sequence u_seq;
  BipartiteGraph graph;
  ContainmentReport containment;
  /// (H(P~_{X|U}), H(P~_{Y|U}), H(P~_{X|YU}), H(P~_{Y|XU})).
  RateTuple targets;
};

/// P_UXY = P_XY P_{U|XY} is rounded in one largest-remainder pass over the
/// u-major cells; u_seq is the lexicographically smallest sequence of type
/// P~_U.
AuxSubgraph build_aux_subgraph(const JointPmf& joint, const CondPmf& aux, std::int64_t n,
                               const TypicalityParams& params, std::uint64_t cap = kDefaultCap);

/// Vertex-size tolerance |X||U| log2(n+1)/n (resp. |Y||U|), degree delta3
/// |X||Y||U| log2(n+1)/n.
SubgraphReport verify_prop2(const AuxSubgraph& g);

struct RateMeasurement {
  RateTuple rates;  // degree rates are midpoints of the observed ranges
  double left_min_degree_rate = 0.0;
  double left_max_degree_rate = 0.0;
  double right_min_degree_rate = 0.0;
  double right_max_degree_rate = 0.0;
  /// Smallest delta satisfying the two-sided general-rate conditions.
  double general_slack = 0.0;
  /// Smallest delta satisfying the one-sided nearly complete conditions
  /// with rates equal to the measured vertex rates.
  double nearly_complete_slack = 0.0;
};

RateMeasurement measure_rates(const BipartiteGraph& g, std::int64_t n);

/// Largest |measured - target| over every vertex, component by component.
RateTuple max_deviation(const BipartiteGraph& g, std::int64_t n, const RateTuple& target);

struct MarkovDecomposition {
  std::string label;
  Pmf weights;       // P_U
  CondPmf left;      // P_{X|U}
  CondPmf right;     // P_{Y|U}
  Rational residual = 0;  // L1 distance of the induced joint to P_XY
};

JointPmf induced_joint(const MarkovDecomposition& d);

/// U = X and U = Y, both exact. Zero-probability symbols are dropped from U.
std::vector<MarkovDecomposition> canonical_markov_decompositions(const JointPmf& joint);

/// Constant U with factors P_X, P_Y; exact only for product laws.
MarkovDecomposition product_decomposition(const JointPmf& joint);

/// Recomputes the induced joint and stores its L1 distance to `joint`.
Rational verify_decomposition(MarkovDecomposition& d, const JointPmf& joint);

/// (H(X|U), H(Y|U)) of the induced joint. Throws InputError if the stored
/// residual exceeds tol.
std::pair<double, double> rate_point(const MarkovDecomposition& d, double tol = 1e-9);

/// P_{U|XY} = w(u) a_u(x) b_u(y) / P(x, y); requires an exact decomposition.
CondPmf aux_from_decomposition(const MarkovDecomposition& d, const JointPmf& joint);

/// U = X as a channel: P_{U|XY}(u|x,y) = [u = x].
CondPmf copy_x_aux(const JointPmf& joint);
/// |U| = 1.
CondPmf constant_aux(const JointPmf& joint);

/// Conditional mutual information I(X;Y|U) of P~_UXY, in bits.
double tilde_conditional_mi(const AuxSubgraph& g);

}  // namespace typgraph
