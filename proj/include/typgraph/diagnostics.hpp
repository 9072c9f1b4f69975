#pragma once

// Converse-side tools on an edge set: the uniform (Fano) law over edges and
// its per-letter marginals, dominant joint type, block mutual information,
// greedy wringing, the per-letter Pinsker check and the strong-converse
// bound.

#include <cstdint>
#include <optional>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/graph.hpp"
#include "typgraph/typicality.hpp"

namespace typgraph {

struct LabeledEdge {
  Sequence x;
  Sequence y;
};

std::vector<LabeledEdge> labeled_edges(const BipartiteGraph& g);

class EdgeDistribution {
 public:
  /// Uniform law over the edge multiset; throws InputError when empty or
  /// when lengths and alphabets disagree.
  EdgeDistribution(std::vector<LabeledEdge> edges, std::size_t x_size, std::size_t y_size);

  std::size_t size() const { return edges_.size(); }
  std::int64_t n() const { return n_; }
  std::size_t x_size() const { return x_size_; }
  std::size_t y_size() const { return y_size_; }
  const std::vector<LabeledEdge>& edges() const { return edges_; }

  /// Counts of (x_t, y_t) over the edges, row-major |X| x |Y|.
  const std::vector<std::int64_t>& letter_counts(std::size_t t) const { return letters_.at(t); }
  /// Exact law of (X'_t, Y'_t).
  JointPmf per_letter(std::size_t t) const;

 private:
  std::vector<LabeledEdge> edges_;
  std::size_t x_size_;
  std::size_t y_size_;
  std::int64_t n_;
  std::vector<std::vector<std::int64_t>> letters_;
};

EdgeDistribution fano_distribution(std::vector<LabeledEdge> edges, std::size_t x_size, std::size_t y_size);
EdgeDistribution fano_distribution(const BipartiteGraph& g);

/// Mutual information in bits of a law given by nonnegative cell counts;
/// exactly 0 when the counts factor.
double mi_of_counts(std::span<const std::int64_t> cells, std::size_t rows, std::size_t cols);

struct DominantTypeResult {
  JointTypeVector joint_type;
  std::uint64_t count = 0;
  Rational edge_fraction;
  std::size_t types_present = 0;
  /// fraction >= 1/(n+1)^{|X||Y|}
  bool pigeonhole_ok = false;
  /// fraction >= 1/types_present
  bool present_ok = false;
};

/// Most frequent joint type; ties go to the lexicographically smallest
/// count vector.
DominantTypeResult dominant_joint_type(const EdgeDistribution& dist);

/// Edges whose pair has the given joint type.
EdgeDistribution restrict_to_type(const EdgeDistribution& dist, const JointTypeVector& t);

/// 2 n delta_n + |X||Y| log2(n+1).
double block_mi_lemma_bound(std::int64_t n, double delta_n, std::size_t x_size, std::size_t y_size);

struct BlockMiResult {
  std::optional<double> exact;
  double bound = 0.0;
  /// |E| >= Dx Dy 2^{-2 n delta_n} / (n+1)^{|X||Y|}
  bool size_condition = false;
  /// exact <= bound; set only when both the exact value and the size
  /// condition are available.
  std::optional<bool> exact_within_bound;
};

/// left_count, right_count are the vertex-set sizes the edges live in.
BlockMiResult block_mi_bound(const EdgeDistribution& dist, const BigInt& left_count, const BigInt& right_count,
                             double delta_n, std::uint64_t exact_cap = std::uint64_t{1} << 24);

/// Exact I(X'^n; Y'^n) of the uniform edge law.
double block_mi(const EdgeDistribution& dist);

/// sqrt(delta_n log2 n).
double default_wring_delta(std::int64_t n, const std::string& schedule = "cube-root");

struct WringStep {
  std::size_t position = 0;
  Symbol x_value = 0;
  Symbol y_value = 0;
  double max_mi_before = 0.0;
  Rational surviving_fraction;
};

struct WringResult {
  double delta = 0.0;
  double sigma = 0.0;
  std::vector<WringStep> steps;
  std::size_t k() const { return steps.size(); }
  std::vector<std::size_t> surviving;  // indices into the input edges
  Rational surviving_fraction;
  std::vector<double> per_letter_mi;
  bool converged = false;
  /// k reached 2 sigma/delta, outside the lemma's range.
  bool exceeded_lemma_k = false;
  /// (delta / (|X||Y| (2 sigma - delta)))^k
  std::optional<double> lemma_fraction_bound;
  /// surviving_fraction >= lemma bound, when the lemma applies.
  std::optional<bool> lemma_bound_ok;
};

/// Greedy: while some position has per-letter MI above delta, condition on
/// the most probable (x_t, y_t) at the worst position (ties to the smallest
/// position and the lexicographically smallest value). sigma defaults to
/// the exact block MI. Stops after n|X||Y| steps.
WringResult wring(const EdgeDistribution& dist, double delta, std::optional<double> sigma = std::nullopt);

EdgeDistribution surviving_distribution(const EdgeDistribution& dist, const WringResult& w);

struct PinskerReport {
  std::vector<double> tv;  // per letter, L1 distance to the product of marginals
  std::vector<double> mi;
  double threshold = 0.0;  // 2 sqrt(delta)
  bool all_within_threshold = false;
  /// tv_t <= 2 sqrt(mi_t) + 1e-9 for every t.
  bool all_within_mi_form = false;
};

PinskerReport pinsker_check(const EdgeDistribution& dist, double delta);

/// sum_mi + 3/(1 - lambda) |A| sqrt(n); lambda in [0, 1).
double strong_converse_bound(double per_letter_mi_sum, double lambda, std::size_t alphabet_size, std::int64_t n);

}  // namespace typgraph
