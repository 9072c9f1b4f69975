#pragma once

// Random codebooks drawn uniformly from the two typical sets, the count U of
// jointly typical codeword pairs, exact moments of U from the type profile,
// Suen upper bounds and local-lemma lower bounds on its lower tail, and a
// Monte Carlo estimator to compare against them.

#include <cstdint>
#include <optional>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/graph.hpp"
#include "typgraph/typicality.hpp"

namespace typgraph {

/// M = ceil(2^{nR}), tolerant of floating error in nR.
std::uint64_t codebook_size(double rate, std::int64_t n);

/// Fraction of (typical x, typical y) pairs that are jointly typical.
Rational exact_alpha_rational(const PairProfile& profile);
double exact_alpha(const JointPmf& joint, const TypicalityParams& params, std::int64_t n);

struct MomentEstimates {
  std::uint64_t m1 = 1;
  std::uint64_t m2 = 1;
  Rational alpha;
  /// Codewords are exchangeable, so every pair has the same probability.
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  /// E[U_ij U_il] for two pairs sharing the left codeword, and the right
  /// analogue.
  Rational left_term;
  Rational right_term;
  double beta_max = 0.0;
  double gamma = 0.0;
  double theta_cap = 0.0;
  double theta_small = 0.0;
  double tau = 0.0;
};

MomentEstimates exact_pair_moments(const PairProfile& profile, std::uint64_t m1, std::uint64_t m2);
MomentEstimates exact_pair_moments(const JointPmf& joint, const TypicalityParams& params, std::int64_t n,
                                   std::uint64_t m1, std::uint64_t m2);

/// exp{-min((1-a)^2 G^2/(8T + 2G), (1-a) G/(6t))}. A branch whose
/// denominator vanishes is dropped; with no branch left the bound is 1.
double suen_tail_bound(double gamma, double theta_cap, double theta_small, double a);
/// exp{-min(G^2/(8T), G/2, G/(6t))}, same conventions.
double suen_zero_bound(double gamma, double theta_cap, double theta_small);

/// Smallest root of phi = e^{x phi} for 0 <= x <= 1/e.
double phi_root(double x);

struct LllBounds {
  /// (1 - x)^{M1 M2} with x = 1/M1, when alpha_max <= x (1-x)^{M1+M2-2}.
  std::optional<double> symmetric;
  /// The asymptotic simplification exp(-(M2 + 1)) of the same bound, under
  /// the same condition. Informational only.
  std::optional<double> symmetric_simplified;
  /// exp(-G phi(t + tau)), when t + tau <= 1/e.
  std::optional<double> phi;
  /// Largest applicable rigorous bound, 0 when none applies.
  double best() const;
};

LllBounds lll_lower_bounds(const MomentEstimates& m);

struct ExponentEntry {
  double bound = 0.0;
  /// (1/n) log2 log2 (1/bound); empty when bound is 0 or 1.
  std::optional<double> exponent;
};

struct BoundReport {
  std::vector<double> a_grid;
  std::vector<double> suen_tail;
  double suen_zero = 1.0;
  LllBounds lll;
  ExponentEntry suen_zero_exponent;
  std::optional<ExponentEntry> lll_symmetric_exponent;
  std::optional<ExponentEntry> lll_phi_exponent;
  double r1 = 0.0;  // the larger rate
  double r2 = 0.0;  // the smaller rate
  double i_xy = 0.0;
  /// min(R2, R1 + R2 - I).
  double target = 0.0;
  bool r1_at_least_i = false;
  /// R2 <= R1 <= I: the regime where the target is tight.
  bool tight = false;
  /// Every applicable lower bound is at most the zero-count upper bound.
  bool consistent = true;
  /// Target of the relative-deviation statement for a given gamma.
  double target_for(double gamma) const { return (r1_at_least_i ? r2 : r1 + r2 - i_xy) - gamma; }
};

ExponentEntry exponent_of(double bound, std::int64_t n);

BoundReport exponent_report(const MomentEstimates& m, std::int64_t n, double r1, double r2, double i_xy,
                            const std::vector<double>& a_grid);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Score interval for a binomial proportion; z = 2.5758293035489 gives 99%.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 2.5758293035489);

struct SimulationConfig {
  JointPmf joint;
  std::int64_t n = 1;
  TypicalityParams params;
  std::uint64_t m1 = 1;
  std::uint64_t m2 = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::vector<double> a_grid;
  std::size_t workers = 0;
};

struct MonteCarloReport {
  std::uint64_t trials = 0;
  std::uint64_t zero_count = 0;
  double p_zero = 0.0;
  WilsonInterval p_zero_interval;
  double mean_u = 0.0;
  double variance_u = 0.0;
  double std_error = 0.0;
  std::vector<double> a_grid;
  /// Empirical P(U <= a * gamma) per grid point.
  std::vector<double> tail_frequency;
  double gamma = 0.0;
};

/// Each trial draws M1 codewords from T(X) on stream (seed, trial, 0) and
/// M2 from T(Y) on stream (seed, trial, 1), then counts jointly typical
/// pairs. Results do not depend on the worker count.
MonteCarloReport simulate(const SimulationConfig& config);

/// Per-trial U values, in trial order.
std::vector<std::uint64_t> simulate_counts(const SimulationConfig& config);

struct BracketVerdict {
  double lower = 0.0;
  double upper = 1.0;
  bool inside = false;
};

/// Does the empirical interval for P(U = 0) meet [best LLL bound, Suen]?
BracketVerdict bracket(const MonteCarloReport& mc, const BoundReport& bounds);

}  // namespace typgraph
