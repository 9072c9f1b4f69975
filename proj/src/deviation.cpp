#include "typgraph/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "typgraph/parallel.hpp"

namespace typgraph {

std::uint64_t codebook_size(double rate, std::int64_t n) {
  if (!(rate >= 0.0) || n < 1) {
    throw InputError("codebook rate must be >= 0 and n >= 1");
  }
  const double exponent = rate * static_cast<double>(n);
  if (exponent > 40.0) {
    throw CapExceeded("codebook of 2^" + std::to_string(exponent) + " codewords is too large to simulate");
  }
  return static_cast<std::uint64_t>(std::ceil(std::exp2(exponent) - 1e-9));
}

namespace {

void require_nonempty(const PairProfile& profile) {
  if (profile.left_count() == 0 || profile.right_count() == 0) {
    throw InputError("typical set is empty; pair moments are undefined");
  }
}

Rational sum_class_degree_squares(const std::vector<PairProfile::SideType>& types) {
  BigInt total = 0;
  for (const auto& t : types) total += t.class_size * t.degree * t.degree;
  return Rational(total);
}

}  // namespace

Rational exact_alpha_rational(const PairProfile& profile) {
  require_nonempty(profile);
  return Rational(profile.edge_count()) / Rational(profile.left_count() * profile.right_count());
}

double exact_alpha(const JointPmf& joint, const TypicalityParams& params, std::int64_t n) {
  return to_double(exact_alpha_rational(PairProfile(joint, params, n)));
}

MomentEstimates exact_pair_moments(const PairProfile& profile, std::uint64_t m1, std::uint64_t m2) {
  if (m1 < 1 || m2 < 1) {
    throw InputError("codebook sizes must be >= 1");
  }
  MomentEstimates m;
  m.m1 = m1;
  m.m2 = m2;
  m.alpha = exact_alpha_rational(profile);
  const Rational lx(profile.left_count());
  const Rational ly(profile.right_count());
  m.left_term = sum_class_degree_squares(profile.left_types()) / (lx * ly * ly);
  m.right_term = sum_class_degree_squares(profile.right_types()) / (ly * lx * lx);

  const Rational r1(m1), r2(m2);
  const Rational gamma = r1 * r2 * m.alpha;
  const Rational theta_cap = Rational(1, 2) * r1 * r2 * ((r2 - 1) * m.left_term + (r1 - 1) * m.right_term);
  const Rational theta_small = (r1 + r2 - 2) * m.alpha;
  m.alpha_min = m.alpha_max = to_double(m.alpha);
  m.beta_max = to_double(std::max(m.left_term, m.right_term));
  m.gamma = to_double(gamma);
  m.theta_cap = to_double(theta_cap);
  m.theta_small = to_double(theta_small);
  m.tau = m.alpha_max;
  return m;
}

MomentEstimates exact_pair_moments(const JointPmf& joint, const TypicalityParams& params, std::int64_t n,
                                   std::uint64_t m1, std::uint64_t m2) {
  return exact_pair_moments(PairProfile(joint, params, n), m1, m2);
}

namespace {

void check_moments(double gamma, double theta_cap, double theta_small) {
  if (!(gamma >= 0.0) || !(theta_cap >= 0.0) || !(theta_small >= 0.0)) {
    throw InputError("Suen bound needs nonnegative gamma, Theta, theta");
  }
}

double exp_of_min(std::initializer_list<std::optional<double>> terms) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t) best = std::min(best, *t);
  return std::exp(-best);
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

double suen_tail_bound(double gamma, double theta_cap, double theta_small, double a) {
  check_moments(gamma, theta_cap, theta_small);
  if (!(a >= 0.0 && a <= 1.0)) {
    throw InputError("Suen tail bound needs 0 <= a <= 1");
  }
  if (gamma == 0.0) return 1.0;
  const double b = 1.0 - a;
  const auto first = ratio(b * b * gamma * gamma, 8.0 * theta_cap + 2.0 * gamma);
  const auto second = ratio(b * gamma, 6.0 * theta_small);
  return exp_of_min({first, second});
}

double suen_zero_bound(double gamma, double theta_cap, double theta_small) {
  check_moments(gamma, theta_cap, theta_small);
  if (gamma == 0.0) return 1.0;
  return exp_of_min({ratio(gamma * gamma, 8.0 * theta_cap), gamma / 2.0, ratio(gamma, 6.0 * theta_small)});
}

double phi_root(double x) {
  const double e_inv = std::exp(-1.0);
  if (!(x >= 0.0) || x > e_inv + 1e-15) {
    throw InputError("phi_root needs 0 <= x <= 1/e");
  }
  if (x == 0.0) return 1.0;
  // At x = 1/e the two roots merge at e; the residual there is quadratic in
  // the error, so bisection cannot resolve the root itself.
  if (x >= e_inv - 1e-15) return std::exp(1.0);
  auto f = [x](double p) { return p - std::exp(x * p); };
  double lo = 1.0, hi = std::exp(1.0);
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  double p = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double d = 1.0 - x * std::exp(x * p);
    if (std::abs(d) < 1e-6) break;
    const double next = p - f(p) / d;
    if (!(next >= lo && next <= hi)) break;
    p = next;
  }
  return p;
}

double LllBounds::best() const {
  double b = 0.0;
  if (symmetric) b = std::max(b, *symmetric);
  if (phi) b = std::max(b, *phi);
  return b;
}

LllBounds lll_lower_bounds(const MomentEstimates& m) {
  LllBounds out;
  // x = 2^{-n R} for the larger rate, applied to every event.
  const std::uint64_t big = std::max(m.m1, m.m2);
  const std::uint64_t small = std::min(m.m1, m.m2);
  const std::uint64_t deps = m.m1 + m.m2 - 2;
  const BigInt num = boost::multiprecision::pow(BigInt(big - 1), static_cast<unsigned>(deps));
  const BigInt den = boost::multiprecision::pow(BigInt(big), static_cast<unsigned>(deps + 1));
  if (m.alpha <= Rational(num, den)) {
    const double x = 1.0 / static_cast<double>(big);
    const double events = static_cast<double>(m.m1) * static_cast<double>(m.m2);
    out.symmetric = big == 1 ? 0.0 : std::exp(events * std::log1p(-x));
    out.symmetric_simplified = std::exp(-(static_cast<double>(small) + 1.0));
  }
  const double arg = m.theta_small + m.tau;
  if (arg <= std::exp(-1.0)) {
    out.phi = std::exp(-m.gamma * phi_root(arg));
  }
  return out;
}

ExponentEntry exponent_of(double bound, std::int64_t n) {
  ExponentEntry e;
  e.bound = bound;
  if (bound > 0.0 && bound < 1.0) {
    e.exponent = std::log2(std::log2(1.0 / bound)) / static_cast<double>(n);
  }
  return e;
}

BoundReport exponent_report(const MomentEstimates& m, std::int64_t n, double r1, double r2, double i_xy,
                            const std::vector<double>& a_grid) {
  BoundReport r;
  r.a_grid = a_grid;
  for (double a : a_grid) r.suen_tail.push_back(suen_tail_bound(m.gamma, m.theta_cap, m.theta_small, a));
  r.suen_zero = suen_zero_bound(m.gamma, m.theta_cap, m.theta_small);
  r.lll = lll_lower_bounds(m);
  r.suen_zero_exponent = exponent_of(r.suen_zero, n);
  if (r.lll.symmetric) r.lll_symmetric_exponent = exponent_of(*r.lll.symmetric, n);
  if (r.lll.phi) r.lll_phi_exponent = exponent_of(*r.lll.phi, n);
  r.r1 = std::max(r1, r2);
  r.r2 = std::min(r1, r2);
  r.i_xy = i_xy;
  r.target = std::min(r.r2, r.r1 + r.r2 - i_xy);
  r.r1_at_least_i = r.r1 >= i_xy;
  r.tight = r.r1 <= i_xy;
  constexpr double kSlack = 1e-12;
  if (r.lll.symmetric && *r.lll.symmetric > r.suen_zero + kSlack) r.consistent = false;
  if (r.lll.phi && *r.lll.phi > r.suen_zero + kSlack) r.consistent = false;
  return r;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0 || successes > trials) {
    throw InputError("Wilson interval needs 0 <= successes <= trials, trials > 0");
  }
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = (p + z2 / (2.0 * nt)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<std::uint64_t> simulate_counts(const SimulationConfig& config) {
  if (config.trials < 1) throw InputError("simulation needs trials >= 1");
  if (config.m1 < 1 || config.m2 < 1) throw InputError("codebook sizes must be >= 1");
  const JointPmf& joint = config.joint;
  const TypicalSetSampler xs(joint.row_marginal(), config.params.eps1, config.n);
  const TypicalSetSampler ys(joint.col_marginal(), config.params.eps2, config.n);
  const CountBall pair_ball(joint.probs(), config.params.lambda, config.n);
  const std::size_t cols = joint.cols();
  const std::size_t cells = joint.rows() * cols;
  const auto len = static_cast<std::size_t>(config.n);

  std::vector<std::uint64_t> counts(config.trials, 0);
  const std::size_t workers = config.workers == 0 ? default_workers() : config.workers;
  parallel_for(config.trials, workers, [&](std::size_t t) {
    Rng rx(stream_seed(config.seed, t, 0));
    Rng ry(stream_seed(config.seed, t, 1));
    std::vector<Sequence> cx, cy;
    cx.reserve(config.m1);
    cy.reserve(config.m2);
    for (std::uint64_t i = 0; i < config.m1; ++i) cx.push_back(xs.draw(rx));
    for (std::uint64_t j = 0; j < config.m2; ++j) cy.push_back(ys.draw(ry));
    std::vector<std::int64_t> joint_counts(cells);
    std::uint64_t u = 0;
    for (const auto& x : cx)
      for (const auto& y : cy) {
        std::fill(joint_counts.begin(), joint_counts.end(), 0);
        for (std::size_t k = 0; k < len; ++k) ++joint_counts[x[k] * cols + y[k]];
        if (pair_ball.contains(joint_counts)) ++u;
      }
    counts[t] = u;
  });
  return counts;
}

MonteCarloReport simulate(const SimulationConfig& config) {
  const auto counts = simulate_counts(config);
  const PairProfile profile(config.joint, config.params, config.n);
  const MomentEstimates m = exact_pair_moments(profile, config.m1, config.m2);

  MonteCarloReport r;
  r.trials = config.trials;
  r.gamma = m.gamma;
  r.a_grid = config.a_grid;
  unsigned __int128 sum = 0, sum_sq = 0;
  for (auto u : counts) {
    if (u == 0) ++r.zero_count;
    sum += u;
    sum_sq += static_cast<unsigned __int128>(u) * u;
  }
  const auto nt = static_cast<long double>(r.trials);
  r.p_zero = static_cast<double>(r.zero_count) / static_cast<double>(r.trials);
  r.p_zero_interval = wilson_interval(r.zero_count, r.trials);
  r.mean_u = static_cast<double>(static_cast<long double>(sum) / nt);
  if (r.trials > 1) {
    // N * sum_sq - sum^2 is exact in 128 bits for any simulable size.
    const unsigned __int128 spread = static_cast<unsigned __int128>(r.trials) * sum_sq - sum * sum;
    r.variance_u = static_cast<double>(static_cast<long double>(spread) / (nt * (nt - 1)));
  }
  r.std_error = std::sqrt(r.variance_u / static_cast<double>(r.trials));
  for (double a : config.a_grid) {
    const double threshold = a * m.gamma;
    std::uint64_t hits = 0;
    for (auto u : counts)
      if (static_cast<double>(u) <= threshold) ++hits;
    r.tail_frequency.push_back(static_cast<double>(hits) / static_cast<double>(r.trials));
  }
  return r;
}

BracketVerdict bracket(const MonteCarloReport& mc, const BoundReport& bounds) {
  BracketVerdict v;
  v.lower = bounds.lll.best();
  v.upper = bounds.suen_zero;
  v.inside = v.lower <= v.upper && mc.p_zero_interval.hi >= v.lower && mc.p_zero_interval.lo <= v.upper;
  return v;
}

}  // namespace typgraph
