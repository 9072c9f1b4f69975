#include "typgraph/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "typgraph/parallel.hpp"

namespace typgraph {

std::vector<LabeledEdge> labeled_edges(const BipartiteGraph& g) {
  std::vector<LabeledEdge> out;
  out.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    const Sequence x = g.left_vertex(i);
    for (auto j : g.neighbours(i)) out.push_back({x, g.right_vertex(j)});
  }
  return out;
}

EdgeDistribution::EdgeDistribution(std::vector<LabeledEdge> edges, std::size_t x_size, std::size_t y_size)
    : edges_(std::move(edges)), x_size_(x_size), y_size_(y_size), n_(0) {
  if (edges_.empty()) {
    throw InputError("edge distribution needs at least one edge");
  }
  n_ = static_cast<std::int64_t>(edges_.front().x.size());
  if (n_ < 1) throw InputError("edges must have positive length");
  for (const auto& e : edges_) {
    if (static_cast<std::int64_t>(e.x.size()) != n_ || static_cast<std::int64_t>(e.y.size()) != n_) {
      throw InputError("all edges must have the same length");
    }
    for (auto s : e.x.symbols)
      if (s >= x_size_) throw InputError("edge x-symbol outside the alphabet");
    for (auto s : e.y.symbols)
      if (s >= y_size_) throw InputError("edge y-symbol outside the alphabet");
  }
  letters_.assign(static_cast<std::size_t>(n_), std::vector<std::int64_t>(x_size_ * y_size_, 0));
  for (const auto& e : edges_)
    for (std::size_t t = 0; t < letters_.size(); ++t) ++letters_[t][e.x[t] * y_size_ + e.y[t]];
}

JointPmf EdgeDistribution::per_letter(std::size_t t) const {
  const auto& c = letter_counts(t);
  const auto total = static_cast<std::int64_t>(edges_.size());
  std::vector<Rational> probs;
  probs.reserve(c.size());
  for (auto v : c) probs.emplace_back(v, total);
  return JointPmf(Alphabet::indexed(x_size_), Alphabet::indexed(y_size_), std::move(probs));
}

EdgeDistribution fano_distribution(std::vector<LabeledEdge> edges, std::size_t x_size, std::size_t y_size) {
  return EdgeDistribution(std::move(edges), x_size, y_size);
}

EdgeDistribution fano_distribution(const BipartiteGraph& g) {
  return EdgeDistribution(labeled_edges(g), g.left_codec().alphabet_size(), g.right_codec().alphabet_size());
}

double mi_of_counts(std::span<const std::int64_t> cells, std::size_t rows, std::size_t cols) {
  std::vector<std::int64_t> r(rows, 0), c(cols, 0);
  std::int64_t total = 0;
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b) {
      r[a] += cells[a * cols + b];
      c[b] += cells[a * cols + b];
      total += cells[a * cols + b];
    }
  bool product = true;
  for (std::size_t a = 0; a < rows && product; ++a)
    for (std::size_t b = 0; b < cols && product; ++b)
      product = static_cast<__int128>(cells[a * cols + b]) * total == static_cast<__int128>(r[a]) * c[b];
  if (product) return 0.0;
  return std::max(0.0, entropy_of_counts(r) + entropy_of_counts(c) - entropy_of_counts(cells));
}

DominantTypeResult dominant_joint_type(const EdgeDistribution& dist) {
  const std::size_t nx = dist.x_size(), ny = dist.y_size();
  std::map<std::vector<std::int64_t>, std::uint64_t> tally;
  std::vector<std::int64_t> counts(nx * ny);
  for (const auto& e : dist.edges()) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t t = 0; t < e.x.size(); ++t) ++counts[e.x[t] * ny + e.y[t]];
    ++tally[counts];
  }
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it)
    if (it->second > best->second) best = it;
  DominantTypeResult r;
  r.joint_type = JointTypeVector(nx, ny, best->first);
  r.count = best->second;
  r.edge_fraction = Rational(static_cast<std::int64_t>(r.count), static_cast<std::int64_t>(dist.size()));
  r.types_present = tally.size();
  const BigInt types_bound = boost::multiprecision::pow(BigInt(dist.n() + 1), static_cast<unsigned>(nx * ny));
  r.pigeonhole_ok = r.edge_fraction * Rational(types_bound) >= 1;
  r.present_ok = r.edge_fraction * static_cast<std::int64_t>(r.types_present) >= 1;
  return r;
}

EdgeDistribution restrict_to_type(const EdgeDistribution& dist, const JointTypeVector& t) {
  std::vector<LabeledEdge> kept;
  for (const auto& e : dist.edges())
    if (empirical_joint_type(e.x, e.y).counts == t.counts) kept.push_back(e);
  return EdgeDistribution(std::move(kept), dist.x_size(), dist.y_size());
}

double block_mi_lemma_bound(std::int64_t n, double delta_n, std::size_t x_size, std::size_t y_size) {
  return 2.0 * static_cast<double>(n) * delta_n +
         static_cast<double>(x_size * y_size) * std::log2(static_cast<double>(n + 1));
}

double block_mi(const EdgeDistribution& dist) {
  // Uniform law on the edges: I = H(X') + H(Y') - log2 |E|.
  std::map<std::vector<Symbol>, std::int64_t> left, right;
  for (const auto& e : dist.edges()) {
    ++left[e.x.symbols];
    ++right[e.y.symbols];
  }
  auto h = [](const std::map<std::vector<Symbol>, std::int64_t>& m) {
    std::vector<std::int64_t> c;
    c.reserve(m.size());
    for (const auto& [k, v] : m) c.push_back(v);
    return entropy_of_counts(c);
  };
  const double size = static_cast<double>(dist.size());
  // A product edge set has |E| = |left support| |right support| and uniform
  // multiplicities; report that case as exactly 0.
  bool uniform_product = static_cast<double>(left.size()) * static_cast<double>(right.size()) == size;
  if (uniform_product) {
    std::map<std::pair<std::vector<Symbol>, std::vector<Symbol>>, int> seen;
    for (const auto& e : dist.edges())
      if (++seen[{e.x.symbols, e.y.symbols}] > 1) uniform_product = false;
  }
  if (uniform_product) return 0.0;
  return std::max(0.0, h(left) + h(right) - std::log2(size));
}

BlockMiResult block_mi_bound(const EdgeDistribution& dist, const BigInt& left_count, const BigInt& right_count,
                             double delta_n, std::uint64_t exact_cap) {
  BlockMiResult r;
  const std::int64_t n = dist.n();
  r.bound = block_mi_lemma_bound(n, delta_n, dist.x_size(), dist.y_size());
  const double log_required = log2_big(left_count) + log2_big(right_count) - 2.0 * static_cast<double>(n) * delta_n -
                              static_cast<double>(dist.x_size() * dist.y_size()) *
                                  std::log2(static_cast<double>(n + 1));
  r.size_condition = std::log2(static_cast<double>(dist.size())) >= log_required - 1e-9;
  if (dist.size() <= exact_cap) {
    r.exact = block_mi(dist);
    if (r.size_condition) r.exact_within_bound = *r.exact <= r.bound + 1e-9;
  }
  return r;
}

double default_wring_delta(std::int64_t n, const std::string& schedule) {
  if (n < 2) throw InputError("default wringing threshold needs n >= 2");
  return std::sqrt(to_double(delta_schedule(schedule, n)) * std::log2(static_cast<double>(n)));
}

namespace {

std::vector<double> letter_mis(const EdgeDistribution& dist, const std::vector<std::size_t>& alive) {
  const std::size_t nx = dist.x_size(), ny = dist.y_size();
  const auto n = static_cast<std::size_t>(dist.n());
  std::vector<double> mi(n, 0.0);
  parallel_for(n, default_workers(), [&](std::size_t t) {
    std::vector<std::int64_t> cells(nx * ny, 0);
    for (auto idx : alive) {
      const auto& e = dist.edges()[idx];
      ++cells[e.x[t] * ny + e.y[t]];
    }
    mi[t] = mi_of_counts(cells, nx, ny);
  });
  return mi;
}

}  // namespace

WringResult wring(const EdgeDistribution& dist, double delta, std::optional<double> sigma) {
  if (!(delta > 0.0)) throw InputError("wringing threshold must be positive");
  WringResult r;
  r.delta = delta;
  r.sigma = sigma ? *sigma : block_mi(dist);
  const std::size_t nx = dist.x_size(), ny = dist.y_size();
  const auto n = static_cast<std::size_t>(dist.n());
  const std::size_t hard_cap = n * nx * ny;
  const auto total = static_cast<std::int64_t>(dist.size());

  r.surviving.resize(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) r.surviving[i] = i;
  r.per_letter_mi = letter_mis(dist, r.surviving);
  while (true) {
    const auto worst = std::max_element(r.per_letter_mi.begin(), r.per_letter_mi.end());
    if (*worst <= delta) {
      r.converged = true;
      break;
    }
    if (r.steps.size() >= hard_cap) break;
    const auto t = static_cast<std::size_t>(worst - r.per_letter_mi.begin());
    std::vector<std::int64_t> cells(nx * ny, 0);
    for (auto idx : r.surviving) {
      const auto& e = dist.edges()[idx];
      ++cells[e.x[t] * ny + e.y[t]];
    }
    const auto top = static_cast<std::size_t>(std::max_element(cells.begin(), cells.end()) - cells.begin());
    WringStep step;
    step.position = t;
    step.x_value = static_cast<Symbol>(top / ny);
    step.y_value = static_cast<Symbol>(top % ny);
    step.max_mi_before = *worst;
    std::vector<std::size_t> kept;
    for (auto idx : r.surviving) {
      const auto& e = dist.edges()[idx];
      if (e.x[t] == step.x_value && e.y[t] == step.y_value) kept.push_back(idx);
    }
    if (kept.empty() || kept.size() >= r.surviving.size()) {
      throw InvariantViolation("wringing step failed to shrink the surviving edge set");
    }
    r.surviving = std::move(kept);
    step.surviving_fraction = Rational(static_cast<std::int64_t>(r.surviving.size()), total);
    r.steps.push_back(step);
    r.per_letter_mi = letter_mis(dist, r.surviving);
  }
  r.surviving_fraction = Rational(static_cast<std::int64_t>(r.surviving.size()), total);
  const double k = static_cast<double>(r.k());
  r.exceeded_lemma_k = r.sigma > 0.0 ? k >= 2.0 * r.sigma / delta : r.k() > 0;
  if (delta < r.sigma && !r.exceeded_lemma_k) {
    const double base = delta / (static_cast<double>(nx * ny) * (2.0 * r.sigma - delta));
    r.lemma_fraction_bound = std::pow(base, k);
    r.lemma_bound_ok = to_double(r.surviving_fraction) >= *r.lemma_fraction_bound * (1.0 - 1e-12);
  }
  return r;
}

EdgeDistribution surviving_distribution(const EdgeDistribution& dist, const WringResult& w) {
  std::vector<LabeledEdge> kept;
  kept.reserve(w.surviving.size());
  for (auto idx : w.surviving) kept.push_back(dist.edges().at(idx));
  return EdgeDistribution(std::move(kept), dist.x_size(), dist.y_size());
}

PinskerReport pinsker_check(const EdgeDistribution& dist, double delta) {
  if (!(delta >= 0.0)) throw InputError("Pinsker threshold needs delta >= 0");
  PinskerReport r;
  r.threshold = 2.0 * std::sqrt(delta);
  r.all_within_threshold = true;
  r.all_within_mi_form = true;
  const std::size_t nx = dist.x_size(), ny = dist.y_size();
  for (std::size_t t = 0; t < static_cast<std::size_t>(dist.n()); ++t) {
    const JointPmf p = dist.per_letter(t);
    const double tv = to_double(total_variation(p, p.product_of_marginals()));
    const double mi = mi_of_counts(dist.letter_counts(t), nx, ny);
    r.tv.push_back(tv);
    r.mi.push_back(mi);
    if (tv > r.threshold + 1e-9) r.all_within_threshold = false;
    if (tv > 2.0 * std::sqrt(mi) + 1e-9) r.all_within_mi_form = false;
  }
  return r;
}

double strong_converse_bound(double per_letter_mi_sum, double lambda, std::size_t alphabet_size, std::int64_t n) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw InputError("strong converse bound needs 0 <= lambda < 1");
  }
  if (n < 1) throw InputError("strong converse bound needs n >= 1");
  return per_letter_mi_sum +
         3.0 / (1.0 - lambda) * static_cast<double>(alphabet_size) * std::sqrt(static_cast<double>(n));
}

}  // namespace typgraph
