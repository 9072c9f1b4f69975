#include "typgraph/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace typgraph {

namespace {

BigInt floor_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

BigInt ceil_rational(const Rational& r) { return -floor_rational(-r); }

std::int64_t clamp_count(const BigInt& v, std::int64_t lo, std::int64_t hi) {
  if (v < lo) return lo;
  if (v > hi) return hi;
  return v.convert_to<std::int64_t>();
}

void check_delta(const Rational& delta) {
  if (delta < 0) {
    throw InputError("typicality constant must be nonnegative, got " + format_rational(delta));
  }
}

}  // namespace

Sequence::Sequence(std::size_t alphabet_size_in, std::vector<Symbol> symbols_in)
    : alphabet_size(alphabet_size_in), symbols(std::move(symbols_in)) {
  if (alphabet_size == 0) {
    throw InputError("sequence over an empty alphabet");
  }
  for (auto s : symbols) {
    if (s >= alphabet_size) {
      throw InputError("sequence symbol " + std::to_string(s) + " outside alphabet of size " +
                       std::to_string(alphabet_size));
    }
  }
}

TypeVector::TypeVector(std::vector<std::int64_t> c) : counts(std::move(c)) {
  n = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

JointTypeVector::JointTypeVector(std::size_t r, std::size_t c, std::vector<std::int64_t> cnt)
    : rows(r), cols(c), counts(std::move(cnt)) {
  if (counts.size() != rows * cols) {
    throw InputError("joint type has wrong number of cells");
  }
  n = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

TypeVector JointTypeVector::row_marginal() const {
  std::vector<std::int64_t> m(rows, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m[r] += at(r, c);
  return TypeVector(std::move(m));
}

TypeVector JointTypeVector::col_marginal() const {
  std::vector<std::int64_t> m(cols, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m[c] += at(r, c);
  return TypeVector(std::move(m));
}

std::vector<std::string> schedule_names() { return {"cube-root", "quarter-root"}; }

Rational delta_schedule(const std::string& name, std::int64_t n) {
  if (n < 1) {
    throw InputError("schedule needs n >= 1");
  }
  const double nd = static_cast<double>(n);
  double value = 0.0;
  if (name == "cube-root") {
    value = 1.0 / std::cbrt(nd);
  } else if (name == "quarter-root") {
    value = 1.0 / std::sqrt(std::sqrt(nd));
  } else {
    throw InputError("unknown schedule '" + name + "'");
  }
  const std::int64_t den = n * 1000;
  const auto num = static_cast<std::int64_t>(std::llround(value * static_cast<double>(den)));
  return Rational(num, den);
}

TypicalityParams TypicalityParams::from_schedule(const std::string& name, std::int64_t n) {
  const Rational d = delta_schedule(name, n);
  return {d, d, d, name};
}

TypicalityParams TypicalityParams::fixed(Rational eps1, Rational eps2, Rational lambda) {
  check_delta(eps1);
  check_delta(eps2);
  check_delta(lambda);
  return {std::move(eps1), std::move(eps2), std::move(lambda), {}};
}

BigCount::BigCount(BigInt v) : value(std::move(v)), log2(log2_big(value)) {}

CountBall::CountBall(std::span<const Rational> probs, const Rational& delta, std::int64_t n)
    : lo_(probs.size()), hi_(probs.size()), n_(n) {
  check_delta(delta);
  if (n < 1) {
    throw InputError("typicality ball needs n >= 1");
  }
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (probs[c] == 0) {
      lo_[c] = hi_[c] = 0;
      continue;
    }
    lo_[c] = clamp_count(ceil_rational((probs[c] - delta) * n), 0, n);
    hi_[c] = clamp_count(floor_rational((probs[c] + delta) * n), 0, n);
    // Both clamps can land on the same side when the interval misses [0, n].
    if (lo_[c] > hi_[c]) empty_ = true;
  }
  const auto lo_sum = std::accumulate(lo_.begin(), lo_.end(), std::int64_t{0});
  const auto hi_sum = std::accumulate(hi_.begin(), hi_.end(), std::int64_t{0});
  if (lo_sum > n || hi_sum < n) empty_ = true;
}

bool CountBall::contains(std::span<const std::int64_t> counts) const {
  if (counts.size() != lo_.size()) return false;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < lo_[c] || counts[c] > hi_[c]) return false;
  }
  return true;
}

TypeVector empirical_type(const Sequence& x) {
  std::vector<std::int64_t> counts(x.alphabet_size, 0);
  for (auto s : x.symbols) ++counts[s];
  return TypeVector(std::move(counts));
}

JointTypeVector empirical_joint_type(const Sequence& x, const Sequence& y) {
  if (x.size() != y.size()) {
    throw InputError("joint type of sequences with different lengths");
  }
  std::vector<std::int64_t> counts(x.alphabet_size * y.alphabet_size, 0);
  for (std::size_t t = 0; t < x.size(); ++t) ++counts[x[t] * y.alphabet_size + y[t]];
  return JointTypeVector(x.alphabet_size, y.alphabet_size, std::move(counts));
}

bool is_typical(const Sequence& x, const Pmf& p, const Rational& delta) {
  if (x.alphabet_size != p.size()) {
    throw InputError("is_typical: alphabet mismatch");
  }
  if (x.size() == 0) return false;
  const CountBall ball(p.probs(), delta, static_cast<std::int64_t>(x.size()));
  return ball.contains(empirical_type(x).counts);
}

bool is_cond_typical(const Sequence& y, const Sequence& x, const CondPmf& w, const Rational& delta) {
  if (x.size() != y.size()) {
    throw InputError("is_cond_typical: length mismatch");
  }
  if (x.alphabet_size != w.given_alphabet().size() || y.alphabet_size != w.out_alphabet().size()) {
    throw InputError("is_cond_typical: alphabet mismatch");
  }
  check_delta(delta);
  const auto joint = empirical_joint_type(x, y);
  const auto nx = joint.row_marginal();
  const Rational slack = delta * static_cast<std::int64_t>(x.size());
  for (std::size_t a = 0; a < joint.rows; ++a) {
    for (std::size_t b = 0; b < joint.cols; ++b) {
      const Rational wab = w.at(a, b);
      const std::int64_t nab = joint.at(a, b);
      if (wab == 0 && nab != 0) return false;
      if (abs(Rational(nab) - nx.counts[a] * wab) > slack) return false;
    }
  }
  return true;
}

bool is_jointly_typical(const Sequence& x, const Sequence& y, const JointPmf& p, const Rational& lambda) {
  if (x.size() != y.size()) {
    throw InputError("is_jointly_typical: length mismatch");
  }
  if (x.alphabet_size != p.rows() || y.alphabet_size != p.cols()) {
    throw InputError("is_jointly_typical: alphabet mismatch");
  }
  if (x.size() == 0) return false;
  const CountBall ball(p.probs(), lambda, static_cast<std::int64_t>(x.size()));
  return ball.contains(empirical_joint_type(x, y).counts);
}

BigInt multinomial(std::span<const std::int64_t> counts) {
  BigInt result = 1;
  std::int64_t running = 0;
  for (auto c : counts) {
    if (c < 0) {
      throw InputError("multinomial of a negative count");
    }
    for (std::int64_t i = 1; i <= c; ++i) {
      ++running;
      result *= running;
      result /= i;
    }
  }
  return result;
}

BigCount type_class_size(const TypeVector& t) { return BigCount(multinomial(t.counts)); }
BigCount type_class_size(const JointTypeVector& t) { return BigCount(multinomial(t.counts)); }

void for_each_composition(std::size_t parts, std::int64_t n, std::span<const std::int64_t> lo,
                          std::span<const std::int64_t> hi,
                          const std::function<bool(std::span<const std::int64_t>)>& visit) {
  if (parts == 0 || lo.size() != parts || hi.size() != parts) {
    throw InputError("for_each_composition: bad bounds");
  }
  // prefix_lo[i] / prefix_hi[i]: feasible range for the sum of parts [0, i).
  std::vector<std::int64_t> prefix_lo(parts + 1, 0), prefix_hi(parts + 1, 0);
  for (std::size_t i = 0; i < parts; ++i) {
    prefix_lo[i + 1] = prefix_lo[i] + std::max<std::int64_t>(lo[i], 0);
    prefix_hi[i + 1] = prefix_hi[i] + std::min<std::int64_t>(hi[i], n);
  }
  std::vector<std::int64_t> current(parts, 0);
  bool stop = false;
  std::function<void(std::size_t, std::int64_t)> fill = [&](std::size_t i, std::int64_t remaining) {
    if (stop) return;
    if (i == 0) {
      if (remaining < lo[0] || remaining > hi[0]) return;
      current[0] = remaining;
      if (!visit(current)) stop = true;
      return;
    }
    const std::int64_t from = std::max<std::int64_t>(lo[i], 0);
    const std::int64_t to = std::min(hi[i], remaining);
    for (std::int64_t v = from; v <= to && !stop; ++v) {
      const std::int64_t rest = remaining - v;
      if (rest < prefix_lo[i] || rest > prefix_hi[i]) continue;
      current[i] = v;
      fill(i - 1, rest);
    }
  };
  if (n >= prefix_lo[parts] && n <= prefix_hi[parts]) {
    fill(parts - 1, n);
  }
}

std::vector<TypeVector> enumerate_types(std::size_t alphabet_size, std::int64_t n,
                                        std::optional<TypeBall> ball) {
  if (n < 1) {
    throw InputError("enumerate_types: n must be >= 1");
  }
  std::vector<std::int64_t> lo(alphabet_size, 0), hi(alphabet_size, n);
  if (ball) {
    if (ball->center->size() != alphabet_size) {
      throw InputError("enumerate_types: ball alphabet mismatch");
    }
    const CountBall cb(ball->center->probs(), ball->delta, n);
    if (cb.empty()) return {};
    for (std::size_t c = 0; c < alphabet_size; ++c) {
      lo[c] = cb.lo(c);
      hi[c] = cb.hi(c);
    }
  }
  std::vector<TypeVector> out;
  for_each_composition(alphabet_size, n, lo, hi, [&](std::span<const std::int64_t> counts) {
    out.emplace_back(std::vector<std::int64_t>(counts.begin(), counts.end()));
    return true;
  });
  return out;
}

BigCount typical_set_size(const Pmf& p, const Rational& delta, std::int64_t n) {
  BigInt total = 0;
  for (const auto& t : enumerate_types(p.size(), n, TypeBall{&p, delta})) {
    total += multinomial(t.counts);
  }
  return BigCount(std::move(total));
}

BigCount cond_typical_set_size(const CondPmf& w, const Sequence& x, const Rational& delta) {
  if (x.alphabet_size != w.given_alphabet().size()) {
    throw InputError("cond_typical_set_size: alphabet mismatch");
  }
  check_delta(delta);
  const auto nx = empirical_type(x);
  const std::size_t out = w.out_alphabet().size();
  const Rational slack = delta * static_cast<std::int64_t>(x.size());
  BigInt product = 1;
  for (std::size_t a = 0; a < nx.size(); ++a) {
    const std::int64_t block = nx.counts[a];
    if (block == 0) continue;
    std::vector<std::int64_t> lo(out), hi(out);
    for (std::size_t b = 0; b < out; ++b) {
      const Rational centre = block * w.at(a, b);
      if (w.at(a, b) == 0) {
        lo[b] = hi[b] = 0;
        continue;
      }
      lo[b] = clamp_count(ceil_rational(centre - slack), 0, block);
      hi[b] = clamp_count(floor_rational(centre + slack), 0, block);
    }
    BigInt block_total = 0;
    for_each_composition(out, block, lo, hi, [&](std::span<const std::int64_t> counts) {
      block_total += multinomial(counts);
      return true;
    });
    product *= block_total;
    if (product == 0) break;
  }
  return BigCount(std::move(product));
}

void for_each_in_conditional_class(const Sequence& given, const JointTypeVector& joint,
                                   std::size_t out_alphabet_size,
                                   const std::function<bool(const Sequence&)>& visit) {
  if (joint.rows != given.alphabet_size || joint.cols != out_alphabet_size) {
    throw InputError("conditional class: joint type shape mismatch");
  }
  if (joint.row_marginal() != empirical_type(given)) return;

  const std::size_t rows = joint.rows;
  std::vector<std::vector<std::size_t>> positions(rows);
  for (std::size_t t = 0; t < given.size(); ++t) positions[given[t]].push_back(t);
  std::vector<std::vector<Symbol>> values(rows);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < out_alphabet_size; ++b) {
      values[a].insert(values[a].end(), static_cast<std::size_t>(joint.at(a, b)), static_cast<Symbol>(b));
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t a = 0; a < rows; ++a)
    if (!positions[a].empty()) active.push_back(a);

  Sequence y(out_alphabet_size, std::vector<Symbol>(given.size(), 0));
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (stop) return;
    if (k == active.size()) {
      if (!visit(y)) stop = true;
      return;
    }
    auto& vals = values[active[k]];
    const auto& pos = positions[active[k]];
    do {
      for (std::size_t i = 0; i < pos.size(); ++i) y.symbols[pos[i]] = vals[i];
      rec(k + 1);
    } while (!stop && std::next_permutation(vals.begin(), vals.end()));
    // An early stop leaves vals mid-cycle; nothing reads it afterwards.
  };
  rec(0);
}

void for_each_in_type_class(const TypeVector& t, const std::function<bool(const Sequence&)>& visit) {
  std::vector<Symbol> symbols;
  symbols.reserve(static_cast<std::size_t>(t.n));
  for (std::size_t a = 0; a < t.size(); ++a) {
    symbols.insert(symbols.end(), static_cast<std::size_t>(t.counts[a]), static_cast<Symbol>(a));
  }
  Sequence seq(t.size(), symbols);
  do {
    seq.symbols = symbols;
    if (!visit(seq)) return;
  } while (std::next_permutation(symbols.begin(), symbols.end()));
}

TypicalSetSampler::TypicalSetSampler(const Pmf& p, const Rational& delta, std::int64_t n)
    : alphabet_size_(p.size()), n_(n), types_(enumerate_types(p.size(), n, TypeBall{&p, delta})) {
  total_ = 0;
  cumulative_.reserve(types_.size());
  for (const auto& t : types_) {
    total_ += multinomial(t.counts);
    cumulative_.push_back(total_);
  }
  if (total_ == 0) {
    throw InputError("typical set is empty");
  }
}

Sequence TypicalSetSampler::draw(Rng& rng) const {
  const BigInt r = uniform_below(rng, total_);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  const auto& type = types_[static_cast<std::size_t>(it - cumulative_.begin())];
  std::vector<Symbol> symbols;
  symbols.reserve(static_cast<std::size_t>(n_));
  for (std::size_t a = 0; a < type.size(); ++a) {
    symbols.insert(symbols.end(), static_cast<std::size_t>(type.counts[a]), static_cast<Symbol>(a));
  }
  for (std::size_t i = symbols.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(i)));
    std::swap(symbols[i - 1], symbols[j]);
  }
  return Sequence(alphabet_size_, std::move(symbols));
}

Sequence sample_uniform_typical(const Pmf& p, const Rational& delta, std::int64_t n, Rng& rng) {
  return TypicalSetSampler(p, delta, n).draw(rng);
}

}  // namespace typgraph
