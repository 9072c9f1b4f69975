#include "typgraph/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace typgraph {

namespace {

void check_law(std::span<const Rational> probs, const char* what) {
  if (probs.empty()) {
    throw InputError(std::string(what) + ": empty distribution");
  }
  Rational total = 0;
  for (const auto& p : probs) {
    if (p < 0 || p > 1) {
      throw InputError(std::string(what) + ": probability " + format_rational(p) +
                       " outside [0,1]");
    }
    total += p;
  }
  if (total != 1) {
    throw InputError(std::string(what) + ": probabilities sum to " + format_rational(total) +
                     ", not 1");
  }
}

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    v.erase(0, v.find_first_not_of(" \t"));
    v.erase(v.find_last_not_of(" \t") + 1);
  };
  trim(s);
  if (s.empty()) {
    throw InputError("empty rational literal");
  }
  auto digits = [](const std::string& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  // cpp_int reads a leading 0 as an octal prefix.
  auto decimal = [](const std::string& v) {
    const auto first = v.find_first_not_of('0');
    return BigInt(first == std::string::npos ? std::string("0") : v.substr(first));
  };
  bool negative = false;
  if (s.front() == '-') {
    negative = true;
    s.erase(0, 1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    trim(num);
    trim(den);
    if (!digits(num) || !digits(den)) {
      throw InputError("malformed rational '" + std::string(text) + "'");
    }
    const BigInt d = decimal(den);
    if (d == 0) {
      throw InputError("zero denominator in '" + std::string(text) + "'");
    }
    value = Rational(decimal(num), d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    // Terminating decimals are exact rationals.
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits(whole) || (!frac.empty() && !digits(frac))) {
      throw InputError("malformed decimal '" + std::string(text) + "'");
    }
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    value = Rational(decimal(whole + frac), scale);
  } else {
    if (!digits(s)) {
      throw InputError("malformed rational '" + std::string(text) + "'");
    }
    value = Rational(decimal(s));
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

double log2_big(const BigInt& v) {
  if (v <= 0) {
    return -std::numeric_limits<double>::infinity();
  }
  const auto bits = boost::multiprecision::msb(v);
  if (bits < 1000) {
    return std::log2(v.convert_to<double>());
  }
  const auto shift = bits - 60;
  const BigInt top = v >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw InputError("alphabet must be nonempty");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw InputError("duplicate alphabet label '" + l + "'");
    }
  }
}

Alphabet Alphabet::indexed(std::size_t size) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    labels.push_back(std::to_string(i));
  }
  return Alphabet(std::move(labels));
}

std::optional<std::size_t> Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

Pmf::Pmf(Alphabet alphabet, std::vector<Rational> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (probs_.size() != alphabet_.size()) {
    throw InputError("pmf has " + std::to_string(probs_.size()) + " entries for an alphabet of " +
                     std::to_string(alphabet_.size()));
  }
  check_law(probs_, "pmf");
}

JointPmf::JointPmf(Alphabet rows, Alphabet cols, std::vector<Rational> probs)
    : rows_(std::move(rows)), cols_(std::move(cols)), probs_(std::move(probs)) {
  if (probs_.size() != rows_.size() * cols_.size()) {
    throw InputError("joint pmf has " + std::to_string(probs_.size()) + " cells, expected " +
                     std::to_string(rows_.size() * cols_.size()));
  }
  check_law(probs_, "joint pmf");
}

Pmf JointPmf::row_marginal() const {
  std::vector<Rational> m(rows(), Rational(0));
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m[r] += at(r, c);
  return Pmf(rows_, std::move(m));
}

Pmf JointPmf::col_marginal() const {
  std::vector<Rational> m(cols(), Rational(0));
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m[c] += at(r, c);
  return Pmf(cols_, std::move(m));
}

JointPmf JointPmf::transposed() const {
  std::vector<Rational> t(probs_.size());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) t[c * rows() + r] = at(r, c);
  return JointPmf(cols_, rows_, std::move(t));
}

JointPmf JointPmf::product_of_marginals() const {
  const Pmf px = row_marginal();
  const Pmf py = col_marginal();
  std::vector<Rational> prod(probs_.size());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) prod[r * cols() + c] = px[r] * py[c];
  return JointPmf(rows_, cols_, std::move(prod));
}

Pmf JointPmf::as_pair_pmf() const {
  std::vector<std::string> labels;
  labels.reserve(probs_.size());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c)
      labels.push_back("(" + rows_.label(r) + "," + cols_.label(c) + ")");
  return Pmf(Alphabet(std::move(labels)), probs_);
}

CondPmf::CondPmf(Alphabet given, Alphabet out, std::vector<std::optional<std::vector<Rational>>> rows)
    : given_(std::move(given)), out_(std::move(out)), rows_(std::move(rows)) {
  if (rows_.size() != given_.size()) {
    throw InputError("conditional pmf needs one row per conditioning symbol");
  }
  for (const auto& row : rows_) {
    if (!row) continue;
    if (row->size() != out_.size()) {
      throw InputError("conditional pmf row has wrong width");
    }
    check_law(*row, "conditional pmf row");
  }
}

Rational CondPmf::at(std::size_t a, std::size_t b) const {
  const auto& row = rows_.at(a);
  return row ? (*row)[b] : Rational(0);
}

double entropy(const Pmf& p) {
  double h = 0.0;
  for (const auto& v : p.probs()) h += plogp(to_double(v));
  return std::max(h, 0.0);
}

double entropy_of_counts(std::span<const std::int64_t> counts) {
  const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) h += plogp(static_cast<double>(c) / static_cast<double>(total));
  return std::max(h, 0.0);
}

double entropy_of_weights(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h += plogp(p);
  return std::max(h, 0.0);
}

double joint_entropy(const JointPmf& p) { return entropy(p.as_pair_pmf()); }

double conditional_entropy(const JointPmf& p, Given given) {
  const double hm = given == Given::X ? entropy(p.row_marginal()) : entropy(p.col_marginal());
  return std::max(joint_entropy(p) - hm, 0.0);
}

double mutual_information(const JointPmf& p) {
  // Exact zero for product laws; the float identity would leave rounding dust.
  if (p == p.product_of_marginals()) return 0.0;
  const double i = entropy(p.row_marginal()) + entropy(p.col_marginal()) - joint_entropy(p);
  return std::max(i, 0.0);
}

Rational total_variation(const Pmf& p, const Pmf& q) {
  if (!(p.alphabet() == q.alphabet())) {
    throw InputError("total_variation: alphabets differ");
  }
  Rational tv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += abs(p[i] - q[i]);
  return tv;
}

Rational total_variation(const JointPmf& p, const JointPmf& q) {
  if (!(p.row_alphabet() == q.row_alphabet()) || !(p.col_alphabet() == q.col_alphabet())) {
    throw InputError("total_variation: joint shapes differ");
  }
  Rational tv = 0;
  for (std::size_t i = 0; i < p.probs().size(); ++i) tv += abs(p.probs()[i] - q.probs()[i]);
  return tv;
}

double entropy_continuity_bound(double eps, std::size_t alphabet_size) {
  if (!(eps > 0.0) || eps > 0.5) {
    throw InputError("entropy_continuity_bound: eps must lie in (0, 1/2]");
  }
  if (alphabet_size == 0) {
    throw InputError("entropy_continuity_bound: empty alphabet");
  }
  return -eps * std::log2(eps / static_cast<double>(alphabet_size));
}

std::vector<std::int64_t> largest_remainder_counts(std::span<const Rational> probs, std::int64_t n) {
  if (n < 1) {
    throw InputError("rational_approximate: n must be >= 1");
  }
  std::vector<std::int64_t> counts(probs.size());
  std::vector<Rational> remainder(probs.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const Rational scaled = probs[i] * n;
    const BigInt fl = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
    counts[i] = fl.convert_to<std::int64_t>();
    remainder[i] = scaled - Rational(fl);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  const std::int64_t leftover = n - assigned;
  for (std::int64_t k = 0; k < leftover; ++k) {
    ++counts[order[static_cast<std::size_t>(k)]];
  }
  return counts;
}

namespace {

struct RoundedCells {
  std::vector<std::int64_t> counts;
  std::vector<Rational> approx;
  Rational max_error;
  bool shrunk = false;
};

RoundedCells round_cells(std::span<const Rational> probs, std::int64_t n) {
  RoundedCells out;
  out.counts = largest_remainder_counts(probs, n);
  out.approx.reserve(probs.size());
  out.max_error = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    Rational a(out.counts[i], n);
    const Rational err = abs(probs[i] - a);
    if (err > out.max_error) out.max_error = err;
    if (probs[i] > 0 && out.counts[i] == 0) out.shrunk = true;
    out.approx.push_back(std::move(a));
  }
  return out;
}

}  // namespace

ApproxResult<Pmf> rational_approximate(const Pmf& p, std::int64_t n) {
  auto cells = round_cells(p.probs(), n);
  return {Pmf(p.alphabet(), std::move(cells.approx)), std::move(cells.counts), cells.max_error,
          cells.shrunk, n};
}

ApproxResult<JointPmf> rational_approximate(const JointPmf& p, std::int64_t n) {
  auto cells = round_cells(p.probs(), n);
  return {JointPmf(p.row_alphabet(), p.col_alphabet(), std::move(cells.approx)),
          std::move(cells.counts), cells.max_error, cells.shrunk, n};
}

CondPmf conditionalize(const JointPmf& p, Given given) {
  const JointPmf oriented = given == Given::X ? p : p.transposed();
  const Pmf marginal = oriented.row_marginal();
  std::vector<std::optional<std::vector<Rational>>> rows(oriented.rows());
  for (std::size_t a = 0; a < oriented.rows(); ++a) {
    if (marginal[a] == 0) continue;
    std::vector<Rational> row(oriented.cols());
    for (std::size_t b = 0; b < oriented.cols(); ++b) row[b] = oriented.at(a, b) / marginal[a];
    rows[a] = std::move(row);
  }
  return CondPmf(oriented.row_alphabet(), oriented.col_alphabet(), std::move(rows));
}

}  // namespace typgraph
