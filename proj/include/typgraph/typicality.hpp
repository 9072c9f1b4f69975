#pragma once

// Sequences, empirical types, the typicality predicates, exact counting of
// type classes and typical sets, and uniform sampling from a typical set.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/rng.hpp"

namespace typgraph {

using Symbol = std::uint32_t;

struct Sequence {
  std::size_t alphabet_size = 0;
  std::vector<Symbol> symbols;

  Sequence() = default;
  Sequence(std::size_t alphabet_size, std::vector<Symbol> symbols);

  std::size_t size() const { return symbols.size(); }
  Symbol operator[](std::size_t t) const { return symbols[t]; }
  bool operator==(const Sequence&) const = default;
  auto operator<=>(const Sequence& other) const { return symbols <=> other.symbols; }
};

struct TypeVector {
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  TypeVector() = default;
  explicit TypeVector(std::vector<std::int64_t> counts);
  std::size_t size() const { return counts.size(); }
  bool operator==(const TypeVector&) const = default;
};

struct JointTypeVector {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> counts;  // row-major
  std::int64_t n = 0;

  JointTypeVector() = default;
  JointTypeVector(std::size_t rows, std::size_t cols, std::vector<std::int64_t> counts);
  std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
  TypeVector row_marginal() const;
  TypeVector col_marginal() const;
  bool operator==(const JointTypeVector&) const = default;
};

/// n -> delta_n for the named schedule. "cube-root" is n^(-1/3),
/// "quarter-root" is n^(-1/4); both are rationalized to denominator n*1000.
Rational delta_schedule(const std::string& name, std::int64_t n);
std::vector<std::string> schedule_names();

struct TypicalityParams {
  Rational eps1;
  Rational eps2;
  Rational lambda;
  std::string schedule;  // empty when the values were set explicitly

  static TypicalityParams from_schedule(const std::string& name, std::int64_t n);
  static TypicalityParams fixed(Rational eps1, Rational eps2, Rational lambda);
};

struct BigCount {
  BigInt value;
  double log2 = 0.0;

  BigCount() : log2(-std::numeric_limits<double>::infinity()) {}
  explicit BigCount(BigInt v);
  std::string str() const { return value.str(); }
  bool operator==(const BigCount& o) const { return value == o.value; }
};

/// Per-cell admissible count interval of a typicality ball:
/// |N_c/n - p_c| <= delta, with N_c forced to 0 where p_c = 0.
/// Membership is then a handful of integer comparisons.
class CountBall {
 public:
  CountBall(std::span<const Rational> probs, const Rational& delta, std::int64_t n);

  std::size_t cells() const { return lo_.size(); }
  std::int64_t n() const { return n_; }
  std::int64_t lo(std::size_t c) const { return lo_[c]; }
  std::int64_t hi(std::size_t c) const { return hi_[c]; }
  bool empty() const { return empty_; }
  bool contains(std::span<const std::int64_t> counts) const;

 private:
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> hi_;
  std::int64_t n_;
  bool empty_ = false;
};

TypeVector empirical_type(const Sequence& x);
JointTypeVector empirical_joint_type(const Sequence& x, const Sequence& y);

bool is_typical(const Sequence& x, const Pmf& p, const Rational& delta);
bool is_cond_typical(const Sequence& y, const Sequence& x, const CondPmf& w, const Rational& delta);
bool is_jointly_typical(const Sequence& x, const Sequence& y, const JointPmf& p, const Rational& lambda);

BigInt multinomial(std::span<const std::int64_t> counts);
BigCount type_class_size(const TypeVector& t);
BigCount type_class_size(const JointTypeVector& t);

/// Visits every composition of n into `parts` nonnegative parts within the
/// per-part bounds, in colexicographic order. Returning false stops.
void for_each_composition(std::size_t parts, std::int64_t n, std::span<const std::int64_t> lo,
                          std::span<const std::int64_t> hi,
                          const std::function<bool(std::span<const std::int64_t>)>& visit);

struct TypeBall {
  const Pmf* center;
  Rational delta;
};

std::vector<TypeVector> enumerate_types(std::size_t alphabet_size, std::int64_t n,
                                        std::optional<TypeBall> ball = std::nullopt);

BigCount typical_set_size(const Pmf& p, const Rational& delta, std::int64_t n);
BigCount cond_typical_set_size(const CondPmf& w, const Sequence& x, const Rational& delta);

/// Visits every y whose joint type with `given` equals `joint` (rows index
/// the given alphabet). Sequences sharing a position block arrive in
/// lexicographic order within that block. Returning false stops.
void for_each_in_conditional_class(const Sequence& given, const JointTypeVector& joint,
                                   std::size_t out_alphabet_size,
                                   const std::function<bool(const Sequence&)>& visit);

/// Visits the members of one type class in lexicographic order.
void for_each_in_type_class(const TypeVector& t, const std::function<bool(const Sequence&)>& visit);

/// Exactly uniform draws from a typical set: a type is chosen with
/// probability proportional to its class size, then a uniformly random
/// arrangement of that multiset.
class TypicalSetSampler {
 public:
  TypicalSetSampler(const Pmf& p, const Rational& delta, std::int64_t n);

  Sequence draw(Rng& rng) const;
  const BigInt& population() const { return total_; }
  std::int64_t n() const { return n_; }

 private:
  std::size_t alphabet_size_;
  std::int64_t n_;
  std::vector<TypeVector> types_;
  std::vector<BigInt> cumulative_;
  BigInt total_;
};

Sequence sample_uniform_typical(const Pmf& p, const Rational& delta, std::int64_t n, Rng& rng);

}  // namespace typgraph
