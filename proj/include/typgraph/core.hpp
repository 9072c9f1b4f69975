#pragma once

// Exact-rational probability objects and the entropic functionals built on
// them. Probabilities never leave exact arithmetic; only entropies are
// floating point (bits).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace typgraph {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad distributions, mismatched shapes, out-of-range
/// parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An explicit construction would exceed the configured resource cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A checked internal invariant failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);
double to_double(const Rational& r);

/// log2 of a nonnegative big integer; -inf for zero.
double log2_big(const BigInt& v);

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  /// Labels "0", "1", ..., size-1.
  static Alphabet indexed(std::size_t size);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> labels_;
};

class Pmf {
 public:
  Pmf() = default;
  Pmf(Alphabet alphabet, std::vector<Rational> probs);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](std::size_t i) const { return probs_[i]; }
  std::span<const Rational> probs() const { return probs_; }

  bool operator==(const Pmf&) const = default;

 private:
  Alphabet alphabet_;
  std::vector<Rational> probs_;
};

/// Row-major joint law on rows x cols (rows play the role of X).
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(Alphabet rows, Alphabet cols, std::vector<Rational> probs);

  const Alphabet& row_alphabet() const { return rows_; }
  const Alphabet& col_alphabet() const { return cols_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_.size(); }
  const Rational& at(std::size_t r, std::size_t c) const { return probs_[r * cols() + c]; }
  std::span<const Rational> probs() const { return probs_; }

  Pmf row_marginal() const;
  Pmf col_marginal() const;
  JointPmf transposed() const;
  JointPmf product_of_marginals() const;

  /// The same probabilities viewed as a single pmf on the pair alphabet.
  Pmf as_pair_pmf() const;

  bool operator==(const JointPmf&) const = default;

 private:
  Alphabet rows_;
  Alphabet cols_;
  std::vector<Rational> probs_;
};

/// One output law per conditioning symbol. Rows conditioned on a
/// zero-probability symbol are absent (undefined), never fabricated.
class CondPmf {
 public:
  CondPmf() = default;
  CondPmf(Alphabet given, Alphabet out, std::vector<std::optional<std::vector<Rational>>> rows);

  const Alphabet& given_alphabet() const { return given_; }
  const Alphabet& out_alphabet() const { return out_; }
  bool defined(std::size_t a) const { return rows_.at(a).has_value(); }
  /// Zero for undefined rows.
  Rational at(std::size_t a, std::size_t b) const;
  const std::optional<std::vector<Rational>>& row(std::size_t a) const { return rows_.at(a); }

 private:
  Alphabet given_;
  Alphabet out_;
  std::vector<std::optional<std::vector<Rational>>> rows_;
};

enum class Given { X, Y };

double entropy(const Pmf& p);
/// Entropy in bits of a law given as nonnegative weights summing to total.
double entropy_of_counts(std::span<const std::int64_t> counts);
double entropy_of_weights(std::span<const double> probs);

double joint_entropy(const JointPmf& p);
/// H(Y|X) for Given::X, H(X|Y) for Given::Y.
double conditional_entropy(const JointPmf& p, Given given);
double mutual_information(const JointPmf& p);

/// L1 distance sum |p - q|, in [0, 2]. Throws InputError on shape mismatch.
Rational total_variation(const Pmf& p, const Pmf& q);
Rational total_variation(const JointPmf& p, const JointPmf& q);

/// -eps log2(eps / alphabet_size); requires 0 < eps <= 1/2.
double entropy_continuity_bound(double eps, std::size_t alphabet_size);

template <class Dist>
struct ApproxResult {
  Dist approx;
  /// n * approx, cell by cell.
  std::vector<std::int64_t> counts;
  Rational max_error;
  bool support_shrunk = false;
  std::int64_t n = 0;
};

/// Largest-remainder rounding of cells onto multiples of 1/n. Ties for the
/// leftover units go to the earliest cell.
std::vector<std::int64_t> largest_remainder_counts(std::span<const Rational> probs, std::int64_t n);

ApproxResult<Pmf> rational_approximate(const Pmf& p, std::int64_t n);
ApproxResult<JointPmf> rational_approximate(const JointPmf& p, std::int64_t n);

CondPmf conditionalize(const JointPmf& p, Given given);

}  // namespace typgraph
