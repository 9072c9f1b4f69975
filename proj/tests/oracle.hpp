#pragma once

// Brute-force reference implementations for the tests. Everything here is
// written directly from the definitions and shares no code with the library
// beyond its value types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "typgraph/core.hpp"
#include "typgraph/typicality.hpp"

namespace oracle {

using typgraph::JointPmf;
using typgraph::Pmf;
using typgraph::Rational;
using typgraph::Sequence;

inline JointPmf joint(const std::vector<std::vector<Rational>>& rows) {
  std::vector<Rational> cells;
  for (const auto& r : rows) cells.insert(cells.end(), r.begin(), r.end());
  return JointPmf(typgraph::Alphabet::indexed(rows.size()), typgraph::Alphabet::indexed(rows.front().size()),
                  cells);
}

inline Pmf pmf(const std::vector<Rational>& p) { return Pmf(typgraph::Alphabet::indexed(p.size()), p); }

/// 0.4 0.1 / 0.1 0.4
inline JointPmf binary_example() {
  return joint({{Rational(2, 5), Rational(1, 10)}, {Rational(1, 10), Rational(2, 5)}});
}

inline void for_each_sequence(std::size_t k, std::size_t n, const std::function<void(const Sequence&)>& f) {
  std::vector<std::uint32_t> s(n, 0);
  while (true) {
    f(Sequence(k, s));
    std::size_t t = n;
    while (t > 0) {
      --t;
      if (++s[t] < k) break;
      s[t] = 0;
      if (t == 0) return;
    }
    if (n == 0) return;
  }
}

inline std::vector<Sequence> all_sequences(std::size_t k, std::size_t n) {
  std::vector<Sequence> out;
  for_each_sequence(k, n, [&](const Sequence& s) { out.push_back(s); });
  return out;
}

inline std::vector<std::int64_t> counts(const Sequence& x) {
  std::vector<std::int64_t> c(x.alphabet_size, 0);
  for (auto v : x.symbols) ++c[v];
  return c;
}

inline bool typical(const Sequence& x, std::span<const Rational> p, const Rational& delta) {
  const auto c = counts(x);
  const auto n = static_cast<std::int64_t>(x.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] == 0 && c[a] > 0) return false;
    const Rational d = Rational(c[a], n) - p[a];
    if ((d < 0 ? -d : d) > delta) return false;
  }
  return true;
}

inline Sequence pair_sequence(const Sequence& x, const Sequence& y) {
  std::vector<std::uint32_t> s;
  for (std::size_t t = 0; t < x.size(); ++t) s.push_back(x[t] * static_cast<std::uint32_t>(y.alphabet_size) + y[t]);
  return Sequence(x.alphabet_size * y.alphabet_size, s);
}

inline bool jointly_typical(const Sequence& x, const Sequence& y, const JointPmf& p, const Rational& lambda) {
  return typical(pair_sequence(x, y), p.probs(), lambda);
}

inline long double h(const std::vector<long double>& p) {
  long double s = 0;
  for (auto v : p)
    if (v > 0) s -= v * std::log2(v);
  return s;
}

inline long double mi(const JointPmf& p) {
  std::vector<long double> px(p.rows(), 0), py(p.cols(), 0);
  long double s = 0;
  for (std::size_t a = 0; a < p.rows(); ++a)
    for (std::size_t b = 0; b < p.cols(); ++b) {
      const long double v = typgraph::to_double(p.at(a, b));
      px[a] += v;
      py[b] += v;
    }
  for (std::size_t a = 0; a < p.rows(); ++a)
    for (std::size_t b = 0; b < p.cols(); ++b) {
      const long double v = typgraph::to_double(p.at(a, b));
      if (v > 0) s += v * std::log2(v / (px[a] * py[b]));
    }
  return s;
}

/// Random law with denominator `den` over `size` cells; `zeros` allows empty cells.
inline std::vector<Rational> random_law(std::mt19937_64& rng, std::size_t size, std::int64_t den,
                                        bool zeros = true) {
  std::vector<std::int64_t> c(size, zeros ? 0 : 1);
  std::int64_t left = den - (zeros ? 0 : static_cast<std::int64_t>(size));
  for (std::int64_t u = 0; u < left; ++u) ++c[rng() % size];
  std::vector<Rational> p;
  for (auto v : c) p.emplace_back(v, den);
  return p;
}

inline JointPmf random_joint(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::int64_t den,
                             bool zeros = true) {
  auto cells = random_law(rng, rows * cols, den, zeros);
  return JointPmf(typgraph::Alphabet::indexed(rows), typgraph::Alphabet::indexed(cols), cells);
}

}  // namespace oracle
