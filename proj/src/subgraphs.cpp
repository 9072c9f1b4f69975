#include "typgraph/subgraphs.hpp"

#include <algorithm>
#include <cmath>

namespace typgraph {

namespace {

constexpr double kLogTol = 1e-9;

std::vector<std::int64_t> sum_rows(std::span<const std::int64_t> cells, std::size_t rows, std::size_t cols) {
  std::vector<std::int64_t> out(rows, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r] += cells[r * cols + c];
  return out;
}

void check_roster_cap(const BigInt& size, std::uint64_t cap, const char* what) {
  if (size > BigInt(cap)) {
    throw CapExceeded(std::string(what) + " roster of " + size.str() + " sequences exceeds cap " + std::to_string(cap));
  }
}

std::vector<std::uint64_t> sorted_codes(const std::vector<Sequence>& seqs, const SequenceCodec& codec) {
  std::vector<std::uint64_t> codes;
  codes.reserve(seqs.size());
  for (const auto& s : seqs) codes.push_back(codec.encode(s));
  std::sort(codes.begin(), codes.end());
  return codes;
}

std::uint32_t rank_of(std::span<const std::uint64_t> roster, std::uint64_t code) {
  const auto it = std::lower_bound(roster.begin(), roster.end(), code);
  if (it == roster.end() || *it != code) {
    throw InvariantViolation("subgraph neighbour outside its roster");
  }
  return static_cast<std::uint32_t>(it - roster.begin());
}

void note_inequality(ContainmentReport& r, bool holds, const std::string& text) {
  if (!holds) {
    r.approximation_ok = false;
    r.failed_inequalities.push_back(text);
  }
}

std::string fraction_text(std::int64_t num, std::int64_t n) {
  return std::to_string(num) + "/" + std::to_string(n);
}

ContainmentReport containment(const JointPmf& joint, const TypicalityParams& params, std::int64_t n,
                              std::int64_t u_size, const TypeVector& left, const TypeVector& right,
                              std::span<const std::int64_t> joint_counts) {
  ContainmentReport r;
  const auto nx = static_cast<std::int64_t>(joint.rows());
  const auto ny = static_cast<std::int64_t>(joint.cols());
  note_inequality(r, Rational(u_size, n) < params.lambda, fraction_text(u_size, n) + " < lambda");
  note_inequality(r, Rational(ny * u_size, n) < params.eps1, fraction_text(ny * u_size, n) + " < eps1");
  note_inequality(r, Rational(nx * u_size, n) < params.eps2, fraction_text(nx * u_size, n) + " < eps2");
  const Pmf px = joint.row_marginal();
  const Pmf py = joint.col_marginal();
  r.left_contained = CountBall(px.probs(), params.eps1, n).contains(left.counts);
  r.right_contained = CountBall(py.probs(), params.eps2, n).contains(right.counts);
  r.edges_contained = CountBall(joint.probs(), params.lambda, n).contains(joint_counts);
  return r;
}

double rate(std::uint64_t v, std::int64_t n) { return std::log2(static_cast<double>(v)) / static_cast<double>(n); }

double entropy_diff(std::span<const std::int64_t> fine, std::span<const std::int64_t> coarse) {
  return entropy_of_counts(fine) - entropy_of_counts(coarse);
}

SideCheck check_side(std::size_t roster, std::int64_t n, double entropy, double size_tol, double degree_entropy,
                     double delta3, const std::function<std::uint64_t(std::size_t)>& degree) {
  SideCheck s;
  s.log2_size_rate = rate(static_cast<std::uint64_t>(roster), n);
  s.entropy = entropy;
  s.size_tolerance = size_tol;
  s.size_ok = std::abs(s.log2_size_rate - entropy) <= size_tol + kLogTol;
  s.degree_entropy = degree_entropy;
  s.min_degree_rate = std::numeric_limits<double>::infinity();
  s.max_degree_rate = -std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < roster; ++i) {
    const std::uint64_t d = degree(i);
    if (d == 0) {
      ++s.degree_violations;
      continue;
    }
    const double l = std::log2(static_cast<double>(d));
    s.min_degree_rate = std::min(s.min_degree_rate, l / nn);
    s.max_degree_rate = std::max(s.max_degree_rate, l / nn);
    if (l < nn * (degree_entropy - delta3) - kLogTol || l > nn * degree_entropy + kLogTol) ++s.degree_violations;
  }
  return s;
}

SubgraphReport check_graph(const BipartiteGraph& g, std::int64_t n, double delta3, double hx, double hy,
                           double tol_x, double tol_y, double h_left_degree, double h_right_degree) {
  SubgraphReport r;
  r.delta3 = delta3;
  r.left = check_side(g.left_count(), n, hx, tol_x, h_left_degree, delta3,
                      [&](std::size_t i) { return g.left_degree(i); });
  r.right = check_side(g.right_count(), n, hy, tol_y, h_right_degree, delta3,
                       [&](std::size_t j) { return g.right_degree(j); });
  return r;
}

}  // namespace

ExactTypeSubgraph build_exact_type_subgraph(const JointPmf& joint, std::int64_t n, const TypicalityParams& params,
                                            std::uint64_t cap) {
  if (n < 1) throw InputError("subgraph needs n >= 1");
  ExactTypeSubgraph a{rational_approximate(joint, n), {}, {}, {}, {}, {}};
  const std::size_t rows = joint.rows();
  const std::size_t cols = joint.cols();
  a.joint_type = JointTypeVector(rows, cols, a.tilde.counts);
  a.left_type = a.joint_type.row_marginal();
  a.right_type = a.joint_type.col_marginal();
  check_roster_cap(multinomial(a.left_type.counts), cap, "left");
  check_roster_cap(multinomial(a.right_type.counts), cap, "right");

  const auto len = static_cast<std::size_t>(n);
  const SequenceCodec left_codec(rows, len);
  const SequenceCodec right_codec(cols, len);
  std::vector<Sequence> left_seqs, right_seqs;
  for_each_in_type_class(a.left_type, [&](const Sequence& s) {
    left_seqs.push_back(s);
    return true;
  });
  for_each_in_type_class(a.right_type, [&](const Sequence& s) {
    right_seqs.push_back(s);
    return true;
  });
  if (left_seqs.empty() || right_seqs.empty()) {
    throw InputError("exact-type subgraph has an empty type class");
  }
  auto left_codes = sorted_codes(left_seqs, left_codec);
  auto right_codes = sorted_codes(right_seqs, right_codec);

  std::vector<std::vector<std::uint32_t>> adjacency(left_codes.size());
  for (std::size_t i = 0; i < left_codes.size(); ++i) {
    const Sequence x = left_codec.decode(left_codes[i]);
    for_each_in_conditional_class(x, a.joint_type, cols, [&](const Sequence& y) {
      adjacency[i].push_back(rank_of(right_codes, right_codec.encode(y)));
      return true;
    });
  }
  a.graph = BipartiteGraph(left_codec, right_codec, std::move(left_codes), std::move(right_codes),
                           std::move(adjacency));
  a.containment = containment(joint, params, n, 1, a.left_type, a.right_type, a.joint_type.counts);
  return a;
}

SubgraphReport verify_prop1(const ExactTypeSubgraph& a) {
  const std::int64_t n = a.tilde.n;
  const auto nx = static_cast<double>(a.joint_type.rows);
  const auto ny = static_cast<double>(a.joint_type.cols);
  const double lg = std::log2(static_cast<double>(n + 1)) / static_cast<double>(n);
  const double hx = entropy_of_counts(a.left_type.counts);
  const double hy = entropy_of_counts(a.right_type.counts);
  const double hxy = entropy_of_counts(a.joint_type.counts);
  return check_graph(a.graph, n, nx * ny * lg, hx, hy, nx * lg, ny * lg, hxy - hx, hxy - hy);
}

CondPmf copy_x_aux(const JointPmf& joint) {
  const std::size_t nx = joint.rows();
  const std::size_t ny = joint.cols();
  std::vector<std::optional<std::vector<Rational>>> rows(nx * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      std::vector<Rational> row(nx, Rational(0));
      row[x] = 1;
      rows[x * ny + y] = std::move(row);
    }
  return CondPmf(Alphabet::indexed(nx * ny), joint.row_alphabet(), std::move(rows));
}

CondPmf constant_aux(const JointPmf& joint) {
  std::vector<std::optional<std::vector<Rational>>> rows(joint.rows() * joint.cols(),
                                                         std::vector<Rational>{Rational(1)});
  return CondPmf(Alphabet::indexed(joint.rows() * joint.cols()), Alphabet(std::vector<std::string>{"0"}),
                 std::move(rows));
}

AuxSubgraph build_aux_subgraph(const JointPmf& joint, const CondPmf& aux, std::int64_t n,
                               const TypicalityParams& params, std::uint64_t cap) {
  if (n < 1) throw InputError("subgraph needs n >= 1");
  const std::size_t nx = joint.rows();
  const std::size_t ny = joint.cols();
  const std::size_t pairs = nx * ny;
  if (aux.given_alphabet().size() != pairs) {
    throw InputError("auxiliary channel needs one row per (x, y) pair: expected " + std::to_string(pairs) +
                     ", got " + std::to_string(aux.given_alphabet().size()));
  }
  const std::size_t nu = aux.out_alphabet().size();
  if (nu == 0) throw InputError("auxiliary alphabet is empty");

  std::vector<Rational> cells(nu * pairs, Rational(0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const Rational& p = joint.at(x, y);
      if (p == 0) continue;
      if (!aux.defined(x * ny + y)) {
        throw InputError("auxiliary channel row for pair (" + joint.row_alphabet().label(x) + ", " +
                         joint.col_alphabet().label(y) + ") is undefined but the pair has positive probability");
      }
      for (std::size_t u = 0; u < nu; ++u) cells[u * pairs + x * ny + y] = p * aux.at(x * ny + y, u);
    }
  std::vector<std::string> pair_labels;
  pair_labels.reserve(pairs);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      pair_labels.push_back("(" + joint.row_alphabet().label(x) + "," + joint.col_alphabet().label(y) + ")");
  const JointPmf puxy(aux.out_alphabet(), Alphabet(std::move(pair_labels)), std::move(cells));

  AuxSubgraph g;
  g.aux = aux;
  g.tilde_uxy = rational_approximate(puxy, n);
  g.x_size = nx;
  g.y_size = ny;
  const auto& c = g.tilde_uxy.counts;  // index u*|X||Y| + x*|Y| + y

  std::vector<std::int64_t> n_u = sum_rows(c, nu, pairs);
  std::vector<std::int64_t> n_ux(nu * nx, 0), n_uy(nu * ny, 0), n_x(nx, 0), n_y(ny, 0), n_xy(pairs, 0);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        const auto v = c[u * pairs + x * ny + y];
        n_ux[u * nx + x] += v;
        n_uy[u * ny + y] += v;
        n_x[x] += v;
        n_y[y] += v;
        n_xy[x * ny + y] += v;
      }

  std::vector<Symbol> u_symbols;
  for (std::size_t u = 0; u < nu; ++u)
    u_symbols.insert(u_symbols.end(), static_cast<std::size_t>(n_u[u]), static_cast<Symbol>(u));
  g.u_seq = Sequence(nu, std::move(u_symbols));

  const JointTypeVector ux_type(nu, nx, n_ux);
  const JointTypeVector uy_type(nu, ny, n_uy);
  BigInt left_size = 1, right_size = 1;
  for (std::size_t u = 0; u < nu; ++u) {
    left_size *= multinomial(std::span<const std::int64_t>(n_ux).subspan(u * nx, nx));
    right_size *= multinomial(std::span<const std::int64_t>(n_uy).subspan(u * ny, ny));
  }
  check_roster_cap(left_size, cap, "left");
  check_roster_cap(right_size, cap, "right");

  const auto len = static_cast<std::size_t>(n);
  const SequenceCodec left_codec(nx, len);
  const SequenceCodec right_codec(ny, len);
  std::vector<Sequence> left_seqs, right_seqs;
  for_each_in_conditional_class(g.u_seq, ux_type, nx, [&](const Sequence& s) {
    left_seqs.push_back(s);
    return true;
  });
  for_each_in_conditional_class(g.u_seq, uy_type, ny, [&](const Sequence& s) {
    right_seqs.push_back(s);
    return true;
  });
  if (left_seqs.empty() || right_seqs.empty()) {
    throw InputError("conditional type class given u-sequence is empty (" +
                     std::string(left_seqs.empty() ? "P~_{X|U}" : "P~_{Y|U}") + ")");
  }
  auto left_codes = sorted_codes(left_seqs, left_codec);
  auto right_codes = sorted_codes(right_seqs, right_codec);

  // Neighbours of x: the y completing the pair sequence (u_t, x_t) to the
  // exact counts N(u, x, y).
  const JointTypeVector uxy_type(nu * nx, ny, c);
  std::vector<std::vector<std::uint32_t>> adjacency(left_codes.size());
  std::vector<Symbol> pair_symbols(len);
  for (std::size_t i = 0; i < left_codes.size(); ++i) {
    const Sequence x = left_codec.decode(left_codes[i]);
    for (std::size_t t = 0; t < len; ++t) pair_symbols[t] = static_cast<Symbol>(g.u_seq[t] * nx + x[t]);
    const Sequence ux(nu * nx, pair_symbols);
    for_each_in_conditional_class(ux, uxy_type, ny, [&](const Sequence& y) {
      adjacency[i].push_back(rank_of(right_codes, right_codec.encode(y)));
      return true;
    });
  }
  g.graph = BipartiteGraph(left_codec, right_codec, std::move(left_codes), std::move(right_codes),
                           std::move(adjacency));
  g.containment = containment(joint, params, n, static_cast<std::int64_t>(nu), TypeVector(n_x), TypeVector(n_y),
                              n_xy);

  const double h_uxy = entropy_of_counts(c);
  g.targets.r_x = entropy_diff(n_ux, n_u);
  g.targets.r_y = entropy_diff(n_uy, n_u);
  g.targets.r_y_prime = h_uxy - entropy_of_counts(n_ux);
  g.targets.r_x_prime = h_uxy - entropy_of_counts(n_uy);
  return g;
}

SubgraphReport verify_prop2(const AuxSubgraph& g) {
  const std::int64_t n = g.tilde_uxy.n;
  const auto nx = static_cast<double>(g.x_size);
  const auto ny = static_cast<double>(g.y_size);
  const auto nu = static_cast<double>(g.tilde_uxy.approx.rows());
  const double lg = std::log2(static_cast<double>(n + 1)) / static_cast<double>(n);
  return check_graph(g.graph, n, nx * ny * nu * lg, g.targets.r_x, g.targets.r_y, nx * nu * lg, ny * nu * lg,
                     g.targets.r_y_prime, g.targets.r_x_prime);
}

double tilde_conditional_mi(const AuxSubgraph& g) {
  const std::size_t nu = g.tilde_uxy.approx.rows();
  const std::size_t nx = g.x_size;
  const std::size_t ny = g.y_size;
  const auto& c = g.tilde_uxy.counts;
  std::vector<std::int64_t> n_u = sum_rows(c, nu, nx * ny);
  std::vector<std::int64_t> n_ux(nu * nx, 0), n_uy(nu * ny, 0);
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        n_ux[u * nx + x] += c[u * nx * ny + x * ny + y];
        n_uy[u * ny + y] += c[u * nx * ny + x * ny + y];
      }
  // I(X;Y|U) = H(UX) + H(UY) - H(UXY) - H(U)
  const double v = entropy_of_counts(n_ux) + entropy_of_counts(n_uy) - entropy_of_counts(c) - entropy_of_counts(n_u);
  return std::max(0.0, v);
}

RateMeasurement measure_rates(const BipartiteGraph& g, std::int64_t n) {
  if (g.left_count() == 0 || g.right_count() == 0) {
    throw InputError("cannot measure rates of a subgraph with an empty roster");
  }
  RateMeasurement m;
  const double nn = static_cast<double>(n);
  auto degree_range = [&](std::size_t count, auto degree, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
      const auto d = degree(i);
      // An isolated vertex has rate -inf; report it as such.
      const double r = d == 0 ? -std::numeric_limits<double>::infinity() : std::log2(static_cast<double>(d)) / nn;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  };
  degree_range(g.left_count(), [&](std::size_t i) { return g.left_degree(i); }, m.left_min_degree_rate,
               m.left_max_degree_rate);
  degree_range(g.right_count(), [&](std::size_t j) { return g.right_degree(j); }, m.right_min_degree_rate,
               m.right_max_degree_rate);
  m.rates.r_x = rate(static_cast<std::uint64_t>(g.left_count()), n);
  m.rates.r_y = rate(static_cast<std::uint64_t>(g.right_count()), n);
  m.rates.r_y_prime = 0.5 * (m.left_min_degree_rate + m.left_max_degree_rate);
  m.rates.r_x_prime = 0.5 * (m.right_min_degree_rate + m.right_max_degree_rate);
  m.general_slack = std::max(0.5 * (m.left_max_degree_rate - m.left_min_degree_rate),
                             0.5 * (m.right_max_degree_rate - m.right_min_degree_rate));
  m.nearly_complete_slack =
      std::max({0.0, m.rates.r_y - m.left_min_degree_rate, m.rates.r_x - m.right_min_degree_rate});
  return m;
}

RateTuple max_deviation(const BipartiteGraph& g, std::int64_t n, const RateTuple& target) {
  const RateMeasurement m = measure_rates(g, n);
  RateTuple d;
  d.r_x = std::abs(m.rates.r_x - target.r_x);
  d.r_y = std::abs(m.rates.r_y - target.r_y);
  d.r_y_prime =
      std::max(std::abs(m.left_min_degree_rate - target.r_y_prime), std::abs(m.left_max_degree_rate - target.r_y_prime));
  d.r_x_prime = std::max(std::abs(m.right_min_degree_rate - target.r_x_prime),
                         std::abs(m.right_max_degree_rate - target.r_x_prime));
  return d;
}

JointPmf induced_joint(const MarkovDecomposition& d) {
  const std::size_t nu = d.weights.size();
  const std::size_t nx = d.left.out_alphabet().size();
  const std::size_t ny = d.right.out_alphabet().size();
  if (d.left.given_alphabet().size() != nu || d.right.given_alphabet().size() != nu) {
    throw InputError("decomposition factors must have one row per U symbol");
  }
  std::vector<Rational> cells(nx * ny, Rational(0));
  for (std::size_t u = 0; u < nu; ++u) {
    if (d.weights[u] == 0) continue;
    if (!d.left.defined(u) || !d.right.defined(u)) {
      throw InputError("decomposition factor undefined for U symbol " + d.weights.alphabet().label(u));
    }
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) cells[x * ny + y] += d.weights[u] * d.left.at(u, x) * d.right.at(u, y);
  }
  return JointPmf(d.left.out_alphabet(), d.right.out_alphabet(), std::move(cells));
}

namespace {

/// U ranges over the support of the given side; one factor is the identity.
MarkovDecomposition copy_decomposition(const JointPmf& joint, Given side) {
  const JointPmf oriented = side == Given::X ? joint : joint.transposed();
  const Pmf marginal = oriented.row_marginal();
  const CondPmf other = conditionalize(oriented, Given::X);
  std::vector<std::string> labels;
  std::vector<Rational> weights;
  std::vector<std::optional<std::vector<Rational>>> identity_rows, other_rows;
  for (std::size_t a = 0; a < oriented.rows(); ++a) {
    if (marginal[a] == 0) continue;
    labels.push_back(oriented.row_alphabet().label(a));
    weights.push_back(marginal[a]);
    std::vector<Rational> id(oriented.rows(), Rational(0));
    id[a] = 1;
    identity_rows.push_back(std::move(id));
    other_rows.push_back(*other.row(a));
  }
  const Alphabet u(labels);
  MarkovDecomposition d;
  d.label = side == Given::X ? "U=X" : "U=Y";
  d.weights = Pmf(u, std::move(weights));
  CondPmf identity(u, oriented.row_alphabet(), std::move(identity_rows));
  CondPmf rest(u, oriented.col_alphabet(), std::move(other_rows));
  if (side == Given::X) {
    d.left = std::move(identity);
    d.right = std::move(rest);
  } else {
    d.left = std::move(rest);
    d.right = std::move(identity);
  }
  verify_decomposition(d, joint);
  return d;
}

}  // namespace

std::vector<MarkovDecomposition> canonical_markov_decompositions(const JointPmf& joint) {
  return {copy_decomposition(joint, Given::X), copy_decomposition(joint, Given::Y)};
}

MarkovDecomposition product_decomposition(const JointPmf& joint) {
  MarkovDecomposition d;
  d.label = "U=const";
  const Alphabet u(std::vector<std::string>{"0"});
  d.weights = Pmf(u, {Rational(1)});
  const Pmf px = joint.row_marginal();
  const Pmf py = joint.col_marginal();
  d.left = CondPmf(u, joint.row_alphabet(), {std::vector<Rational>(px.probs().begin(), px.probs().end())});
  d.right = CondPmf(u, joint.col_alphabet(), {std::vector<Rational>(py.probs().begin(), py.probs().end())});
  verify_decomposition(d, joint);
  return d;
}

Rational verify_decomposition(MarkovDecomposition& d, const JointPmf& joint) {
  const JointPmf induced = induced_joint(d);
  if (induced.rows() != joint.rows() || induced.cols() != joint.cols()) {
    throw InputError("decomposition alphabets do not match the joint distribution");
  }
  Rational l1 = 0;
  for (std::size_t i = 0; i < joint.probs().size(); ++i) {
    const Rational diff = induced.probs()[i] - joint.probs()[i];
    l1 += diff < 0 ? Rational(-diff) : diff;
  }
  d.residual = l1;
  return l1;
}

std::pair<double, double> rate_point(const MarkovDecomposition& d, double tol) {
  if (to_double(d.residual) > tol) {
    throw InputError("decomposition residual " + format_rational(d.residual) + " exceeds tolerance");
  }
  double hx = 0.0, hy = 0.0;
  for (std::size_t u = 0; u < d.weights.size(); ++u) {
    if (d.weights[u] == 0) continue;
    const double w = to_double(d.weights[u]);
    hx += w * entropy(Pmf(d.left.out_alphabet(), *d.left.row(u)));
    hy += w * entropy(Pmf(d.right.out_alphabet(), *d.right.row(u)));
  }
  return {hx, hy};
}

CondPmf aux_from_decomposition(const MarkovDecomposition& d, const JointPmf& joint) {
  if (d.residual != 0) {
    throw InputError("auxiliary channel needs an exact decomposition (residual " + format_rational(d.residual) + ")");
  }
  const std::size_t nu = d.weights.size();
  const std::size_t nx = joint.rows();
  const std::size_t ny = joint.cols();
  std::vector<std::optional<std::vector<Rational>>> rows(nx * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const Rational& p = joint.at(x, y);
      if (p == 0) continue;
      std::vector<Rational> row(nu, Rational(0));
      for (std::size_t u = 0; u < nu; ++u) {
        if (d.weights[u] == 0) continue;
        row[u] = d.weights[u] * d.left.at(u, x) * d.right.at(u, y) / p;
      }
      rows[x * ny + y] = std::move(row);
    }
  return CondPmf(Alphabet::indexed(nx * ny), d.weights.alphabet(), std::move(rows));
}

}  // namespace typgraph
