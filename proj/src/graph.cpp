#include "typgraph/graph.hpp"

#include <algorithm>
#include <cmath>

#include "typgraph/parallel.hpp"

namespace typgraph {

std::size_t default_workers() {
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

SequenceCodec::SequenceCodec(std::size_t alphabet_size, std::size_t length) : k_(alphabet_size), n_(length) {
  if (k_ == 0 || n_ == 0) {
    throw InputError("codec needs a nonempty alphabet and positive length");
  }
  long double span = 1;
  for (std::size_t i = 0; i < n_; ++i) span *= static_cast<long double>(k_);
  if (span > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    throw CapExceeded("sequence space too large to encode: " + std::to_string(k_) + "^" + std::to_string(n_));
  }
}

std::uint64_t SequenceCodec::encode(const Sequence& s) const {
  if (s.size() != n_ || s.alphabet_size != k_) {
    throw InputError("codec: sequence shape mismatch");
  }
  std::uint64_t code = 0;
  for (auto sym : s.symbols) code = code * k_ + sym;
  return code;
}

Sequence SequenceCodec::decode(std::uint64_t code) const {
  std::vector<Symbol> symbols(n_);
  for (std::size_t t = n_; t-- > 0;) {
    symbols[t] = static_cast<Symbol>(code % k_);
    code /= k_;
  }
  return Sequence(k_, std::move(symbols));
}

BipartiteGraph::BipartiteGraph(SequenceCodec left_codec, SequenceCodec right_codec,
                               std::vector<std::uint64_t> left_codes, std::vector<std::uint64_t> right_codes,
                               std::vector<std::vector<std::uint32_t>> adjacency)
    : left_codec_(left_codec),
      right_codec_(right_codec),
      left_codes_(std::move(left_codes)),
      right_codes_(std::move(right_codes)) {
  if (adjacency.size() != left_codes_.size()) {
    throw InputError("adjacency needs one list per left vertex");
  }
  if (!std::is_sorted(left_codes_.begin(), left_codes_.end()) ||
      !std::is_sorted(right_codes_.begin(), right_codes_.end())) {
    throw InputError("rosters must be sorted");
  }
  offsets_.assign(1, 0);
  offsets_.reserve(left_codes_.size() + 1);
  right_degrees_.assign(right_codes_.size(), 0);
  std::size_t total = 0;
  for (const auto& list : adjacency) total += list.size();
  targets_.reserve(total);
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw InputError("duplicate edge in adjacency");
    }
    for (auto j : list) {
      if (j >= right_codes_.size()) {
        throw InputError("edge endpoint " + std::to_string(j) + " outside right roster");
      }
      ++right_degrees_[j];
      targets_.push_back(j);
    }
    offsets_.push_back(targets_.size());
  }
}

std::span<const std::uint32_t> BipartiteGraph::neighbours(std::size_t left) const {
  const auto begin = offsets_.at(left);
  const auto end = offsets_.at(left + 1);
  return {targets_.data() + begin, static_cast<std::size_t>(end - begin)};
}

bool BipartiteGraph::adjacent(std::size_t i, std::size_t j) const {
  const auto nb = neighbours(i);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(j));
}

namespace {

std::optional<std::uint32_t> find_code(std::span<const std::uint64_t> roster, std::uint64_t code) {
  const auto it = std::lower_bound(roster.begin(), roster.end(), code);
  if (it == roster.end() || *it != code) return std::nullopt;
  return static_cast<std::uint32_t>(it - roster.begin());
}

}  // namespace

std::optional<std::uint32_t> BipartiteGraph::left_id(const Sequence& x) const {
  if (x.size() != left_codec_.length() || x.alphabet_size != left_codec_.alphabet_size()) return std::nullopt;
  return find_code(left_codes_, left_codec_.encode(x));
}

std::optional<std::uint32_t> BipartiteGraph::right_id(const Sequence& y) const {
  if (y.size() != right_codec_.length() || y.alphabet_size != right_codec_.alphabet_size()) return std::nullopt;
  return find_code(right_codes_, right_codec_.encode(y));
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(targets_.size());
  for (std::size_t i = 0; i < left_count(); ++i)
    for (auto j : neighbours(i)) out.push_back({static_cast<std::uint32_t>(i), j});
  return out;
}

BipartiteGraph BipartiteGraph::transposed() const {
  std::vector<std::vector<std::uint32_t>> adjacency(right_count());
  for (std::size_t i = 0; i < left_count(); ++i)
    for (auto j : neighbours(i)) adjacency[j].push_back(static_cast<std::uint32_t>(i));
  return BipartiteGraph(right_codec_, left_codec_, right_codes_, left_codes_, std::move(adjacency));
}

PairProfile::PairProfile(const JointPmf& joint, const TypicalityParams& params, std::int64_t n)
    : n_(n),
      left_ball_(joint.row_marginal().probs(), params.eps1, n),
      right_ball_(joint.col_marginal().probs(), params.eps2, n),
      joint_ball_(joint.probs(), params.lambda, n) {
  const std::size_t rows = joint.rows();
  const std::size_t cols = joint.cols();

  auto collect = [&](const CountBall& ball, std::size_t parts, std::vector<SideType>& out,
                     std::map<std::vector<std::int64_t>, std::size_t>& lookup, BigInt& count) {
    count = 0;
    if (ball.empty()) return;
    std::vector<std::int64_t> lo(parts), hi(parts);
    for (std::size_t c = 0; c < parts; ++c) {
      lo[c] = ball.lo(c);
      hi[c] = ball.hi(c);
    }
    for_each_composition(parts, n, lo, hi, [&](std::span<const std::int64_t> counts) {
      TypeVector t(std::vector<std::int64_t>(counts.begin(), counts.end()));
      BigInt size = multinomial(t.counts);
      count += size;
      lookup.emplace(t.counts, out.size());
      out.push_back({std::move(t), std::move(size), BigInt(0)});
      return true;
    });
  };
  collect(left_ball_, rows, left_, left_lookup_, left_count_);
  collect(right_ball_, cols, right_, right_lookup_, right_count_);
  by_left_.resize(left_.size());

  edge_count_ = 0;
  if (joint_ball_.empty() || left_.empty() || right_.empty()) return;
  std::vector<std::int64_t> lo(rows * cols), hi(rows * cols);
  for (std::size_t c = 0; c < rows * cols; ++c) {
    lo[c] = joint_ball_.lo(c);
    hi[c] = joint_ball_.hi(c);
  }
  std::vector<std::int64_t> row_sum(rows), col_sum(cols);
  for_each_composition(rows * cols, n, lo, hi, [&](std::span<const std::int64_t> cells) {
    std::fill(row_sum.begin(), row_sum.end(), 0);
    std::fill(col_sum.begin(), col_sum.end(), 0);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        row_sum[r] += cells[r * cols + c];
        col_sum[c] += cells[r * cols + c];
      }
    if (!left_ball_.contains(row_sum) || !right_ball_.contains(col_sum)) return true;
    const std::size_t li = left_lookup_.at(row_sum);
    const std::size_t ri = right_lookup_.at(col_sum);

    // Completions of a fixed x into this joint type: product over rows of
    // within-block arrangements. Symmetric for a fixed y.
    BigInt per_left = 1;
    for (std::size_t r = 0; r < rows; ++r) per_left *= multinomial(cells.subspan(r * cols, cols));
    BigInt per_right = 1;
    std::vector<std::int64_t> column(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t r = 0; r < rows; ++r) column[r] = cells[r * cols + c];
      per_right *= multinomial(column);
    }
    left_[li].degree += per_left;
    right_[ri].degree += per_right;
    edge_count_ += multinomial(cells);
    by_left_[li].emplace_back(rows, cols, std::vector<std::int64_t>(cells.begin(), cells.end()));
    return true;
  });
}

std::optional<std::size_t> PairProfile::left_index(const TypeVector& t) const {
  const auto it = left_lookup_.find(t.counts);
  if (it == left_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> PairProfile::right_index(const TypeVector& t) const {
  const auto it = right_lookup_.find(t.counts);
  if (it == right_lookup_.end()) return std::nullopt;
  return it->second;
}

TypicalityGraph::TypicalityGraph(GraphSpec spec, BipartiteGraph graph)
    : spec_(std::move(spec)), profile_(spec_.joint, spec_.params, spec_.n), graph_(std::move(graph)) {
  spec_.mode = GraphMode::Explicit;
  if (BigInt(graph_->left_count()) != profile_.left_count() ||
      BigInt(graph_->right_count()) != profile_.right_count()) {
    throw InputError("materialized rosters do not match the typical sets of the spec");
  }
}

TypicalityGraph::TypicalityGraph(GraphSpec spec)
    : spec_(std::move(spec)), profile_(spec_.joint, spec_.params, spec_.n) {
  spec_.mode = GraphMode::Implicit;
}

const BipartiteGraph& TypicalityGraph::explicit_graph() const {
  if (!graph_) {
    throw InputError("graph was built in implicit mode; no materialized adjacency");
  }
  return *graph_;
}

BigCount TypicalityGraph::left_count() const { return BigCount(profile_.left_count()); }
BigCount TypicalityGraph::right_count() const { return BigCount(profile_.right_count()); }

BigCount TypicalityGraph::edge_count() const {
  if (graph_) return BigCount(BigInt(graph_->edge_count()));
  return BigCount(profile_.edge_count());
}

BigCount TypicalityGraph::degree(Side side, std::size_t id) const {
  const auto& g = explicit_graph();
  const std::size_t count = side == Side::Left ? g.left_count() : g.right_count();
  if (id >= count) {
    throw InputError("unknown vertex id " + std::to_string(id));
  }
  return BigCount(BigInt(side == Side::Left ? g.left_degree(id) : g.right_degree(id)));
}

BigCount TypicalityGraph::degree(Side side, const Sequence& v) const {
  if (static_cast<std::int64_t>(v.size()) != spec_.n) {
    throw InputError("vertex has wrong length");
  }
  const TypeVector t = empirical_type(v);
  if (graph_) {
    const auto id = side == Side::Left ? graph_->left_id(v) : graph_->right_id(v);
    if (!id) throw InputError("sequence is not a vertex of the graph");
    return degree(side, *id);
  }
  const auto idx = side == Side::Left ? profile_.left_index(t) : profile_.right_index(t);
  if (!idx) throw InputError("sequence is not a vertex of the graph");
  const auto& types = side == Side::Left ? profile_.left_types() : profile_.right_types();
  return BigCount(types[*idx].degree);
}

bool TypicalityGraph::adjacent(const Sequence& x, const Sequence& y) const {
  if (static_cast<std::int64_t>(x.size()) != spec_.n || y.size() != x.size()) {
    throw InputError("adjacency query with wrong lengths");
  }
  return profile_.left_typical(empirical_type(x)) && profile_.right_typical(empirical_type(y)) &&
         profile_.pair_typical(empirical_joint_type(x, y));
}

std::vector<std::uint64_t> typical_roster(const Pmf& p, const Rational& delta, std::int64_t n,
                                          const SequenceCodec& codec) {
  std::vector<std::uint64_t> roster;
  for (const auto& t : enumerate_types(p.size(), n, TypeBall{&p, delta})) {
    for_each_in_type_class(t, [&](const Sequence& s) {
      roster.push_back(codec.encode(s));
      return true;
    });
  }
  std::sort(roster.begin(), roster.end());
  return roster;
}

namespace {

void check_cap(std::size_t alphabet, std::int64_t n, std::uint64_t cap, const char* side) {
  long double space = 1;
  for (std::int64_t i = 0; i < n; ++i) space *= static_cast<long double>(alphabet);
  if (space > static_cast<long double>(cap)) {
    throw CapExceeded(std::string(side) + " sequence space " + std::to_string(alphabet) + "^" + std::to_string(n) +
                      " exceeds the explicit cap " + std::to_string(cap) + "; use implicit mode (--mode implicit)");
  }
}

}  // namespace

TypicalityGraph build_graph(const GraphSpec& spec, std::size_t workers) {
  if (spec.n < 1) {
    throw InputError("graph needs n >= 1");
  }
  if (spec.mode == GraphMode::Implicit) {
    return TypicalityGraph(spec);
  }
  check_cap(spec.joint.rows(), spec.n, spec.cap, "left");
  check_cap(spec.joint.cols(), spec.n, spec.cap, "right");

  const auto n = static_cast<std::size_t>(spec.n);
  const SequenceCodec left_codec(spec.joint.rows(), n);
  const SequenceCodec right_codec(spec.joint.cols(), n);
  auto left = typical_roster(spec.joint.row_marginal(), spec.params.eps1, spec.n, left_codec);
  auto right = typical_roster(spec.joint.col_marginal(), spec.params.eps2, spec.n, right_codec);

  const PairProfile profile(spec.joint, spec.params, spec.n);
  std::vector<std::vector<std::uint32_t>> adjacency(left.size());
  parallel_for(left.size(), workers == 0 ? default_workers() : workers, [&](std::size_t i) {
    const Sequence x = left_codec.decode(left[i]);
    const auto li = profile.left_index(empirical_type(x));
    if (!li) return;
    auto& list = adjacency[i];
    for (const auto& joint_type : profile.joint_types_for_left(*li)) {
      for_each_in_conditional_class(x, joint_type, spec.joint.cols(), [&](const Sequence& y) {
        const auto id = find_code(right, right_codec.encode(y));
        if (!id) throw InvariantViolation("completion of a typical joint type left the right roster");
        list.push_back(*id);
        return true;
      });
    }
    std::sort(list.begin(), list.end());
  });
  return TypicalityGraph(spec, BipartiteGraph(left_codec, right_codec, std::move(left), std::move(right),
                                              std::move(adjacency)));
}

namespace {

struct DegreeAccumulator {
  BigInt vertices = 0;
  BigInt isolated = 0;
  BigInt weight = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double weighted_sum = 0.0;

  void add(const BigInt& degree, const BigInt& multiplicity) {
    vertices += multiplicity;
    if (degree == 0) {
      isolated += multiplicity;
      return;
    }
    const double l = log2_big(degree);
    min = std::min(min, l);
    max = std::max(max, l);
    weight += multiplicity;
    weighted_sum += l * multiplicity.convert_to<double>();
  }

  SideStats finish() const {
    SideStats s;
    s.vertices = BigCount(vertices);
    s.log2_size = vertices > 0 ? log2_big(vertices) : 0.0;
    s.isolated = isolated;
    if (weight > 0) {
      s.min_log2_degree = min;
      s.max_log2_degree = max;
      s.mean_log2_degree = std::clamp(weighted_sum / weight.convert_to<double>(), min, max);
    }
    return s;
  }
};

}  // namespace

VertexStats stats(const TypicalityGraph& g) {
  DegreeAccumulator left, right;
  if (g.materialized()) {
    const auto& bg = g.explicit_graph();
    for (std::size_t i = 0; i < bg.left_count(); ++i) left.add(BigInt(bg.left_degree(i)), 1);
    for (std::size_t j = 0; j < bg.right_count(); ++j) right.add(BigInt(bg.right_degree(j)), 1);
  } else {
    for (const auto& t : g.profile().left_types()) left.add(t.degree, t.class_size);
    for (const auto& t : g.profile().right_types()) right.add(t.degree, t.class_size);
  }
  return {left.finish(), right.finish(), g.edge_count()};
}

namespace {

Sequence representative(const TypeVector& t) {
  std::vector<Symbol> symbols;
  for (std::size_t a = 0; a < t.size(); ++a)
    symbols.insert(symbols.end(), static_cast<std::size_t>(t.counts[a]), static_cast<Symbol>(a));
  return Sequence(t.size(), std::move(symbols));
}

void check_side(const std::vector<PairProfile::SideType>& types, const CondPmf& w, const Rational& delta,
                std::int64_t n, const std::function<void(const std::function<void(std::size_t, const BigInt&)>&)>& each,
                BigInt& checked, BigInt& violations, double& worst) {
  // The conditional typical set size depends on the conditioning sequence
  // only through its type.
  std::vector<BigInt> bound(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    bound[i] = cond_typical_set_size(w, representative(types[i].type), delta).value;
  }
  each([&](std::size_t type_index, const BigInt& degree) {
    ++checked;
    if (degree > bound[type_index]) ++violations;
    if (degree > 0) {
      worst = std::min(worst, (log2_big(bound[type_index]) - log2_big(degree)) / static_cast<double>(n));
    }
  });
}

}  // namespace

DegreeBoundReport check_degree_bound(const TypicalityGraph& g, const JointPmf& joint) {
  DegreeBoundReport report;
  const auto& profile = g.profile();
  const auto& params = g.spec().params;
  const CondPmf y_given_x = conditionalize(joint, Given::X);
  const CondPmf x_given_y = conditionalize(joint, Given::Y);

  auto visit_side = [&](Side side) {
    return [&, side](const std::function<void(std::size_t, const BigInt&)>& f) {
      if (g.materialized()) {
        const auto& bg = g.explicit_graph();
        const std::size_t count = side == Side::Left ? bg.left_count() : bg.right_count();
        for (std::size_t id = 0; id < count; ++id) {
          const Sequence v = side == Side::Left ? bg.left_vertex(id) : bg.right_vertex(id);
          const auto idx = side == Side::Left ? profile.left_index(empirical_type(v))
                                              : profile.right_index(empirical_type(v));
          if (!idx) throw InvariantViolation("roster vertex outside the typical types");
          f(*idx, BigInt(side == Side::Left ? bg.left_degree(id) : bg.right_degree(id)));
        }
      } else {
        const auto& types = side == Side::Left ? profile.left_types() : profile.right_types();
        for (std::size_t i = 0; i < types.size(); ++i) f(i, types[i].degree);
      }
    };
  };
  check_side(profile.left_types(), y_given_x, params.eps1 + params.lambda, g.spec().n, visit_side(Side::Left),
             report.left_checked, report.left_violations, report.left_worst_slack);
  check_side(profile.right_types(), x_given_y, params.eps2 + params.lambda, g.spec().n, visit_side(Side::Right),
             report.right_checked, report.right_violations, report.right_worst_slack);
  return report;
}

std::vector<Edge> edge_list(const TypicalityGraph& g) { return g.explicit_graph().edges(); }

}  // namespace typgraph
