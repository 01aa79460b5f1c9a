#pragma once

// Atomic probability measures on 2x2 matrices and binary splitting trees
// certifying that a measure is a prelaminate.

#include "cubelam/frame.hpp"
#include "cubelam/mat2.hpp"
#include "cubelam/test_function.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cubelam {

template <class S>
struct Atom {
  Mat2<S> point;
  S weight;
};

/// Finite probability measure; coincident atoms are merged on insertion.
template <class S>
class AtomicMeasure {
public:
  AtomicMeasure() = default;

  static AtomicMeasure dirac(const Mat2<S>& x) {
    AtomicMeasure m;
    m.add(x, S(1));
    return m;
  }

  void add(const Mat2<S>& x, const S& w) {
    for (auto& a : atoms_) {
      if (same_point(a.point, x)) {
        a.weight += w;
        return;
      }
    }
    atoms_.push_back({x, w});
  }

  const std::vector<Atom<S>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  S total() const {
    S s(0);
    for (const auto& a : atoms_) s += a.weight;
    return s;
  }

  /// Weight at x (zero if x is not an atom).
  S mass(const Mat2<S>& x) const {
    for (const auto& a : atoms_) {
      if (same_point(a.point, x)) return a.weight;
    }
    return S(0);
  }

  /// Sorts atoms lexicographically and drops zero weights.
  AtomicMeasure canonical() const {
    AtomicMeasure m;
    for (const auto& a : atoms_) {
      if (a.weight != 0) m.atoms_.push_back(a);
    }
    std::sort(m.atoms_.begin(), m.atoms_.end(),
              [](const Atom<S>& x, const Atom<S>& y) { return lex_less(x.point, y.point); });
    return m;
  }

private:
  std::vector<Atom<S>> atoms_;
};

template <class S>
Mat2<S> barycenter(const AtomicMeasure<S>& m) {
  Mat2<S> x = Mat2<S>::Zero();
  for (const auto& a : m.atoms()) x += a.weight * a.point;
  return x;
}

// ---------------------------------------------------------------------------
// Splitting trees

template <class S>
struct TreeNode;

template <class S>
using NodePtr = std::shared_ptr<const TreeNode<S>>;

/// Leaf(point) or Split(point, lambda, left, right). The barycentre of a node
/// is its point. Leaves may carry the label of the cube vertex they sit on.
template <class S>
struct TreeNode {
  Mat2<S> point;
  S lambda{0};
  NodePtr<S> left, right;
  std::optional<SignPattern> vertex;

  bool is_leaf() const { return !left; }
};

template <class S>
NodePtr<S> make_leaf(const Mat2<S>& x, std::optional<SignPattern> vertex = std::nullopt) {
  auto n = std::make_shared<TreeNode<S>>();
  n->point = x;
  n->vertex = vertex;
  return n;
}

/// Split stored as given; validate_tree checks consistency.
template <class S>
NodePtr<S> make_split(const Mat2<S>& x, const S& lambda, NodePtr<S> left, NodePtr<S> right) {
  auto n = std::make_shared<TreeNode<S>>();
  n->point = x;
  n->lambda = lambda;
  n->left = std::move(left);
  n->right = std::move(right);
  return n;
}

/// lambda*left + (1-lambda)*right, collapsing lambda in {0,1} to the child.
template <class S>
NodePtr<S> split_between(const S& lambda, NodePtr<S> left, NodePtr<S> right) {
  if (lambda == 1) return left;
  if (lambda == 0) return right;
  const Mat2<S> x = lambda * left->point + (S(1) - lambda) * right->point;
  return make_split(x, lambda, std::move(left), std::move(right));
}

template <class S>
class SplittingTree {
public:
  SplittingTree() = default;
  explicit SplittingTree(NodePtr<S> root) : root_(std::move(root)) {}

  const NodePtr<S>& root() const { return root_; }
  const Mat2<S>& barycenter() const { return root_->point; }

private:
  NodePtr<S> root_;
};

template <class S>
struct ForestComponent {
  S weight;
  SplittingTree<S> tree;
};

/// Convex combination of trees sharing one root barycentre.
template <class S>
struct MeasureForest {
  std::vector<ForestComponent<S>> components;
};

template <class S>
MeasureForest<S> single_tree_forest(SplittingTree<S> t) {
  return MeasureForest<S>{{ForestComponent<S>{S(1), std::move(t)}}};
}

enum class TreeInvariant { Barycenter, RankOne, LambdaRange };

std::string to_string(TreeInvariant inv);

struct TreeViolation {
  std::string path;  // 'L'/'R' steps from the root; empty for the root
  TreeInvariant invariant;
  double residual;
};

struct TreeReport {
  bool valid = true;
  int order = 0;   // number of splits
  int leaves = 0;
  int depth = 0;
  std::optional<TreeViolation> violation;  // first in pre-order
};

namespace detail {

template <class S>
void validate_node(const TreeNode<S>& n, std::string& path, int level, TreeReport& r) {
  r.depth = std::max(r.depth, level);
  if (n.is_leaf()) {
    ++r.leaves;
    return;
  }
  ++r.order;
  if (r.valid) {
    const Mat2<S>& l = n.left->point;
    const Mat2<S>& rt = n.right->point;
    const Mat2<S> residual = n.point - (n.lambda * l + (S(1) - n.lambda) * rt);
    bool bary_ok;
    if constexpr (is_exact_v<S>) {
      bary_ok = is_zero(residual);
    } else {
      bary_ok = max_abs<double>(residual) <= kTau * (1.0 + max_abs(n.point) + max_abs(l) + max_abs(rt));
    }
    if (!(n.lambda > 0 && n.lambda < 1)) {
      r.valid = false;
      r.violation = TreeViolation{path, TreeInvariant::LambdaRange, to_double(n.lambda)};
    } else if (!bary_ok) {
      r.valid = false;
      r.violation = TreeViolation{path, TreeInvariant::Barycenter, to_double(max_abs<S>(residual))};
    } else if (!is_rank_one<S>(l - rt)) {
      r.valid = false;
      r.violation = TreeViolation{path, TreeInvariant::RankOne, to_double(det<S>(l - rt))};
    }
  }
  path.push_back('L');
  validate_node(*n.left, path, level + 1, r);
  path.back() = 'R';
  validate_node(*n.right, path, level + 1, r);
  path.pop_back();
}

template <class S, class Cut>
void flatten_node(const TreeNode<S>& n, const S& w, const Cut& cut, AtomicMeasure<S>& out) {
  if (n.is_leaf() || cut(n)) {
    out.add(n.point, w);
    return;
  }
  flatten_node(*n.left, w * n.lambda, cut, out);
  flatten_node(*n.right, w * (S(1) - n.lambda), cut, out);
}

template <class S>
void vertex_weights_node(const TreeNode<S>& n, const S& w, std::map<SignPattern, S>& out,
                         bool& unlabeled) {
  if (n.is_leaf()) {
    if (n.vertex) {
      out[*n.vertex] += w;
    } else {
      unlabeled = true;
    }
    return;
  }
  vertex_weights_node(*n.left, w * n.lambda, out, unlabeled);
  vertex_weights_node(*n.right, w * (S(1) - n.lambda), out, unlabeled);
}

}  // namespace detail

/// Checks every split: lambda in (0,1), point = lambda*left + (1-lambda)*right,
/// left - right rank-one.
template <class S>
TreeReport validate_tree(const SplittingTree<S>& t) {
  TreeReport r;
  std::string path;
  detail::validate_node(*t.root(), path, 0, r);
  return r;
}

template <class S>
TreeReport validate_forest(const MeasureForest<S>& f) {
  TreeReport total;
  if (f.components.empty()) {
    total.valid = false;
    total.violation = TreeViolation{"", TreeInvariant::LambdaRange, 0.0};
    return total;
  }
  S sum(0);
  for (std::size_t i = 0; i < f.components.size(); ++i) {
    const auto& c = f.components[i];
    sum += c.weight;
    TreeReport r = validate_tree(c.tree);
    total.order += r.order;
    total.leaves += r.leaves;
    total.depth = std::max(total.depth, r.depth);
    const bool shared_root = same_point(c.tree.barycenter(), f.components[0].tree.barycenter());
    if (total.valid && (!r.valid || c.weight < 0 || !shared_root)) {
      total.valid = false;
      if (r.violation) {
        r.violation->path = "#" + std::to_string(i) + "/" + r.violation->path;
        total.violation = r.violation;
      } else {
        total.violation = TreeViolation{"#" + std::to_string(i), TreeInvariant::Barycenter,
                                        to_double(c.weight)};
      }
    }
  }
  bool sums_to_one;
  if constexpr (is_exact_v<S>) {
    sums_to_one = sum == 1;
  } else {
    sums_to_one = std::abs(sum - 1.0) <= kTau;
  }
  if (total.valid && !sums_to_one) {
    total.valid = false;
    total.violation = TreeViolation{"", TreeInvariant::LambdaRange, to_double(sum)};
  }
  return total;
}

/// Leaf measure with path-product weights. Throws ConstructionError on an
/// invalid tree.
template <class S>
AtomicMeasure<S> flatten(const SplittingTree<S>& t) {
  const TreeReport r = validate_tree(t);
  if (!r.valid) {
    throw ConstructionError("cannot flatten invalid tree: " + to_string(r.violation->invariant) +
                            " at '" + r.violation->path + "'");
  }
  AtomicMeasure<S> out;
  detail::flatten_node(*t.root(), S(1), [](const TreeNode<S>&) { return false; }, out);
  return out;
}

template <class S>
AtomicMeasure<S> flatten(const MeasureForest<S>& f) {
  const TreeReport r = validate_forest(f);
  if (!r.valid) {
    throw ConstructionError("cannot flatten invalid forest: " +
                            to_string(r.violation->invariant) + " at '" + r.violation->path + "'");
  }
  AtomicMeasure<S> out;
  for (const auto& c : f.components) {
    detail::flatten_node(*c.tree.root(), c.weight, [](const TreeNode<S>&) { return false; }, out);
  }
  return out;
}

/// Flattens, treating every node accepted by `cut` as a leaf.
template <class S, class Cut>
AtomicMeasure<S> flatten_until(const SplittingTree<S>& t, const Cut& cut) {
  AtomicMeasure<S> out;
  detail::flatten_node(*t.root(), S(1), cut, out);
  return out;
}

/// Mass per labelled leaf. Returns nullopt if some leaf carries no label.
template <class S>
std::optional<std::map<SignPattern, S>> vertex_weights(const MeasureForest<S>& f) {
  std::map<SignPattern, S> out;
  bool unlabeled = false;
  for (const auto& c : f.components) {
    detail::vertex_weights_node(*c.tree.root(), c.weight, out, unlabeled);
  }
  if (unlabeled) return std::nullopt;
  return out;
}

/// X -> -X on every node; vertex labels map eps -> -eps.
template <class S>
NodePtr<S> negate(const NodePtr<S>& n) {
  if (n->is_leaf()) {
    std::optional<SignPattern> v;
    if (n->vertex) v = *n->vertex ^ 7U;
    return make_leaf<S>(-n->point, v);
  }
  return make_split<S>(-n->point, n->lambda, negate(n->left), negate(n->right));
}

// ---------------------------------------------------------------------------
// Jensen inequality along the tree

struct JensenViolation {
  std::string path;
  double margin;
};

/// Per-node margins lambda f(left) + (1-lambda) f(right) - f(point).
struct JensenReport {
  std::string function;
  bool exact = false;  // margins computed in exact arithmetic
  int nodes = 0;
  double min_node_margin = 0.0;
  double global_margin = 0.0;  // sum_leaf w f(X_leaf) - f(root)
  bool min_node_margin_nonnegative = true;
  bool global_margin_nonnegative = true;
  std::vector<JensenViolation> violations;

  bool passed() const { return violations.empty() && global_margin_nonnegative; }
};

/// Float violations: margin < -1e-7 (1 + |f(point)|).
inline constexpr double kJensenTolerance = 1e-7;

namespace detail {

template <class V>
struct JensenState {
  JensenReport report;
  std::optional<V> min_margin;
  V leaf_sum{0};
};

template <class S, class V, class Eval>
void jensen_node(const TreeNode<S>& n, const S& w, const Eval& f, std::string& path,
                 JensenState<V>& st) {
  if (n.is_leaf()) {
    st.leaf_sum += static_cast<V>(w) * f(n.point);
    return;
  }
  ++st.report.nodes;
  const V fp = f(n.point);
  const V lam = static_cast<V>(n.lambda);
  const V margin = lam * f(n.left->point) + (V(1) - lam) * f(n.right->point) - fp;
  if (!st.min_margin || margin < *st.min_margin) st.min_margin = margin;
  bool violated;
  if constexpr (is_exact_v<V>) {
    violated = margin < 0;
  } else {
    violated = margin < -kJensenTolerance * (1.0 + std::abs(fp));
  }
  if (violated) st.report.violations.push_back({path, to_double(margin)});
  path.push_back('L');
  jensen_node(*n.left, S(w * n.lambda), f, path, st);
  path.back() = 'R';
  jensen_node(*n.right, S(w * (S(1) - n.lambda)), f, path, st);
  path.pop_back();
}

}  // namespace detail

template <class S>
JensenReport jensen_check(const SplittingTree<S>& t, const TestFunction& f) {
  std::string path;
  if constexpr (is_exact_v<S>) {
    if (f.exact_evaluable()) {
      detail::JensenState<Rational> st;
      st.report.exact = true;
      auto eval = [&](const Mat2q& x) { return f.exact(x); };
      detail::jensen_node(*t.root(), Rational(1), eval, path, st);
      st.report.function = f.name();
      const Rational global = st.leaf_sum - eval(t.barycenter());
      const Rational min = st.min_margin.value_or(Rational(0));
      st.report.min_node_margin = to_double(min);
      st.report.min_node_margin_nonnegative = min >= 0;
      st.report.global_margin = to_double(global);
      st.report.global_margin_nonnegative = global >= 0;
      return st.report;
    }
  }
  detail::JensenState<double> st;
  auto eval = [&](const Mat2<S>& x) {
    if constexpr (is_exact_v<S>) {
      return f(to_double(x));
    } else {
      return f(x);
    }
  };
  detail::jensen_node(*t.root(), S(1), eval, path, st);
  st.report.function = f.name();
  const double f_root = eval(t.barycenter());
  const double global = st.leaf_sum - f_root;
  st.report.min_node_margin = st.min_margin.value_or(0.0);
  st.report.min_node_margin_nonnegative = st.report.min_node_margin >= 0.0;
  st.report.global_margin = global;
  st.report.global_margin_nonnegative = global >= -kJensenTolerance * (1.0 + std::abs(f_root));
  return st.report;
}

/// Forest version: node margins over all trees, global margin of the mixture.
template <class S>
JensenReport jensen_check(const MeasureForest<S>& forest, const TestFunction& f) {
  JensenReport total;
  total.function = f.name();
  total.exact = true;
  bool first = true;
  double global = 0.0;
  Rational exact_global(0);
  for (std::size_t i = 0; i < forest.components.size(); ++i) {
    const auto& c = forest.components[i];
    JensenReport r = jensen_check(c.tree, f);
    total.exact = total.exact && r.exact;
    total.nodes += r.nodes;
    if (first || r.min_node_margin < total.min_node_margin) total.min_node_margin = r.min_node_margin;
    total.min_node_margin_nonnegative =
        total.min_node_margin_nonnegative && r.min_node_margin_nonnegative;
    first = false;
    for (auto& v : r.violations) {
      v.path = "#" + std::to_string(i) + "/" + v.path;
      total.violations.push_back(v);
    }
    global += to_double(c.weight) * r.global_margin;
    total.global_margin_nonnegative = total.global_margin_nonnegative && r.global_margin_nonnegative;
  }
  total.global_margin = global;
  return total;
}

// ---------------------------------------------------------------------------
// Moment constraints

template <class S>
struct MomentResidual {
  S first_moment;  // max-abs of sum w X - declared barycentre
  S det_moment;    // |sum w det X - det(declared barycentre)|

  bool zero() const {
    if constexpr (is_exact_v<S>) {
      return first_moment == 0 && det_moment == 0;
    } else {
      return first_moment <= kTau && det_moment <= kTau;
    }
  }
};

/// Residuals of the first-moment and determinant constraints. The declared
/// barycentre defaults to the measure's own.
template <class S>
MomentResidual<S> pc_constraints_check(const AtomicMeasure<S>& m,
                                       const std::optional<Mat2<S>>& declared = std::nullopt) {
  const Mat2<S> bary = barycenter(m);
  const Mat2<S> target = declared.value_or(bary);
  S det_sum(0);
  for (const auto& a : m.atoms()) det_sum += a.weight * det(a.point);
  return {max_abs<S>(bary - target), scalar_abs<S>(det_sum - det(target))};
}

// ---------------------------------------------------------------------------
// Symmetric measures on a cube

template <class S>
struct SymmetryReport {
  bool symmetric = false;
  S alpha{0};  // common weight on +++, +--, -+-, --+
  S beta{0};   // common weight on ---, ++-, +-+, -++
  std::array<S, 8> weights{};  // by original label
};

namespace detail {

template <class S>
bool scalar_eq(const S& x, const S& y) {
  if constexpr (is_exact_v<S>) {
    return x == y;
  } else {
    return std::abs(x - y) <= kTau;
  }
}

template <class S>
std::array<S, 8> cube_weights(const AtomicMeasure<S>& m, const CubeFrame<S>& frame) {
  if (!frame.vertices_distinct()) {
    throw InputError("cube vertices coincide; weights per vertex are ambiguous");
  }
  std::array<S, 8> w;
  w.fill(S(0));
  for (const auto& a : m.atoms()) {
    const auto eps = frame.find_vertex(a.point);
    if (!eps) throw InputError("measure has an atom outside the cube's vertex set");
    w[*eps] += a.weight;
  }
  return w;
}

}  // namespace detail

/// Symmetric pattern check on per-vertex weights, in the caller's labelling.
template <class S>
SymmetryReport<S> symmetry_of(const std::array<S, 8>& w) {
  SymmetryReport<S> r;
  r.weights = w;
  const SignPattern alpha_class[4] = {0b000, 0b110, 0b101, 0b011};
  const SignPattern beta_class[4] = {0b111, 0b100, 0b010, 0b001};
  r.alpha = w[alpha_class[0]];
  r.beta = w[beta_class[0]];
  bool ok = true;
  for (int i = 1; i < 4; ++i) {
    ok = ok && detail::scalar_eq(w[alpha_class[i]], r.alpha) &&
         detail::scalar_eq(w[beta_class[i]], r.beta);
  }
  r.symmetric = ok && detail::scalar_eq(S(r.alpha + r.beta), S(S(1) / S(4)));
  return r;
}

template <class S>
SymmetryReport<S> is_symmetric(const AtomicMeasure<S>& m, const CubeFrame<S>& frame) {
  return symmetry_of(detail::cube_weights(m, frame));
}

/// Partial-symmetry criterion for a measure on a normalised cube (a,b,c > 0)
/// with barycentre 0: equal mass on the three vertices -X1, -X2, -X3 (the
/// normalised vertices +--, -+-, --+) forces the full symmetric pattern.
/// Labels in the report are normalised ones. Throws InputError if the
/// hypothesis fails.
template <class S>
SymmetryReport<S> symmetric_from_partial(const AtomicMeasure<S>& m, const CubeFrame<S>& frame) {
  if (frame.degenerate) throw InputError("frame must satisfy a, b, c > 0");
  const auto orig = detail::cube_weights(m, frame);
  std::array<S, 8> w;
  for (SignPattern eps = 0; eps < 8; ++eps) {
    Vec3<S> v;
    for (int i = 0; i < 3; ++i) v(i) = S(sign_of(eps, i));
    w[eps] = orig[frame.label_of(v)];
  }
  const auto moments = pc_constraints_check(m, std::optional<Mat2<S>>(Mat2<S>::Zero()));
  if (!moments.zero()) throw InputError("measure does not have barycentre 0 with det moment 0");
  const S alpha = w[0b110];
  if (!detail::scalar_eq(w[0b101], alpha) || !detail::scalar_eq(w[0b011], alpha)) {
    throw InputError("hypothesis fails: masses on +--, -+-, --+ differ");
  }
  // first moments force equal mass gamma on ++-, +-+, -++; the det moment
  // gives (a+b+c)(beta - gamma) = 0, and then mass(+++) = alpha.
  SymmetryReport<S> r = symmetry_of(w);
  if (!r.symmetric) {
    throw ConstructionError("symmetric pattern not reproduced although the hypothesis holds");
  }
  return r;
}

}  // namespace cubelam
