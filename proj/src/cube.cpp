#include "cubelam/cube.hpp"

#include <cmath>
#include <numbers>

namespace cubelam {

namespace {

const Rational kHalf(1, 2);

Vec3q v3(const Rational& x, const Rational& y, const Rational& z) { return Vec3q(x, y, z); }

// local cube points
const Vec3q kX0 = v3(1, 1, 1);
const Vec3q kX1 = v3(-1, 1, 1);
const Vec3q kX2 = v3(1, -1, 1);
const Vec3q kX3 = v3(1, 1, -1);

Rational pair_coefficient(const Frame& f, int p, int q) {
  if (p > q) std::swap(p, q);
  if (p == 0 && q == 1) return f.a;
  if (p == 0 && q == 2) return f.b;
  return f.c;
}

std::array<int, 2> other_axes(int axis) {
  switch (axis) {
    case 0:
      return {1, 2};
    case 1:
      return {0, 2};
    default:
      return {0, 1};
  }
}

/// Local frame with `axis` first and the remaining two ordered so a <= b.
LocalFrame lemma_frame(const Frame& f, int axis) {
  if (axis < 0 || axis > 2) throw InputError("axis must be 0, 1 or 2");
  const auto o = other_axes(axis);
  LocalFrame l = local_frame(f, {axis, o[0], o[1]});
  if (l.a > l.b) l = local_frame(f, {axis, o[1], o[0]});
  return l;
}

/// Maps local construction points into matrix space with vertex labels.
class Embedding {
public:
  Embedding(const Frame& f, const LocalFrame& l) : f_(f), l_(l) {}

  Mat2q point(const Vec3q& local) const { return f_.point(l_.to_global(local)); }
  NodePtr<Rational> vertex(const Vec3q& local) const {
    return make_leaf(point(local), f_.label_of(l_.to_global(local)));
  }
  SignPattern label(const Vec3q& local) const { return f_.label_of(l_.to_global(local)); }

private:
  const Frame& f_;
  const LocalFrame& l_;
};

SignPattern global_label(const Frame& f, const Vec3q& normalised) { return f.label_of(normalised); }

/// Normalised -X0 and -X_i.
Vec3q minus_x0() { return v3(-1, -1, -1); }
Vec3q minus_xi(int axis) {
  Vec3q v = minus_x0();
  v(axis) = 1;
  return v;
}

std::array<Rational, 8> labelled_weights(const Forest& forest) {
  const auto vw = vertex_weights(forest);
  if (!vw) throw ConstructionError("certificate has an unlabelled leaf");
  std::array<Rational, 8> out;
  out.fill(Rational(0));
  for (const auto& [eps, w] : *vw) out[eps] += w;
  return out;
}

std::array<Rational, 8> labelled_weights(const Tree& t) {
  return labelled_weights(single_tree_forest(t));
}

void summarise(LaminateCertificate& cert) {
  const TreeReport r = validate_forest(cert.forest);
  if (!r.valid) {
    throw ConstructionError("constructed forest is invalid: " + to_string(r.violation->invariant) +
                            " at '" + r.violation->path + "'");
  }
  cert.flattened = flatten(cert.forest).canonical();
  cert.vertex_weights = labelled_weights(cert.forest);
  const auto sym = symmetry_of(cert.vertex_weights);
  cert.alpha = sym.alpha;
  cert.beta = sym.beta;
  cert.check();
}

Forest mix(const std::vector<std::pair<Rational, Tree>>& parts) {
  Rational total(0);
  for (const auto& p : parts) total += p.first;
  Forest forest;
  for (const auto& p : parts) {
    if (p.first != 0) forest.components.push_back({p.first / total, p.second});
  }
  return forest;
}

/// Rational approximation of a direction on the unit circle.
std::pair<Rational, Rational> circle_point(int k, int grid) {
  const double theta = std::numbers::pi * (k + 0.5) / grid;
  constexpr double kDen = 4096.0;
  return {Rational(static_cast<long>(std::lround(std::cos(theta) * kDen)), 4096),
          Rational(static_cast<long>(std::lround(std::sin(theta) * kDen)), 4096)};
}

}  // namespace

std::string LocalFrame::describe() const {
  const char* names = "xyz";
  std::string s = "local(";
  for (int j = 0; j < 3; ++j) {
    if (j) s += ",";
    s += names[perm[j]];
  }
  return s + ")";
}

LocalFrame local_frame(const Frame& f, const std::array<int, 3>& perm) {
  LocalFrame l;
  l.perm = perm;
  l.a = pair_coefficient(f, perm[0], perm[1]);
  l.b = pair_coefficient(f, perm[0], perm[2]);
  l.c = pair_coefficient(f, perm[1], perm[2]);
  return l;
}

std::string to_string(ConstructionCase c) {
  switch (c) {
    case ConstructionCase::Degenerate:
      return "degenerate";
    case ConstructionCase::Case1:
      return "case1";
    case ConstructionCase::Case2:
      return "case2";
    case ConstructionCase::Uniform:
      return "uniform";
    case ConstructionCase::Combined:
      return "combined";
  }
  return "unknown";
}

std::array<int, 3> vertex_det_signs(const Frame& f) {
  if (f.degenerate) throw InputError("frame is degenerate (abc = 0)");
  return {sign(Rational(f.c - f.a - f.b)), sign(Rational(f.b - f.a - f.c)),
          sign(Rational(f.a - f.b - f.c))};
}

LemmaPData lemma_p(const Frame& f, int axis) {
  if (f.degenerate) throw InputError("lemma_p needs a nondegenerate frame");
  LemmaPData d;
  d.axis = axis;
  d.local = lemma_frame(f, axis);
  const LocalFrame& l = d.local;
  const Rational& a = l.a;
  const Rational& b = l.b;
  const Rational& c = l.c;
  if (!(c < a + b)) throw InputError("lemma_p needs det X_axis < 0");

  d.lambda = (a + b - c) / (a + b);
  d.P = d.lambda * Vec3q(-kX0) + (1 - d.lambda) * Vec3q(-kX1);
  d.lambda1 = d.lambda * b / (a + d.lambda * b);
  d.P1 = d.lambda1 * kX1 + (1 - d.lambda1) * d.P;
  d.lambda2 = d.lambda * a / (b + d.lambda * a);
  d.P2 = d.lambda2 * kX1 + (1 - d.lambda2) * d.P;
  d.lambda3 = (a + b - c) * (b - a) / (b * b - a * a + (1 + d.lambda) * a * c);
  d.P3 = d.lambda3 * kX3 + (1 - d.lambda3) * d.P2;

  if (l.form(Vec3q(d.P - kX1)) != 0 || l.form(Vec3q(d.P1 - kX2)) != 0 ||
      l.form(Vec3q(d.P2 - kX3)) != 0 || l.form(Vec3q(d.P3 - kX2)) != 0) {
    throw std::logic_error("lemma_p waypoint fails its rank-one condition");
  }
  return d;
}

Witness witness_origin(const Frame& f, int axis, const WitnessOptions& opt) {
  if (f.degenerate) throw InputError("witness_origin needs a nondegenerate frame");
  Witness w;
  const LocalFrame l = lemma_frame(f, axis);
  const Embedding emb(f, l);
  const Rational dx1 = l.form(kX1);
  if (dx1 > 0) throw InputError("witness_origin needs det X_axis <= 0");
  if (dx1 == 0) {
    // X_axis is rank-one: 0 is the midpoint of [X_axis, -X_axis]
    w.boundary = true;
    w.data.axis = axis;
    w.data.local = l;
    w.data.lambda = 0;
    w.tree = Tree(split_between(kHalf, emb.vertex(kX1), emb.vertex(Vec3q(-kX1))));
    return w;
  }
  w.data = lemma_p(f, axis);
  const LemmaPData& d = w.data;

  const auto x0 = emb.vertex(kX0);
  const auto x1 = emb.vertex(kX1);
  const auto x2 = emb.vertex(kX2);
  const auto x3 = emb.vertex(kX3);
  const auto p = split_between(d.lambda, emb.vertex(Vec3q(-kX0)), emb.vertex(Vec3q(-kX1)));
  const auto p1 = split_between(d.lambda1, x1, p);
  const auto p2 = split_between(d.lambda2, x1, p);
  const auto p3 = split_between(d.lambda3, x3, p2);

  struct Patch {
    RuledSurfacePatch<Rational> surface;
    Hyperboloid<Rational> quadric;
    std::array<NodePtr<Rational>, 4> corners;
  };
  std::vector<Patch> patches;
  const std::array<std::array<NodePtr<Rational>, 4>, 4> squares = {{
      {x0, x2, p3, x3},
      {x0, x1, p1, x2},
      {x0, x1, p2, x3},
      {x2, p1, p2, p3},
  }};
  std::vector<int> patch_ids;
  for (int s = 0; s < 4; ++s) {
    const auto& c = squares[s];
    try {
      const auto sq = RankOneSquare<Rational>::make(c[0]->point, c[1]->point, c[2]->point,
                                                    c[3]->point);
      if (classify(sq) != SquareCase::OppositeSign) continue;  // collapsed when a = b
      const auto surface = RuledSurfacePatch<Rational>::make(sq);
      patches.push_back({surface, hyperboloid_center(sq.X), c});
      patch_ids.push_back(s);
    } catch (const InputError&) {
      continue;
    }
  }

  auto hit_node = [&](const Patch& pt, const SurfaceHit<Rational>& h) {
    const auto& c = pt.corners;
    const Rational s = pairing(pt.surface.square, h.t);
    const auto a = split_between(h.t, c[0], c[1]);
    const auto b = split_between(s, c[3], c[2]);
    return split_between(h.u, a, b);
  };

  std::vector<int> grids{opt.grid};
  if (opt.max_grid > opt.grid) grids.push_back(opt.max_grid);
  const Mat2q origin = Mat2q::Zero();
  for (const int grid : grids) {
    for (int k = 0; k < grid; ++k) {
      const auto [pc, qc] = circle_point(k, grid);
      const Rational s = l.a * pc + l.b * qc;
      const Vec3q dir = v3(-l.c * pc * qc, pc * s, qc * s);
      if (dir.isZero()) continue;
      const Mat2q D = emb.point(dir);
      std::optional<std::pair<int, SurfaceHit<Rational>>> best_plus, best_minus;
      bool in_surface = false;
      for (std::size_t i = 0; i < patches.size(); ++i) {
        std::vector<SurfaceHit<Rational>> hits;
        try {
          hits = ray_surface_intersections(patches[i].surface, patches[i].quadric, origin, D);
        } catch (const LineInSurface&) {
          in_surface = true;
          break;
        }
        for (const auto& h : hits) {
          if (h.sigma > 0 && (!best_plus || h.sigma < best_plus->second.sigma)) {
            best_plus = std::make_pair(static_cast<int>(i), h);
          }
          if (h.sigma < 0 && (!best_minus || h.sigma > best_minus->second.sigma)) {
            best_minus = std::make_pair(static_cast<int>(i), h);
          }
        }
      }
      if (in_surface || !best_plus || !best_minus) continue;
      const auto& hp = best_plus->second;
      const auto& hm = best_minus->second;
      const Rational mu = -hm.sigma / (hp.sigma - hm.sigma);
      const Tree tree(split_between(mu, hit_node(patches[best_plus->first], hp),
                                    hit_node(patches[best_minus->first], hm)));
      if (!is_zero(tree.barycenter()) || !validate_tree(tree).valid ||
          !vertex_weights(single_tree_forest(tree))) {
        continue;
      }
      w.tree = tree;
      w.direction = dir;
      w.plus = WitnessHit{patch_ids[best_plus->first], hp.t, hp.u, hp.sigma};
      w.minus = WitnessHit{patch_ids[best_minus->first], hm.t, hm.u, hm.sigma};
      w.grid_index = k;
      w.grid_size = grid;
      return w;
    }
  }
  throw ConstructionError("witness_origin: no bracketing rank-one direction found for axis " +
                          std::to_string(axis) + " (a,b,c)=(" + to_string(l.a) + "," +
                          to_string(l.b) + "," + to_string(l.c) + "), grids tried up to " +
                          std::to_string(grids.back()) + ", patches " +
                          std::to_string(patches.size()));
}

Tree uniform_laminate(const Frame& f) {
  auto vertex = [&](int x, int y, int z) {
    const Vec3q v = v3(x, y, z);
    return make_leaf(f.point(v), global_label(f, v));
  };
  auto half = [&](const NodePtr<Rational>& p, const NodePtr<Rational>& q) {
    return split_between(kHalf, p, q);
  };
  auto face = [&](int x, int y) { return half(vertex(x, y, 1), vertex(x, y, -1)); };
  auto slab = [&](int x) { return half(face(x, 1), face(x, -1)); };
  return Tree(half(slab(1), slab(-1)));
}

LaminateCertificate degenerate_laminate(const Frame& f, const Rational& alpha) {
  if (!f.degenerate) throw InputError("degenerate_laminate needs abc = 0");
  if (alpha < 0 || alpha > Rational(1, 4)) throw InputError("alpha must lie in [0, 1/4]");
  // the two axes whose mixed coefficient vanishes span a rank-one plane
  int p = 0, q = 1, r = 2;
  if (f.raw_a == 0) {
    p = 0, q = 1, r = 2;
  } else if (f.raw_b == 0) {
    p = 0, q = 2, r = 1;
  } else {
    p = 1, q = 2, r = 0;
  }
  auto vertex = [&](int sp, int sq, int sr) {
    Vec3q v;
    v(p) = sp;
    v(q) = sq;
    v(r) = sr;
    return make_leaf(f.point(v), global_label(f, v));
  };
  // on the slice x_r = s the in-plane diagonals are rank-one; the parity of
  // the chosen vertices selects the alpha or beta class
  auto extreme = [&](int parity) {
    auto slice = [&](int s) {
      const int t = parity * s;  // sp * sq * s = parity
      return split_between(kHalf, vertex(1, t, s), vertex(-1, -t, s));
    };
    return Tree(split_between(kHalf, slice(1), slice(-1)));
  };
  LaminateCertificate cert;
  cert.frame = f;
  cert.kind = ConstructionCase::Degenerate;
  cert.base = ConstructionCase::Degenerate;
  cert.forest = mix({{4 * alpha, extreme(1)}, {1 - 4 * alpha, extreme(-1)}});
  summarise(cert);
  return cert;
}

namespace {

struct Component {
  Tree tree;
  Rational minus_x0, minus_xi;  // masses on -X0 and -X_axis (normalised)
};

Component witness_component(const Frame& f, int axis, const WitnessOptions& opt) {
  const Witness w = witness_origin(f, axis, opt);
  const auto vw = labelled_weights(w.tree);
  return {w.tree, vw[global_label(f, minus_x0())], vw[global_label(f, minus_xi(axis))]};
}

/// (sum of the two coefficients touching the axis - the third) / the third
Rational lemma_ratio(const Frame& f, int axis) {
  const auto o = other_axes(axis);
  const Rational opposite = pair_coefficient(f, o[0], o[1]);
  return (pair_coefficient(f, axis, o[0]) + pair_coefficient(f, axis, o[1]) - opposite) / opposite;
}

void record_relabelings(LaminateCertificate& cert, const Frame& f) {
  cert.relabelings.push_back("axis signs (" + std::to_string(f.axis_sign[0]) + "," +
                             std::to_string(f.axis_sign[1]) + "," +
                             std::to_string(f.axis_sign[2]) + ")" +
                             (f.det_flip ? ", determinant flip" : ""));
  for (int axis = 0; axis < 3; ++axis) {
    cert.relabelings.push_back("witness axis " + std::to_string(axis) + ": " +
                               lemma_frame(f, axis).describe());
  }
}

}  // namespace

LaminateCertificate case1_laminate(const Frame& f, const WitnessOptions& opt) {
  const auto s = vertex_det_signs(f);
  if (s[0] > 0 || s[1] > 0 || s[2] > 0) throw InputError("case1 needs det X_i <= 0 for all i");

  LaminateCertificate cert;
  cert.frame = f;
  cert.kind = cert.base = ConstructionCase::Case1;
  std::vector<std::pair<Rational, Tree>> parts;
  Rational ratio_sum(0);
  for (int axis = 0; axis < 3; ++axis) {
    const Component c = witness_component(f, axis, opt);
    const Rational ratio = c.minus_x0 / c.minus_xi;
    if (ratio != lemma_ratio(f, axis)) {
      throw ConstructionError("case1: component ratio differs from the closed form");
    }
    cert.component_ratios.push_back(ratio);
    ratio_sum += ratio;
    parts.emplace_back(1 / c.minus_xi, c.tree);
  }
  cert.forest = mix(parts);
  record_relabelings(cert, f);
  summarise(cert);

  const Rational m0 = cert.vertex_weights[global_label(f, minus_x0())];
  const Rational m1 = cert.vertex_weights[global_label(f, minus_xi(0))];
  cert.extremal_ratio = m0 / m1;
  const Rational closed = (f.a + f.b + f.c) * (1 / f.a + 1 / f.b + 1 / f.c) - 6;
  if (*cert.extremal_ratio != closed || ratio_sum != closed) {
    throw ConstructionError("case1: achieved ratio differs from the closed form");
  }
  return cert;
}

LaminateCertificate case2_laminate(const Frame& f, const WitnessOptions& opt) {
  const auto s = vertex_det_signs(f);
  int special = -1;
  for (int i = 0; i < 3; ++i) {
    if (s[i] > 0) {
      if (special >= 0) throw std::logic_error("two vertex determinants are positive");
      special = i;
    }
  }
  if (special < 0) throw InputError("case2 needs some det X_i > 0");

  static const std::array<std::array<int, 3>, 3> perms = {{{1, 0, 2}, {0, 1, 2}, {0, 2, 1}}};
  const LocalFrame l = local_frame(f, perms[special]);
  const Embedding emb(f, l);
  if (!(l.b > l.a + l.c)) throw std::logic_error("case2 relabelling failed");

  // P = lambda X1 + (1-lambda)(-X2) with det(P - X2) = 0
  const Rational lambda = (l.b - l.a - l.c) / (l.b - l.c);
  const auto x1 = emb.vertex(kX1);
  const auto x2 = emb.vertex(kX2);
  const auto mx1 = emb.vertex(Vec3q(-kX1));
  const auto mx2 = emb.vertex(Vec3q(-kX2));
  const auto p = split_between(lambda, x1, mx2);
  const auto mp = split_between(lambda, mx1, x2);
  const Tree nu2(split_between(kHalf, split_between(kHalf, p, x2), split_between(kHalf, mp, mx2)));
  const auto w2 = labelled_weights(nu2);
  const Rational nu2_mx1 = w2[emb.label(Vec3q(-kX1))];
  const Rational nu2_mx2 = w2[emb.label(Vec3q(-kX2))];
  if (nu2_mx1 != lambda / 4 || nu2_mx2 != (2 - lambda) / 4 ||
      w2[emb.label(kX1)] != lambda / 4 || w2[emb.label(kX2)] != (2 - lambda) / 4) {
    throw ConstructionError("case2: nu2' weights differ from the closed form");
  }
  const Rational deflation = 1 - nu2_mx1 / nu2_mx2;

  const Component c1 = witness_component(f, l.perm[0], opt);
  const Component c3 = witness_component(f, l.perm[2], opt);

  LaminateCertificate cert;
  cert.frame = f;
  cert.kind = cert.base = ConstructionCase::Case2;
  cert.component_ratios = {c1.minus_x0 / c1.minus_xi, Rational(0), c3.minus_x0 / c3.minus_xi};
  cert.forest = mix({{deflation / c1.minus_xi, c1.tree}, {1 / nu2_mx2, nu2},
                     {1 / c3.minus_xi, c3.tree}});
  record_relabelings(cert, f);
  cert.relabelings.push_back("case2 frame: " + l.describe());
  summarise(cert);

  const Rational m0 = cert.vertex_weights[global_label(f, minus_x0())];
  const Rational mk = cert.vertex_weights[global_label(f, minus_xi(0))];
  cert.extremal_ratio = m0 / mk;
  const Rational closed = 2 * l.a / l.c + (l.b + l.c - l.a) / l.a;
  if (*cert.extremal_ratio != closed) {
    throw ConstructionError("case2: achieved ratio differs from the closed form");
  }
  return cert;
}

LaminateCertificate extremal_laminate(const Frame& f, const WitnessOptions& opt) {
  const auto s = vertex_det_signs(f);
  const bool positive = s[0] > 0 || s[1] > 0 || s[2] > 0;
  return positive ? case2_laminate(f, opt) : case1_laminate(f, opt);
}

LaminateCertificate symmetric_laminate(const Frame& f, const Rational& target,
                                       const WitnessOptions& opt) {
  if (target < Rational(1, 3) || target > 3) throw InputError("target ratio must lie in [1/3, 3]");
  if (f.degenerate) {
    LaminateCertificate cert = degenerate_laminate(f, target / (4 * (1 + target)));
    cert.target_ratio = target;
    return cert;
  }
  // work with alpha/beta <= 1 in normalised labels, inverting the cube if needed
  const Rational normalised = f.classes_swapped() ? Rational(1 / target) : target;
  const bool invert = normalised > 1;
  const Rational r = invert ? Rational(1 / normalised) : normalised;

  LaminateCertificate cert;
  cert.frame = f;
  cert.kind = ConstructionCase::Combined;
  cert.target_ratio = target;
  cert.inverted = invert;
  const Tree uniform = uniform_laminate(f);
  if (r == 1) {
    cert.base = ConstructionCase::Uniform;
    cert.forest = single_tree_forest(uniform);
  } else {
    const LaminateCertificate base = extremal_laminate(f, opt);
    cert.base = base.base;
    cert.extremal_ratio = base.extremal_ratio;
    cert.component_ratios = base.component_ratios;
    cert.relabelings = base.relabelings;
    const Rational beta_b = base.vertex_weights[global_label(f, minus_x0())];
    const Rational alpha_b = Rational(1, 4) - beta_b;
    // w alpha_b + (1-w)/8 = r (w beta_b + (1-w)/8)
    const Rational w = (1 - r) / 8 / ((1 - r) / 8 + r * beta_b - alpha_b);
    for (const auto& c : base.forest.components) {
      cert.forest.components.push_back({w * c.weight, c.tree});
    }
    if (w != 1) cert.forest.components.push_back({1 - w, uniform});
  }
  if (invert) {
    for (auto& c : cert.forest.components) c.tree = Tree(negate(c.tree.root()));
    cert.relabelings.push_back("central inversion X -> -X");
  }
  summarise(cert);
  if (cert.alpha != target * cert.beta) {
    throw ConstructionError("symmetric_laminate: ratio " + to_string(cert.alpha_beta_ratio()) +
                            " differs from target " + to_string(target));
  }
  return cert;
}

void LaminateCertificate::check() const {
  const TreeReport r = validate_forest(forest);
  if (!r.valid) throw ConstructionError("certificate forest is invalid");
  const AtomicMeasure<Rational> m = flatten(forest);
  if (!is_zero(barycenter(m))) throw ConstructionError("certificate barycentre is not 0");
  if (!pc_constraints_check(m).zero()) throw ConstructionError("determinant moment is not 0");
  const auto sym = symmetry_of(vertex_weights);
  if (!sym.symmetric) throw ConstructionError("certificate measure is not symmetric");
  Rational total(0);
  for (const auto& w : vertex_weights) total += w;
  if (total != 1) throw ConstructionError("vertex weights do not sum to 1");
  for (SignPattern eps = 0; eps < 8; ++eps) {
    if (vertex_weights[eps] != 0 && m.mass(frame.vertex(eps)) == 0) {
      throw ConstructionError("vertex weight without a matching atom");
    }
  }
}

}  // namespace cubelam
