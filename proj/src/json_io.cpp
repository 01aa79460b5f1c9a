#include "cubelam/json_io.hpp"

namespace cubelam::json {

namespace {

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError((where.empty() ? std::string("/") : where) + ": " + what);
}

}  // namespace

template <>
Rational scalar<Rational>(const Json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
  }
  if (j.is_number()) fail(where, "exact mode expects integers or \"p/q\" strings, got a float");
  if (!j.is_string()) fail(where, "expected a rational \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    fail(where, e.what());
  }
}

template <>
double scalar<double>(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  return to_double(scalar<Rational>(j, where));
}

template <>
Json encode<Rational>(const Rational& x) {
  return to_string(x);
}

template <>
Json encode<double>(const double& x) {
  return x;
}

namespace {

const Json& array_of(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || (n && j.size() != n)) {
    fail(where, n ? "expected an array of length " + std::to_string(n) : "expected an array");
  }
  return j;
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

SignPattern vertex_label(const Json& j, const std::string& where) {
  if (!j.is_string() || j.get<std::string>().size() != 3) fail(where, "expected a 3-sign pattern like \"+-+\"");
  try {
    return pattern_from_string(j.get<std::string>());
  } catch (const InputError& e) {
    fail(where, e.what());
  }
}

template <class S>
NodePtr<S> node(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a tree node object");
  if (j.contains("leaf")) {
    std::optional<SignPattern> v;
    if (j.contains("vertex")) v = vertex_label(j["vertex"], child(where, "vertex"));
    return make_leaf<S>(mat2<S>(j["leaf"], child(where, "leaf")), v);
  }
  const Mat2<S> p = mat2<S>(member(j, "point", where), child(where, "point"));
  const S lambda = scalar<S>(member(j, "lambda", where), child(where, "lambda"));
  auto l = node<S>(member(j, "left", where), child(where, "left"));
  auto r = node<S>(member(j, "right", where), child(where, "right"));
  return make_split<S>(p, lambda, std::move(l), std::move(r));
}

template <class S>
Json encode_node(const TreeNode<S>& n) {
  Json j;
  if (n.is_leaf()) {
    j["leaf"] = encode_mat2(n.point);
    if (n.vertex) j["vertex"] = pattern_to_string(*n.vertex, 3);
    return j;
  }
  j["point"] = encode_mat2(n.point);
  j["lambda"] = encode(n.lambda);
  j["left"] = encode_node(*n.left);
  j["right"] = encode_node(*n.right);
  return j;
}

Json encode_coefficients(const Rational& a, const Rational& b, const Rational& c) {
  return Json{{"a", encode(a)}, {"b", encode(b)}, {"c", encode(c)}};
}

ConstructionCase construction_case(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a construction kind string");
  for (auto c : {ConstructionCase::Degenerate, ConstructionCase::Case1, ConstructionCase::Case2,
                 ConstructionCase::Uniform, ConstructionCase::Combined}) {
    if (to_string(c) == j.get<std::string>()) return c;
  }
  fail(where, "unknown construction kind '" + j.get<std::string>() + "'");
}

/// Resolves leaf labels against the frame: a stated label must name the
/// vertex the leaf sits on; a missing one is looked up.
NodePtr<Rational> resolve_labels(const NodePtr<Rational>& n, const Frame& f, const std::string& where) {
  if (n->is_leaf()) {
    const auto found = f.find_vertex(n->point);
    if (!found) throw ConstructionError(where + ": leaf is not a cube vertex");
    if (n->vertex && f.vertex(*n->vertex) != n->point) {
      throw ConstructionError(where + ": leaf label does not match its point");
    }
    return make_leaf<Rational>(n->point, n->vertex ? *n->vertex : *found);
  }
  return make_split<Rational>(n->point, n->lambda, resolve_labels(n->left, f, where + "/left"),
                              resolve_labels(n->right, f, where + "/right"));
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (!j.contains(key)) fail(where, "missing key '" + key + "'");
  return j[key];
}

template <class S>
Mat2<S> mat2(const Json& j, const std::string& where) {
  array_of(j, 2, where);
  Mat2<S> m;
  for (std::size_t r = 0; r < 2; ++r) {
    const std::string row = child(where, r);
    array_of(j[r], 2, row);
    for (std::size_t c = 0; c < 2; ++c) m(r, c) = scalar<S>(j[r][c], child(row, c));
  }
  return m;
}

template <class S>
Json encode_mat2(const Mat2<S>& m) {
  return Json::array({Json::array({encode(m(0, 0)), encode(m(0, 1))}),
                      Json::array({encode(m(1, 0)), encode(m(1, 1))})});
}

template <class S>
PeriodicDeformation<S> deformation(const Json& j) {
  const Json& modes = array_of(member(j, "modes", ""), 0, "/modes");
  PeriodicDeformation<S> d;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string w = child("/modes", i);
    const Json& m = modes[i];
    SawtoothMode<S> mode;
    const Json& n = array_of(member(m, "n", w), 2, child(w, "n"));
    mode.frequency = {integer(n[0], child(w, "n/0")), integer(n[1], child(w, "n/1"))};
    mode.amplitude = Vec2<S>::Zero();
    if (m.contains("a")) {
      const Json& a = array_of(m["a"], 2, child(w, "a"));
      mode.amplitude = Vec2<S>(scalar<S>(a[0], child(w, "a/0")), scalar<S>(a[1], child(w, "a/1")));
    }
    if (m.contains("c")) {
      // phases enter the cell geometry and stay exact in both modes
      const Json& c = m["c"];
      if constexpr (is_exact_v<S>) {
        mode.phase = scalar<Rational>(c, child(w, "c"));
      } else {
        mode.phase = c.is_number() ? exact_from_double(c.get<double>())
                                   : scalar<Rational>(c, child(w, "c"));
      }
    }
    d.modes.push_back(mode);
  }
  try {
    check_deformation(d);
  } catch (const InputError& e) {
    fail("/modes", e.what());
  }
  return d;
}

template <class S>
Json encode_weights(const SignPatternMeasure<S>& m) {
  Json w = Json::object();
  for (SignPattern eps = 0; eps < m.weights.size(); ++eps) {
    w[pattern_to_string(eps, m.n)] = encode(m.weights[eps]);
  }
  return Json{{"n", m.n}, {"weights", w}, {"total", encode(m.total())}};
}

template <class S>
SplittingTree<S> tree(const Json& j, const std::string& where) {
  return SplittingTree<S>(node<S>(j, where));
}

template <class S>
Json encode_tree(const SplittingTree<S>& t) {
  return encode_node(*t.root());
}

template <class S>
MeasureForest<S> forest(const Json& j, const std::string& where) {
  const std::string cw = child(where, "components");
  const Json& comps = array_of(member(j, "components", where), 0, cw);
  MeasureForest<S> f;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string w = child(cw, i);
    f.components.push_back({scalar<S>(member(comps[i], "weight", w), child(w, "weight")),
                            tree<S>(member(comps[i], "tree", w), child(w, "tree"))});
  }
  return f;
}

template <class S>
Json encode_forest(const MeasureForest<S>& f) {
  Json comps = Json::array();
  for (const auto& c : f.components) {
    comps.push_back(Json{{"weight", encode(c.weight)}, {"tree", encode_tree(c.tree)}});
  }
  return Json{{"components", comps}};
}

template <class S>
Json encode_measure(const AtomicMeasure<S>& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) {
    atoms.push_back(Json{{"point", encode_mat2(a.point)}, {"weight", encode(a.weight)}});
  }
  return atoms;
}

Json encode_report(const TreeReport& r) {
  Json j{{"valid", r.valid}, {"order", r.order}, {"leaves", r.leaves}, {"depth", r.depth}};
  if (r.violation) {
    j["violation"] = Json{{"path", r.violation->path},
                          {"invariant", to_string(r.violation->invariant)},
                          {"residual", r.violation->residual}};
  }
  return j;
}

template <class S>
CubeFrame<S> frame(const Json& j) {
  const Json& cs = array_of(member(j, "C", ""), 3, "/C");
  const std::array<Mat2<S>, 3> c{mat2<S>(cs[0], "/C/0"), mat2<S>(cs[1], "/C/1"),
                                 mat2<S>(cs[2], "/C/2")};
  try {
    return build_frame<S>(c[0], c[1], c[2]);
  } catch (const InputError& e) {
    fail("/C", e.what());
  }
}

Json encode_frame(const Frame& f) {
  Json j;
  j["C"] = Json::array({encode_mat2(f.C[0]), encode_mat2(f.C[1]), encode_mat2(f.C[2])});
  j["raw"] = encode_coefficients(f.raw_a, f.raw_b, f.raw_c);
  j["normalization"] = Json{{"axis_sign", f.axis_sign}, {"det_flip", f.det_flip}};
  j["normalized"] = encode_coefficients(f.a, f.b, f.c);
  j["degenerate"] = f.degenerate;
  j["classes_swapped"] = f.classes_swapped();
  Json vertices = Json::object();
  for (SignPattern eps = 0; eps < 8; ++eps) vertices[pattern_to_string(eps, 3)] = encode_mat2(f.vertex(eps));
  j["vertices"] = vertices;
  if (f.degenerate) {
    j["case"] = to_string(ConstructionCase::Degenerate);
  } else {
    const auto s = vertex_det_signs(f);
    j["vertex_det_signs"] = s;
    const bool positive = s[0] > 0 || s[1] > 0 || s[2] > 0;
    j["case"] = to_string(positive ? ConstructionCase::Case2 : ConstructionCase::Case1);
  }
  return j;
}

Json encode_certificate(const LaminateCertificate& c) {
  Json j;
  j["schema_version"] = LaminateCertificate::kSchemaVersion;
  j["frame"] = encode_frame(c.frame);
  j["kind"] = to_string(c.kind);
  j["base"] = to_string(c.base);
  j["inverted"] = c.inverted;
  if (c.target_ratio) j["target_ratio"] = encode(*c.target_ratio);
  if (c.extremal_ratio) j["extremal_ratio"] = encode(*c.extremal_ratio);
  Json ratios = Json::array();
  for (const auto& r : c.component_ratios) ratios.push_back(encode(r));
  j["component_ratios"] = ratios;
  j["relabelings"] = c.relabelings;
  j["forest"] = encode_forest(c.forest);
  j["order"] = validate_forest(c.forest).order;
  j["flattened"] = encode_measure(c.flattened);
  Json vw = Json::object();
  for (SignPattern eps = 0; eps < 8; ++eps) vw[pattern_to_string(eps, 3)] = encode(c.vertex_weights[eps]);
  j["vertex_weights"] = vw;
  j["alpha"] = encode(c.alpha);
  j["beta"] = encode(c.beta);
  return j;
}

LaminateCertificate certificate(const Json& j) {
  const int version = static_cast<int>(integer(member(j, "schema_version", ""), "/schema_version"));
  if (version != LaminateCertificate::kSchemaVersion) {
    fail("/schema_version", "unsupported schema version " + std::to_string(version));
  }
  LaminateCertificate c;
  const Json& fj = member(j, "frame", "");
  c.frame = frame<Rational>(fj);
  if (fj.contains("normalization")) {
    const Json& n = fj["normalization"];
    if (n.value("axis_sign", Json()) != Json(c.frame.axis_sign) ||
        n.value("det_flip", Json()) != Json(c.frame.det_flip)) {
      throw ConstructionError("/frame/normalization: record differs from the recomputed one");
    }
  }
  if (j.contains("kind")) c.kind = construction_case(j["kind"], "/kind");
  if (j.contains("base")) c.base = construction_case(j["base"], "/base");
  if (j.contains("inverted")) c.inverted = j["inverted"].get<bool>();
  if (j.contains("target_ratio")) c.target_ratio = scalar<Rational>(j["target_ratio"], "/target_ratio");
  if (j.contains("extremal_ratio")) {
    c.extremal_ratio = scalar<Rational>(j["extremal_ratio"], "/extremal_ratio");
  }
  if (j.contains("component_ratios")) {
    const Json& r = array_of(j["component_ratios"], 0, "/component_ratios");
    for (std::size_t i = 0; i < r.size(); ++i) {
      c.component_ratios.push_back(scalar<Rational>(r[i], child("/component_ratios", i)));
    }
  }
  if (j.contains("relabelings")) c.relabelings = j["relabelings"].get<std::vector<std::string>>();

  Forest parsed = forest<Rational>(member(j, "forest", ""), "/forest");
  const TreeReport r = validate_forest(parsed);
  if (!r.valid) {
    throw ConstructionError("/forest: invalid splitting forest (" + to_string(r.violation->invariant) +
                            " at '" + r.violation->path + "')");
  }
  for (std::size_t i = 0; i < parsed.components.size(); ++i) {
    auto& comp = parsed.components[i];
    comp.tree = Tree(resolve_labels(comp.tree.root(), c.frame,
                                    "/forest/components/" + std::to_string(i) + "/tree"));
  }
  c.forest = parsed;
  c.flattened = flatten(c.forest).canonical();
  const auto vw = vertex_weights(c.forest);
  c.vertex_weights.fill(Rational(0));
  for (const auto& [eps, w] : *vw) c.vertex_weights[eps] += w;
  const auto sym = symmetry_of(c.vertex_weights);
  c.alpha = sym.alpha;
  c.beta = sym.beta;
  if ((j.contains("alpha") && scalar<Rational>(j["alpha"], "/alpha") != c.alpha) ||
      (j.contains("beta") && scalar<Rational>(j["beta"], "/beta") != c.beta)) {
    throw ConstructionError("stated alpha/beta differ from the flattened forest");
  }
  if (c.target_ratio && c.alpha != *c.target_ratio * c.beta) {
    throw ConstructionError("flattened ratio differs from the stated target");
  }
  c.check();
  return c;
}

Json encode_suite(const SuiteReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"function", row.function},
                        {"tag", to_string(row.tag)},
                        {"exact", row.exact},
                        {"margin", row.margin},
                        {"jensen_min_node_margin", row.jensen_min},
                        {"jensen_global_margin", row.jensen_global},
                        {"passed", row.passed}});
  }
  return Json{{"kind", to_string(r.kind)},
              {"base", to_string(r.base)},
              {"certificate_valid", r.certificate_valid},
              {"measure_matches", r.measure_matches},
              {"certificate_order", r.certificate_order},
              {"min_margin", r.min_margin},
              {"margins", rows},
              {"passed", r.passed()}};
}

#define CUBELAM_JSON_INSTANTIATE(S)                                                   \
  template Mat2<S> mat2<S>(const Json&, const std::string&);                         \
  template Json encode_mat2<S>(const Mat2<S>&);                                      \
  template PeriodicDeformation<S> deformation<S>(const Json&);                       \
  template Json encode_weights<S>(const SignPatternMeasure<S>&);                     \
  template SplittingTree<S> tree<S>(const Json&, const std::string&);                \
  template Json encode_tree<S>(const SplittingTree<S>&);                             \
  template MeasureForest<S> forest<S>(const Json&, const std::string&);              \
  template Json encode_forest<S>(const MeasureForest<S>&);                           \
  template Json encode_measure<S>(const AtomicMeasure<S>&);                          \
  template CubeFrame<S> frame<S>(const Json&);

CUBELAM_JSON_INSTANTIATE(Rational)
CUBELAM_JSON_INSTANTIATE(double)

}  // namespace cubelam::json
