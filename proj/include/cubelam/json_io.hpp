#pragma once

// JSON encoding of scalars, matrices, measures, trees and certificates.
//
// Exact scalars are strings "p/q" (integers may also be JSON integers);
// float scalars are JSON numbers. Matrices are [[m11, m12], [m21, m22]].
// Decoding errors are InputError with the JSON pointer of the bad value.

#include "cubelam/cube.hpp"
#include "cubelam/hulls.hpp"
#include "cubelam/measures.hpp"
#include "cubelam/periodic.hpp"
#include "cubelam/verify.hpp"

#include <json.hpp>

#include <string>

namespace cubelam::json {

using Json = nlohmann::json;

/// Parses text; syntax errors carry the byte offset.
Json parse(const std::string& text);

template <class S>
S scalar(const Json& j, const std::string& where);
template <class S>
Json encode(const S& x);

template <class S>
Mat2<S> mat2(const Json& j, const std::string& where);
template <class S>
Json encode_mat2(const Mat2<S>& m);

/// Required member; throws InputError naming the missing key.
const Json& member(const Json& j, const std::string& key, const std::string& where);

// periodic deformations: {"modes": [{"a": [a1, a2], "n": [k, l], "c": "p/q"}]}
template <class S>
PeriodicDeformation<S> deformation(const Json& j);
template <class S>
Json encode_weights(const SignPatternMeasure<S>& m);

// trees: {"leaf": M, "vertex": "+-+"} or {"point": M, "lambda": s, "left": .., "right": ..}
template <class S>
SplittingTree<S> tree(const Json& j, const std::string& where);
template <class S>
Json encode_tree(const SplittingTree<S>& t);
/// {"components": [{"weight": s, "tree": ...}]}
template <class S>
MeasureForest<S> forest(const Json& j, const std::string& where);
template <class S>
Json encode_forest(const MeasureForest<S>& f);

template <class S>
Json encode_measure(const AtomicMeasure<S>& m);
Json encode_report(const TreeReport& r);

/// {"C": [C1, C2, C3]}
template <class S>
CubeFrame<S> frame(const Json& j);
Json encode_frame(const Frame& f);

Json encode_certificate(const LaminateCertificate& c);
/// Rebuilds a certificate from its JSON and re-derives every summary; the
/// embedded summaries must agree with the recomputed ones.
LaminateCertificate certificate(const Json& j);

Json encode_suite(const SuiteReport& r);

}  // namespace cubelam::json
