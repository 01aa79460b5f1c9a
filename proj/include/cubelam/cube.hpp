#pragma once

// Symmetric laminates on a rank-one cube with barycentre 0.
//
// All constructions are exact. Points are built in normalised frame
// coordinates and mapped to matrices through CubeFrame::point, so every
// certificate is validated in matrix space against the caller's C1, C2, C3.

#include "cubelam/frame.hpp"
#include "cubelam/hulls.hpp"
#include "cubelam/measures.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cubelam {

using Frame = CubeFrame<Rational>;
using Tree = SplittingTree<Rational>;
using Forest = MeasureForest<Rational>;

/// Coordinates relabelled so that a chosen global axis plays a fixed role.
/// Local coordinate j is global coordinate perm[j]; the local form is
/// a xy + b xz + c yz with the coefficients below.
struct LocalFrame {
  std::array<int, 3> perm{0, 1, 2};
  Rational a, b, c;

  Vec3q to_global(const Vec3q& local) const {
    Vec3q g;
    for (int j = 0; j < 3; ++j) g(perm[j]) = local(j);
    return g;
  }
  Rational form(const Vec3q& v) const { return a * v(0) * v(1) + b * v(0) * v(2) + c * v(1) * v(2); }
  std::string describe() const;
};

LocalFrame local_frame(const Frame& f, const std::array<int, 3>& perm);

/// Waypoints of the five-point witness for one axis. Coordinates are local:
/// X0 = (1,1,1), X1 = (-1,1,1), X2 = (1,-1,1), X3 = (1,1,-1), with X1 the
/// chosen axis and a <= b after the optional swap of the other two axes.
struct LemmaPData {
  int axis = 0;  // global axis 0,1,2
  LocalFrame local;
  Rational lambda, lambda1, lambda2, lambda3;
  Vec3q P, P1, P2, P3;
};

/// Requires a nondegenerate frame and det X_axis < 0 (strict).
LemmaPData lemma_p(const Frame& f, int axis);

struct WitnessOptions {
  int grid = 256;        // rank-one directions tried first
  int max_grid = 1024;   // fallback resolution
};

/// Where each half of the root split lands.
struct WitnessHit {
  int patch = 0;  // 0..3 for the four ruled patches
  Rational t, u, sigma;
};

struct Witness {
  Tree tree;                 // root 0, leaves on cube vertices (P split grafted)
  LemmaPData data;
  bool boundary = false;     // det X_axis = 0: direct split of 0 into +-X_axis
  Vec3q direction;           // local rank-one direction through 0
  std::optional<WitnessHit> plus, minus;
  int grid_index = -1;
  int grid_size = 0;
};

/// Constructive laminate with barycentre 0 supported on X0..X3, -X0, -X_axis.
/// Requires det X_axis <= 0.
Witness witness_origin(const Frame& f, int axis, const WitnessOptions& opt = {});

enum class ConstructionCase { Degenerate, Case1, Case2, Uniform, Combined };

std::string to_string(ConstructionCase c);

struct LaminateCertificate {
  static constexpr int kSchemaVersion = 1;

  Frame frame;
  Forest forest;
  AtomicMeasure<Rational> flattened;
  std::array<Rational, 8> vertex_weights{};  // by original label
  Rational alpha, beta;                      // original labels
  ConstructionCase kind = ConstructionCase::Uniform;
  ConstructionCase base = ConstructionCase::Uniform;
  /// nu(-X0)/nu(-Xk) in normalised labels for Case 1/2 constructions.
  std::optional<Rational> extremal_ratio;
  /// nu_i(-X0)/nu_i(-X_i) of each mixed component, in mixing order.
  std::vector<Rational> component_ratios;
  std::optional<Rational> target_ratio;      // requested alpha/beta
  bool inverted = false;                     // built on the centrally inverted cube
  std::vector<std::string> relabelings;

  Rational alpha_beta_ratio() const { return beta == 0 ? Rational(-1) : Rational(alpha / beta); }
  /// Validates the forest and the stored summaries; throws ConstructionError.
  void check() const;
};

/// Order-7 tree of three nested axis splits with weight 1/8 on every vertex.
Tree uniform_laminate(const Frame& f);

LaminateCertificate degenerate_laminate(const Frame& f, const Rational& alpha);
LaminateCertificate case1_laminate(const Frame& f, const WitnessOptions& opt = {});
LaminateCertificate case2_laminate(const Frame& f, const WitnessOptions& opt = {});

/// Case 1 or Case 2 depending on the signs of det X_i.
LaminateCertificate extremal_laminate(const Frame& f, const WitnessOptions& opt = {});

/// Symmetric laminate with alpha/beta = target, for target in [1/3, 3].
LaminateCertificate symmetric_laminate(const Frame& f, const Rational& target,
                                       const WitnessOptions& opt = {});

/// Signs of det X_1, det X_2, det X_3 in normalised coordinates.
std::array<int, 3> vertex_det_signs(const Frame& f);

}  // namespace cubelam
