#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "shocklab/euler.hpp"
#include "shocklab/indicator.hpp"
#include "shocklab/mesh.hpp"

namespace shocklab {

enum class LimiterKind { none, barth, venkatakrishnan, mlp, mlp_pw };

std::string_view to_string(LimiterKind k);
LimiterKind limiter_from_string(std::string_view s);

struct Limiter {
  LimiterKind kind = LimiterKind::none;
  double k = 1.0;  // Venkatakrishnan / MLP smoothness parameter, eps^2 = (K h)^3
};

void validate(const Limiter& lim);

/// Inverse-distance weighted least-squares gradients over face neighbours. With
/// `use_ghosts`, every boundary face contributes a ghost value located at the mirror image of
/// the volume centroid across the face.
class GradientOperator {
 public:
  GradientOperator(const Mesh& mesh, bool use_ghosts);

  /// `ghost_values` is indexed by face and read only at boundary faces; it may be empty when
  /// the operator was built without ghosts.
  void compute(std::span<const double> values, std::span<const double> ghost_values,
               std::span<Vec2> gradients) const;

  Vec2 ghost_point(int face) const;
  /// Volumes whose least-squares system was singular; their gradient is zero.
  int singular_volumes() const { return singular_; }

 private:
  const Mesh* mesh_;
  bool use_ghosts_;
  std::vector<Vec2> coef_left_;   // per face, weight of (right - left) in the left gradient
  std::vector<Vec2> coef_right_;  // per face, weight of (left - right) in the right gradient
  int singular_ = 0;
};

std::vector<Vec2> compute_gradients(const Mesh& mesh, std::span<const double> values);
std::vector<Vec2> compute_gradients(const Mesh& mesh, std::span<const double> values,
                                    std::span<const double> ghost_values);

/// Venkatakrishnan's smooth limiter function of the unlimited increment `d_minus` and the
/// admissible increment `d_plus` (same sign or zero), capped at 1.
double venkatakrishnan_function(double d_minus, double d_plus, double eps2);

/// Largest factor <= 1 keeping u + phi*d_minus within [u, u + d_plus] (hard clamp).
double clamp_ratio(double d_minus, double d_plus);

/// Everything a limiter needs to evaluate one control volume for one variable.
struct LimiterContext {
  double value = 0.0;
  Vec2 gradient;
  Vec2 centroid;
  double neighbor_min = 0.0;  // over face neighbours (and ghosts), including the volume itself
  double neighbor_max = 0.0;
  std::span<const Vec2> face_points;
  std::span<const double> face_lo;  // per face point: min(value, neighbour across that face)
  std::span<const double> face_hi;
  std::span<const Vec2> vertex_points;
  std::span<const double> vertex_min;  // per vertex: extremes of all volumes sharing it
  std::span<const double> vertex_max;
  double h = 1.0;  // mesh scale, sqrt(area)
};

double limiter_value(const Limiter& lim, const LimiterContext& ctx);

/// Strict condition: every face-point value stays between the two adjacent volume values.
double strict_mlp_value(const LimiterContext& ctx);

/// Blend of the strict and vertex (weak) conditions, w = 1 - omega_cell.
double mlp_pw_value(const LimiterContext& ctx, double k, double omega_cell);

/// Pressure-ratio weight of each volume for the pressure-weighted MLP: the minimum ratio over
/// its own faces and over every volume sharing one of its vertices.
std::vector<double> volume_pressure_weights(const Mesh& mesh, std::span<const double> pressures,
                                            const IndicatorOptions& opts);

/// Primitive variables per control volume in structure-of-arrays layout (rho, u, v, p).
struct PrimitiveField {
  std::array<std::vector<double>, 4> q;

  void resize(int n) {
    for (auto& c : q) c.resize(n);
  }
  int size() const { return static_cast<int>(q[0].size()); }
  Primitive at(int i) const { return {q[0][i], q[1][i], q[2][i], q[3][i]}; }
  void set(int i, const Primitive& s) {
    q[0][i] = s.rho;
    q[1][i] = s.u;
    q[2][i] = s.v;
    q[3][i] = s.p;
  }
};

/// Limiter factors for all four primitive variables over the mesh.
class LimiterEvaluator {
 public:
  explicit LimiterEvaluator(const Mesh& mesh);

  /// `ghosts` holds per-face ghost states (read at boundary faces); `omega_cell` is required
  /// for mlp_pw only.
  void evaluate(const Limiter& lim, const PrimitiveField& prim, const PrimitiveField& ghosts,
                const std::array<std::vector<Vec2>, 4>& grads, std::span<const double> omega_cell,
                std::array<std::vector<double>, 4>& phi) const;

 private:
  const Mesh* mesh_;
  std::vector<Vec2> face_points_;  // CSR over volume faces
  std::vector<Vec2> vertex_points_;
  std::vector<int> vertex_offsets_;
  std::vector<int> vertex_nodes_;
  std::vector<double> h_;
};

/// Face states from linear reconstruction u_f = u + phi * grad(u) . (x_f - x_c). States with
/// non-positive density or pressure fall back to first order on that face.
struct FaceStateField {
  PrimitiveField left;   // per face
  PrimitiveField right;  // per face; boundary faces hold the ghost state
  int fallbacks = 0;
};

using GhostFunction = std::function<Primitive(const Face&, const Primitive& interior)>;

void reconstruct_face_states(const Mesh& mesh, const PrimitiveField& prim,
                             const std::array<std::vector<Vec2>, 4>* grads,
                             const std::array<std::vector<double>, 4>* phi, const GhostFunction& ghost,
                             FaceStateField& out);

}  // namespace shocklab
