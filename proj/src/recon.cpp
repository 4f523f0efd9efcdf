#include "shocklab/recon.hpp"

#include <algorithm>
#include <cmath>

namespace shocklab {

std::string_view to_string(LimiterKind k) {
  switch (k) {
    case LimiterKind::none: return "none";
    case LimiterKind::barth: return "barth";
    case LimiterKind::venkatakrishnan: return "venkatakrishnan";
    case LimiterKind::mlp: return "mlp";
    case LimiterKind::mlp_pw: return "mlp_pw";
  }
  return "?";
}

LimiterKind limiter_from_string(std::string_view s) {
  for (LimiterKind k : {LimiterKind::none, LimiterKind::barth, LimiterKind::venkatakrishnan,
                        LimiterKind::mlp, LimiterKind::mlp_pw})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown limiter '" + std::string(s) + "'");
}

void validate(const Limiter& lim) {
  if (!(lim.k > 0.0)) throw std::invalid_argument("limiter parameter K must be positive");
}

// ---------------------------------------------------------------------------------------------

GradientOperator::GradientOperator(const Mesh& mesh, bool use_ghosts)
    : mesh_(&mesh), use_ghosts_(use_ghosts) {
  const int nv = mesh.num_volumes();
  const int nf = mesh.num_faces();
  // Per-volume normal matrix [a00 a01; a01 a11].
  std::vector<std::array<double, 3>> a(nv, {0.0, 0.0, 0.0});
  std::vector<Vec2> d_left(nf), d_right(nf);
  auto accumulate = [&](int v, Vec2 d) {
    const double w2 = 1.0 / dot(d, d);
    a[v][0] += w2 * d.x * d.x;
    a[v][1] += w2 * d.x * d.y;
    a[v][2] += w2 * d.y * d.y;
  };
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    const Vec2 xl = mesh.volumes[f.left].centroid;
    if (f.is_boundary()) {
      if (!use_ghosts_) continue;
      d_left[fi] = ghost_point(fi) - xl;
      accumulate(f.left, d_left[fi]);
    } else {
      d_left[fi] = mesh.volumes[f.right].centroid - xl;
      d_right[fi] = -d_left[fi];
      accumulate(f.left, d_left[fi]);
      accumulate(f.right, d_right[fi]);
    }
  }

  std::vector<std::array<double, 3>> inv(nv);
  std::vector<bool> singular(nv, false);
  for (int v = 0; v < nv; ++v) {
    const double det = a[v][0] * a[v][2] - a[v][1] * a[v][1];
    const double tr = a[v][0] + a[v][2];
    if (!(det > 1e-10 * tr * tr)) {
      singular[v] = true;
      ++singular_;
      inv[v] = {0.0, 0.0, 0.0};
    } else {
      inv[v] = {a[v][2] / det, -a[v][1] / det, a[v][0] / det};
    }
  }

  auto coefficient = [&](int v, Vec2 d) -> Vec2 {
    if (singular[v]) return {};
    const double w2 = 1.0 / dot(d, d);
    return {w2 * (inv[v][0] * d.x + inv[v][1] * d.y), w2 * (inv[v][1] * d.x + inv[v][2] * d.y)};
  };
  coef_left_.assign(nf, Vec2{});
  coef_right_.assign(nf, Vec2{});
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.is_boundary()) {
      if (use_ghosts_) coef_left_[fi] = coefficient(f.left, d_left[fi]);
    } else {
      coef_left_[fi] = coefficient(f.left, d_left[fi]);
      coef_right_[fi] = coefficient(f.right, d_right[fi]);
    }
  }
}

Vec2 GradientOperator::ghost_point(int face) const {
  const Face& f = mesh_->faces[face];
  const Vec2 xc = mesh_->volumes[f.left].centroid;
  return xc + (2.0 * dot(f.center - xc, f.normal)) * f.normal;
}

void GradientOperator::compute(std::span<const double> values, std::span<const double> ghost_values,
                               std::span<Vec2> gradients) const {
  std::fill(gradients.begin(), gradients.end(), Vec2{});
  const int nf = mesh_->num_faces();
  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh_->faces[fi];
    const double ul = values[f.left];
    if (f.is_boundary()) {
      if (use_ghosts_) gradients[f.left] += (ghost_values[fi] - ul) * coef_left_[fi];
    } else {
      const double du = values[f.right] - ul;
      gradients[f.left] += du * coef_left_[fi];
      gradients[f.right] += (-du) * coef_right_[fi];
    }
  }
}

std::vector<Vec2> compute_gradients(const Mesh& mesh, std::span<const double> values) {
  std::vector<Vec2> g(mesh.num_volumes());
  GradientOperator(mesh, false).compute(values, {}, g);
  return g;
}

std::vector<Vec2> compute_gradients(const Mesh& mesh, std::span<const double> values,
                                    std::span<const double> ghost_values) {
  std::vector<Vec2> g(mesh.num_volumes());
  GradientOperator(mesh, true).compute(values, ghost_values, g);
  return g;
}

// ---------------------------------------------------------------------------------------------

double venkatakrishnan_function(double d_minus, double d_plus, double eps2) {
  if (d_minus == 0.0) return 1.0;
  const double num = d_plus * d_plus + eps2 + 2.0 * d_minus * d_plus;
  const double den = d_plus * d_plus + 2.0 * d_minus * d_minus + d_minus * d_plus + eps2;
  return std::clamp(num / den, 0.0, 1.0);
}

double clamp_ratio(double d_minus, double d_plus) {
  if (d_minus == 0.0) return 1.0;
  return std::clamp(d_plus / d_minus, 0.0, 1.0);
}

namespace {

double eps2_of(double k, double h) {
  const double kh = k * h;
  return kh * kh * kh;
}

template <class Fn>
double over_faces(const LimiterContext& ctx, Fn&& fn) {
  double phi = 1.0;
  for (std::size_t i = 0; i < ctx.face_points.size(); ++i) {
    const double dm = dot(ctx.gradient, ctx.face_points[i] - ctx.centroid);
    const double dp = dm > 0.0 ? ctx.neighbor_max - ctx.value : ctx.neighbor_min - ctx.value;
    phi = std::min(phi, fn(dm, dp));
  }
  return phi;
}

double mlp_vertex_value(const LimiterContext& ctx, double eps2) {
  double phi = 1.0;
  for (std::size_t i = 0; i < ctx.vertex_points.size(); ++i) {
    const double dm = dot(ctx.gradient, ctx.vertex_points[i] - ctx.centroid);
    const double dp = dm > 0.0 ? ctx.vertex_max[i] - ctx.value : ctx.vertex_min[i] - ctx.value;
    phi = std::min(phi, venkatakrishnan_function(dm, dp, eps2));
  }
  return phi;
}

}  // namespace

double strict_mlp_value(const LimiterContext& ctx) {
  double phi = 1.0;
  for (std::size_t i = 0; i < ctx.face_points.size(); ++i) {
    const double dm = dot(ctx.gradient, ctx.face_points[i] - ctx.centroid);
    const double dp = dm > 0.0 ? ctx.face_hi[i] - ctx.value : ctx.face_lo[i] - ctx.value;
    phi = std::min(phi, clamp_ratio(dm, dp));
  }
  return phi;
}

double limiter_value(const Limiter& lim, const LimiterContext& ctx) {
  switch (lim.kind) {
    case LimiterKind::none: return 1.0;
    case LimiterKind::barth: return over_faces(ctx, clamp_ratio);
    case LimiterKind::venkatakrishnan: {
      const double eps2 = eps2_of(lim.k, ctx.h);
      return over_faces(ctx, [eps2](double dm, double dp) { return venkatakrishnan_function(dm, dp, eps2); });
    }
    case LimiterKind::mlp: return mlp_vertex_value(ctx, eps2_of(lim.k, ctx.h));
    case LimiterKind::mlp_pw: return mlp_pw_value(ctx, lim.k, 1.0);
  }
  return 1.0;
}

double mlp_pw_value(const LimiterContext& ctx, double k, double omega_cell) {
  const double weak = mlp_vertex_value(ctx, eps2_of(k, ctx.h));
  const double w = 1.0 - omega_cell;
  if (w <= 0.0) return weak;
  return w * strict_mlp_value(ctx) + (1.0 - w) * weak;
}

std::vector<double> volume_pressure_weights(const Mesh& mesh, std::span<const double> pressures,
                                            const IndicatorOptions& opts) {
  std::vector<double> ratios;
  std::vector<double> out;
  std::vector<double> omega;
  face_weights(mesh, pressures, opts, ratios, out, omega);
  for (int v = 0; v < mesh.num_volumes(); ++v) {
    const double pv = pressures[v];
    double w = out[v];
    for (int n : mesh.polygons[v])
      for (int k : mesh.volumes_at(n)) {
        double r = face_pressure_ratio(pv, pressures[k]);
        if (opts.exponent != 1.0) r = std::pow(r, opts.exponent);
        w = std::min(w, r);
      }
    out[v] = w;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

LimiterEvaluator::LimiterEvaluator(const Mesh& mesh) : mesh_(&mesh) {
  face_points_.reserve(mesh.volume_faces.size());
  for (int fi : mesh.volume_faces) face_points_.push_back(mesh.faces[fi].center);
  vertex_offsets_.assign(1, 0);
  for (const auto& poly : mesh.polygons) {
    for (int n : poly) {
      vertex_nodes_.push_back(n);
      vertex_points_.push_back(mesh.nodes[n]);
    }
    vertex_offsets_.push_back(static_cast<int>(vertex_nodes_.size()));
  }
  h_.reserve(mesh.num_volumes());
  for (const auto& cv : mesh.volumes) h_.push_back(std::sqrt(cv.area));
}

void LimiterEvaluator::evaluate(const Limiter& lim, const PrimitiveField& prim, const PrimitiveField& ghosts,
                                const std::array<std::vector<Vec2>, 4>& grads,
                                std::span<const double> omega_cell,
                                std::array<std::vector<double>, 4>& phi) const {
  const Mesh& mesh = *mesh_;
  const int nv = mesh.num_volumes();
  for (auto& p : phi) p.assign(nv, 1.0);
  if (lim.kind == LimiterKind::none) return;
  if (lim.kind == LimiterKind::mlp_pw && static_cast<int>(omega_cell.size()) != nv)
    throw std::invalid_argument("mlp_pw limiter needs a per-volume pressure weight");

  const bool need_vertex = lim.kind == LimiterKind::mlp || lim.kind == LimiterKind::mlp_pw;
  std::vector<double> node_min, node_max;
  std::vector<double> face_lo, face_hi, vmin, vmax;

  for (int var = 0; var < 4; ++var) {
    const auto& u = prim.q[var];
    const auto& ug = ghosts.q[var];
    if (need_vertex) {
      node_min.assign(mesh.num_nodes(), 0.0);
      node_max.assign(mesh.num_nodes(), 0.0);
      for (int n = 0; n < mesh.num_nodes(); ++n) {
        const auto vols = mesh.volumes_at(n);
        if (vols.empty()) continue;
        double lo = u[vols[0]], hi = lo;
        for (int k : vols) {
          lo = std::min(lo, u[k]);
          hi = std::max(hi, u[k]);
        }
        node_min[n] = lo;
        node_max[n] = hi;
      }
    }
    for (int v = 0; v < nv; ++v) {
      const auto faces = mesh.faces_of(v);
      const double uv = u[v];
      face_lo.resize(faces.size());
      face_hi.resize(faces.size());
      double lo = uv, hi = uv;
      for (std::size_t i = 0; i < faces.size(); ++i) {
        const Face& f = mesh.faces[faces[i]];
        const double other = f.is_boundary() ? ug[faces[i]] : u[f.left == v ? f.right : f.left];
        face_lo[i] = std::min(uv, other);
        face_hi[i] = std::max(uv, other);
        lo = std::min(lo, other);
        hi = std::max(hi, other);
      }
      LimiterContext ctx;
      ctx.value = uv;
      ctx.gradient = grads[var][v];
      ctx.centroid = mesh.volumes[v].centroid;
      ctx.neighbor_min = lo;
      ctx.neighbor_max = hi;
      const int fo = mesh.volume_face_offsets[v];
      ctx.face_points = {face_points_.data() + fo, faces.size()};
      ctx.face_lo = face_lo;
      ctx.face_hi = face_hi;
      ctx.h = h_[v];
      if (need_vertex) {
        const int b = vertex_offsets_[v], e = vertex_offsets_[v + 1];
        vmin.resize(e - b);
        vmax.resize(e - b);
        for (int i = b; i < e; ++i) {
          vmin[i - b] = node_min[vertex_nodes_[i]];
          vmax[i - b] = node_max[vertex_nodes_[i]];
        }
        ctx.vertex_points = {vertex_points_.data() + b, static_cast<std::size_t>(e - b)};
        ctx.vertex_min = vmin;
        ctx.vertex_max = vmax;
      }
      phi[var][v] = lim.kind == LimiterKind::mlp_pw ? mlp_pw_value(ctx, lim.k, omega_cell[v])
                                                    : limiter_value(lim, ctx);
    }
  }
}

// ---------------------------------------------------------------------------------------------

void reconstruct_face_states(const Mesh& mesh, const PrimitiveField& prim,
                             const std::array<std::vector<Vec2>, 4>* grads,
                             const std::array<std::vector<double>, 4>* phi, const GhostFunction& ghost,
                             FaceStateField& out) {
  const int nf = mesh.num_faces();
  out.left.resize(nf);
  out.right.resize(nf);
  out.fallbacks = 0;

  auto extrapolate = [&](int v, Vec2 x) {
    Primitive s = prim.at(v);
    if (!grads) return s;
    const Vec2 dx = x - mesh.volumes[v].centroid;
    double q[4] = {s.rho, s.u, s.v, s.p};
    for (int k = 0; k < 4; ++k) {
      const double lim = phi ? (*phi)[k][v] : 1.0;
      q[k] += lim * dot((*grads)[k][v], dx);
    }
    return Primitive{q[0], q[1], q[2], q[3]};
  };
  auto admissible = [](const Primitive& s) { return s.rho > 0.0 && s.p > 0.0; };

  for (int fi = 0; fi < nf; ++fi) {
    const Face& f = mesh.faces[fi];
    Primitive l = extrapolate(f.left, f.center);
    Primitive r = f.is_boundary() ? ghost(f, l) : extrapolate(f.right, f.center);
    if (grads && !(admissible(l) && admissible(r))) {
      ++out.fallbacks;
      l = prim.at(f.left);
      r = f.is_boundary() ? ghost(f, l) : prim.at(f.right);
    }
    out.left.set(fi, l);
    out.right.set(fi, r);
  }
}

}  // namespace shocklab
