#pragma once

// max over |c| <= 1 of t_L(c) = min_i <c, z_i>. For 0 outside the hull the
// maximizer c_hat is the unit direction of the projection and t_L(c_hat) is
// the distance, so rho = t_L(c_hat) c_hat; otherwise the optimum is 0 and
// rho = 0.
//
// Projected supergradient ascent on the unit ball, with periodic face
// refinement: vertices are ranked by <c, z_i> at the current and best
// iterates, and for each prefix of that ranking the minimum-norm point x of
// the prefix's affine hull is formed. When x is a convex combination it lies
// in the hull, so t_L(c) <= t* <= |x| for every c; c = x/|x| closing this gap
// certifies optimality, and |x| ~ 0 certifies that the origin is inside.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "ppocp/core.hpp"

namespace ppocp {

struct MaximinSolution {
  Vector c_hat;
  double t_value = 0.0;
  Vector rho;
  long iterations = 0;
  bool origin_inside = false;
  /// Convex weights of a hull point closing the duality gap, when one was found.
  std::optional<Vector> alpha_witness;
};

/// rho = t c_hat when t is positive, else the origin.
inline Vector projection_from_maximin(const Vector& c_hat, double t_value,
                                      const ToleranceConfig& cfg = {}) {
  if (t_value > cfg.zero_tol) return c_hat * t_value;
  return Vector::Zero(c_hat.size());
}

namespace detail {

struct MaximinCandidate {
  Vector c;
  double t;
  std::optional<Vector> weights;
  bool certified = false;
  bool zero_certified = false;
};

inline std::optional<MaximinCandidate> refine_faces(const Polyhedron& P, const Vector& c,
                                                    const ToleranceConfig& cfg) {
  const Vector values = P.vertices() * c;
  std::vector<Index> order(static_cast<std::size_t>(P.m()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });
  const std::size_t max_prefix = std::min<std::size_t>(order.size(), static_cast<std::size_t>(P.n()) + 2);

  std::optional<MaximinCandidate> best;
  std::vector<Index> prefix;
  for (std::size_t len = 1; len <= max_prefix; ++len) {
    prefix.push_back(order[len - 1]);
    const AffinePoint ap = affine_min_norm(P, prefix);
    if (!ap.weights.allFinite() || ap.weights.minCoeff() < -1e-12) continue;
    Vector alpha = Vector::Zero(P.m());
    for (std::size_t k = 0; k < prefix.size(); ++k)
      alpha(prefix[k]) = std::max(0.0, ap.weights(static_cast<Index>(k)));
    alpha /= alpha.sum();
    const Vector x = P.vertices().transpose() * alpha;
    const double norm = x.norm();
    MaximinCandidate cand;
    cand.weights = alpha;
    if (norm <= cfg.zero_tol) {
      cand.c = Vector::Zero(P.n());
      cand.t = 0.0;
      cand.zero_certified = true;
      return cand;
    }
    cand.c = x / norm;
    cand.t = support_value(P, cand.c).value;
    cand.certified = norm - cand.t <= cfg.opt_tol;
    if (!best || cand.t > best->t) best = std::move(cand);
    if (best->certified) return best;
  }
  return best;
}

}  // namespace detail

inline MaximinSolution solve_maximin(const Polyhedron& P, const ToleranceConfig& cfg = {}) {
  cfg.validate();
  const Index n = P.n();
  const double G = P.max_vertex_norm();

  auto make = [&](const Vector& c, double t, long it, std::optional<Vector> w, bool inside) {
    MaximinSolution sol;
    sol.iterations = it;
    sol.alpha_witness = std::move(w);
    if (inside || t <= cfg.zero_tol) {
      sol.c_hat = inside ? Vector::Zero(n) : c;
      sol.t_value = inside ? 0.0 : std::max(t, 0.0);
      sol.origin_inside = true;
    } else {
      // t_L is positively homogeneous, so a positive value improves on the sphere.
      sol.c_hat = c / c.norm();
      sol.t_value = support_value(P, sol.c_hat).value;
    }
    sol.rho = projection_from_maximin(sol.c_hat, sol.t_value, cfg);
    return sol;
  };

  if (G == 0.0) return make(Vector::Zero(n), 0.0, 0, Vector::Ones(P.m()) / P.m(), true);

  // c = 0 is always feasible with value 0.
  Vector best_c = Vector::Zero(n);
  double best_t = 0.0;
  std::optional<Vector> best_w;

  const Vector centroid = P.vertices().colwise().mean().transpose();
  Vector c = centroid.norm() > 0 ? Vector(centroid / centroid.norm()) : Vector(Vector::Zero(n));

  auto consider = [&](const detail::MaximinCandidate& cand) {
    if (cand.t > best_t) {
      best_c = cand.c;
      best_t = cand.t;
      best_w = cand.weights;
    }
  };

  long next_refine = 1;
  for (long k = 1; k <= cfg.max_iter; ++k) {
    const SupportValue sv = support_value(P, c);
    if (sv.value > best_t) {
      best_c = c;
      best_t = sv.value;
      best_w.reset();
    }
    if (k == next_refine) {
      next_refine = k + std::max<long>(50, k / 20);
      for (const Vector* probe : {&c, &best_c}) {
        if (auto cand = detail::refine_faces(P, *probe, cfg)) {
          if (cand->zero_certified) return make(cand->c, 0.0, k, cand->weights, true);
          consider(*cand);
          if (cand->certified) return make(cand->c, cand->t, k, cand->weights, false);
        }
      }
    }
    c += P.vertex(sv.index) / (G * std::sqrt(static_cast<double>(k)));
    const double norm = c.norm();
    if (norm > 1.0) c /= norm;
  }

  // No positive support value anywhere: the optimum is zero.
  if (best_t <= cfg.zero_tol) return make(best_c, best_t, cfg.max_iter, best_w, false);
  throw MaxIterExceeded<MaximinSolution>("solve_maximin: iteration limit reached",
                                         make(best_c, best_t, cfg.max_iter, best_w, false));
}

/// The cone of directions with positive support value is nonempty exactly
/// when the origin is strictly separated from the hull.
inline bool cone_nonempty(const Polyhedron& P, const ToleranceConfig& cfg = {}) {
  return solve_maximin(P, cfg).t_value > cfg.zero_tol;
}

}  // namespace ppocp
