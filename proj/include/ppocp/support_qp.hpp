#pragma once

// The dual route. The min-norm element y_bar of D = { y : <z_i, y> >= 1 }
// is the inversion of the projection, rho = y_bar / |y_bar|^2, and is
// recovered from the minimizer of
//
//   f(u) = 1/4 <u, C C^T u> - <e, u>,   u >= 0,
//
// through y_bar = -1/2 C^T u*. f is unbounded below exactly when D is empty,
// which happens exactly when the origin lies in the hull.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ppocp/core.hpp"

namespace ppocp {

/// y / |y|^2. Maps D into Omega and nonzero points of Omega into D.
inline Vector invert_support_vector(const Vector& y, const ToleranceConfig& cfg = {}) {
  const double norm = y.norm();
  if (!(norm > cfg.zero_tol)) throw ZeroVector("invert_support_vector: vector is (numerically) zero");
  return y / (norm * norm);
}

inline Vector rho_from_ybar(const Vector& y_bar, const ToleranceConfig& cfg = {}) {
  return invert_support_vector(y_bar, cfg);
}

struct DualValue {
  double value;
  Vector gradient;  // 1/2 C C^T u - e
};

/// f(u) and its gradient.
inline DualValue dual_objective(const ConstraintSystem& S, const Vector& u) {
  if (u.size() != S.C.rows()) throw DimensionMismatch("dual_objective: u has wrong size");
  if (!u.allFinite() || (u.size() > 0 && u.minCoeff() < 0)) {
    throw NegativeDualVariable("dual_objective: dual variables must be nonnegative");
  }
  const Vector Ctu = S.C.transpose() * u;
  return {0.25 * Ctu.squaredNorm() - S.e.dot(u), 0.5 * (S.C * Ctu) - S.e};
}

/// y_bar = -1/2 C^T u.
inline Vector recover_primal(const ConstraintSystem& S, const Vector& u) {
  if (u.size() != S.C.rows()) throw DimensionMismatch("recover_primal: u has wrong size");
  return -0.5 * (S.C.transpose() * u);
}

struct DualOutcome {
  enum class Status { Solved, UnboundedBelow };
  Status status = Status::Solved;
  Vector u_star;
  Vector y_bar;
  Vector rho;
  double f_star = 0.0;
  long iterations = 0;
  /// Nonnegative d with C^T d = 0 and e^T d > 0, when unboundedness was
  /// certified by a ray rather than by the iterate norm.
  std::optional<Vector> recession;

  bool solved() const { return status == Status::Solved; }
};

namespace detail {

inline double projected_gradient_norm(const Vector& u, const Vector& grad) {
  double sq = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    const double g = u(i) > 0 ? grad(i) : std::min(grad(i), 0.0);
    sq += g * g;
  }
  return std::sqrt(sq);
}

enum class FaceResult { None, Point, Ray };

// Solve 1/2 B_SS u_S = e_S on the support S = { u_i > 0 or grad_i < 0 }.
// Point: a nonnegative solution, returned in `out`. Ray: the system is
// inconsistent and the least-squares residual r = e_S + Cs y is a
// nonnegative direction with C^T r = 0 and e^T r > 0, so f decreases
// without bound along it; `out` holds r.
inline FaceResult face_candidate(const ConstraintSystem& S, const Vector& u, const Vector& grad,
                                 Vector& out) {
  std::vector<Index> face;
  for (Index i = 0; i < u.size(); ++i)
    if (u(i) > 0 || grad(i) < 0) face.push_back(i);
  if (face.empty()) return FaceResult::None;
  const Index k = static_cast<Index>(face.size());
  Matrix Cs(k, S.C.cols());
  for (Index r = 0; r < k; ++r) Cs.row(r) = S.C.row(face[static_cast<std::size_t>(r)]);
  // 1/2 Cs Cs^T u_S = e_S  <=>  Cs y = -e_S with y = -1/2 Cs^T u_S. Take the
  // min-norm y on the face, then the min-norm multipliers producing it.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_y(Cs);
  const Vector y = cod_y.solve(Vector::Constant(k, -1.0));
  if (!y.allFinite()) return FaceResult::None;
  const Vector res = (Cs * y).array() + 1.0;
  const double scale = std::max(1.0, Cs.cwiseAbs().maxCoeff());
  if (res.norm() > 1e-8 * std::sqrt(static_cast<double>(k))) {
    const Vector r = res.cwiseMax(0.0);
    if (res.minCoeff() < -1e-12 * res.norm()) return FaceResult::None;
    if ((Cs.transpose() * r).norm() > 1e-10 * scale * r.norm() || r.sum() <= 0) return FaceResult::None;
    out = Vector::Zero(u.size());
    for (Index i = 0; i < k; ++i) out(face[static_cast<std::size_t>(i)]) = r(i);
    return FaceResult::Ray;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod_u(Cs.transpose());
  const Vector us = cod_u.solve(-2.0 * y);
  if (!us.allFinite() || us.minCoeff() < -1e-12 * std::max(1.0, us.cwiseAbs().maxCoeff())) {
    return FaceResult::None;
  }
  out = Vector::Zero(u.size());
  for (Index r = 0; r < k; ++r) out(face[static_cast<std::size_t>(r)]) = std::max(0.0, us(r));
  return FaceResult::Point;
}

}  // namespace detail

/// Projected gradient on the nonnegative orthant with Barzilai-Borwein steps
/// and Armijo halving, started at u = 0. Every few iterations a Newton step
/// restricted to the current face is tried and kept if it lowers the
/// projected gradient.
inline DualOutcome solve_dual(const Polyhedron& P, const ToleranceConfig& cfg = {}) {
  cfg.validate();
  constexpr double kArmijo = 1e-4;
  constexpr double kMaxStep = 1e12;
  constexpr long kMonotoneWindow = 100;
  constexpr long kFaceEvery = 10;

  const ConstraintSystem S = constraint_matrix(P);
  const Index m = P.m();
  Vector u = Vector::Zero(m);
  DualValue cur = dual_objective(S, u);
  double step = 1.0 / std::max(1e-300, 0.5 * P.vertices().rowwise().squaredNorm().maxCoeff());
  long monotone_run = 0;
  long accepted_steps = 0;

  auto finish = [&](long it) {
    DualOutcome out;
    out.status = DualOutcome::Status::Solved;
    out.u_star = u;
    out.y_bar = recover_primal(S, u);
    out.rho = out.y_bar.norm() > cfg.zero_tol ? rho_from_ybar(out.y_bar, cfg)
                                              : Vector::Zero(P.n());
    out.f_star = cur.value;
    out.iterations = it;
    return out;
  };
  auto unbounded = [&](long it, std::optional<Vector> ray) {
    DualOutcome out;
    out.status = DualOutcome::Status::UnboundedBelow;
    out.u_star = u;
    out.iterations = it;
    out.recession = std::move(ray);
    return out;
  };
  // Returns true once the iterate has passed the cap with f strictly
  // decreasing over the last kMonotoneWindow accepted steps (all of them if
  // fewer were taken).
  auto accept = [&](Vector next_u, const DualValue& val) {
    monotone_run = val.value < cur.value ? monotone_run + 1 : 0;
    ++accepted_steps;
    u = std::move(next_u);
    cur = val;
    return u.norm() > cfg.unbounded_cap && monotone_run >= std::min(kMonotoneWindow, accepted_steps);
  };

  DualValue next_face{};
  long it = 0;
  for (; it < cfg.max_iter; ++it) {
    const double pg = detail::projected_gradient_norm(u, cur.gradient);
    if (pg <= cfg.opt_tol && u.squaredNorm() > 0) {
      // Polish on the identified face; keeps the iterate unless the exact
      // face solution is at least as stationary.
      Vector cand;
      if (detail::face_candidate(S, u, cur.gradient, cand) == detail::FaceResult::Point) {
        const DualValue val = dual_objective(S, cand);
        if (detail::projected_gradient_norm(cand, val.gradient) <= pg) {
          u = cand;
          cur = val;
        }
      }
      return finish(it);
    }

    Vector cand;
    detail::FaceResult kind = detail::FaceResult::None;
    auto face_improves = [&] {
      kind = detail::face_candidate(S, u, cur.gradient, cand);
      if (kind != detail::FaceResult::Point) return false;
      const DualValue val = dual_objective(S, cand);
      const double slack = 1e-12 * (1.0 + std::abs(cur.value));
      if (detail::projected_gradient_norm(cand, val.gradient) >= pg || val.value > cur.value + slack) return false;
      next_face = val;
      return true;
    };
    if (it % kFaceEvery == 0) {
      if (face_improves()) {
        if (accept(cand, next_face)) return unbounded(it, std::nullopt);
        continue;
      }
      if (kind == detail::FaceResult::Ray) return unbounded(it, cand);
    }

    // Armijo backtracking along the projection arc.
    double t = step;
    Vector trial;
    DualValue next{};
    bool found = false;
    for (int halving = 0; halving < 200; ++halving) {
      trial = (u - t * cur.gradient).cwiseMax(0.0);
      next = dual_objective(S, trial);
      if (next.value <= cur.value + kArmijo * cur.gradient.dot(trial - u)) {
        found = true;
        break;
      }
      t *= 0.5;
    }
    if (!found || trial == u) {
      // Rounding stalls the line search near the optimum; the face solution
      // may still be reachable.
      if (it % kFaceEvery == 0 || !face_improves()) break;
      if (accept(cand, next_face)) return unbounded(it, std::nullopt);
      continue;
    }
    const Vector sdiff = trial - u;
    const Vector ydiff = next.gradient - cur.gradient;
    if (accept(trial, next)) return unbounded(it, std::nullopt);
    const double sy = sdiff.dot(ydiff);
    step = sy > 0 ? std::min(kMaxStep, sdiff.squaredNorm() / sy) : kMaxStep;

    // f(s u) = a s^2 - b s is minimized at s = b / (2a).
    const double a = 0.25 * (S.C.transpose() * u).squaredNorm();
    const double b = u.sum();
    if (a > 0 && b > 0) {
      const double scale = b / (2.0 * a);
      if (std::abs(scale - 1.0) > 1e-12) {
        Vector scaled = scale * u;
        const DualValue val = dual_objective(S, scaled);
        if (val.value < cur.value && accept(std::move(scaled), val)) return unbounded(it, std::nullopt);
      }
    }
  }

  throw MaxIterExceeded<DualOutcome>(
      it < cfg.max_iter ? "solve_dual: line search failed" : "solve_dual: iteration limit reached",
      finish(it));
}

}  // namespace ppocp
