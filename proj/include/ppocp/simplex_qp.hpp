#pragma once

// Minimize <alpha, B alpha> over the standard simplex and recover
// rho = sum_i alpha_i z_i.
//
// Frank-Wolfe with away steps. The linear minimization oracle over the
// simplex is the argmin vertex of the support value at rho. After every
// step the iterate is improved on its current support by moving toward the
// minimum-norm point of the support's affine hull (clipped at the simplex
// boundary), which gives finite identification of the optimal face.

#include <algorithm>
#include <functional>
#include <vector>

#include "ppocp/core.hpp"

namespace ppocp {

struct SimplexSolution {
  Vector alpha;
  Vector rho;
  double phi = 0.0;
  double gap = 0.0;
  long iterations = 0;
  bool origin_inside = false;
};

namespace detail {

inline void require_simplex(const Vector& alpha, Index m, double feas_tol, const char* who) {
  if (alpha.size() != m) throw DimensionMismatch(std::string(who) + ": weight vector has wrong size");
  if (!alpha.allFinite() || alpha.minCoeff() < -feas_tol ||
      std::abs(alpha.sum() - 1.0) > feas_tol) {
    throw SimplexViolation(std::string(who) + ": weights are not on the standard simplex");
  }
}

}  // namespace detail

/// phi(alpha) = <alpha, B alpha>.
inline double phi(const Polyhedron& P, const Vector& alpha, const ToleranceConfig& cfg = {}) {
  detail::require_simplex(alpha, P.m(), cfg.feas_tol, "phi");
  const GramMatrix G = gram_matrix(P);
  return alpha.dot(G.B * alpha);
}

/// <alpha, B alpha> - min_i (B alpha)_i. Nonpositive exactly at optimal alpha.
inline double optimality_gap(const Polyhedron& P, const Vector& alpha,
                             const ToleranceConfig& cfg = {}) {
  detail::require_simplex(alpha, P.m(), cfg.feas_tol, "optimality_gap");
  const GramMatrix G = gram_matrix(P);
  const Vector Ba = G.B * alpha;
  return alpha.dot(Ba) - Ba.minCoeff();
}

namespace detail {

class WolfeState {
 public:
  explicit WolfeState(const Polyhedron& P) : P_(P), alpha_(Vector::Constant(P.m(), 1.0 / P.m())) {
    refresh();
  }

  const Vector& alpha() const { return alpha_; }
  const Vector& rho() const { return rho_; }
  double objective() const { return rho_.squaredNorm(); }

  double gap() const { return objective() - (P_.vertices() * rho_).minCoeff(); }

  /// One Frank-Wolfe or away step with exact line search. Returns false if
  /// no descent direction exists.
  bool step() {
    const Vector g = P_.vertices() * rho_;
    const double obj = objective();
    Index s = 0;
    g.minCoeff(&s);
    Index a = -1;
    for (Index i = 0; i < alpha_.size(); ++i) {
      if (alpha_(i) > 0 && (a < 0 || g(i) > g(a))) a = i;
    }
    const double fw_gap = obj - g(s);
    const double away_gap = g(a) - obj;
    Vector dir_rho;
    double max_step;
    bool toward = true;
    if (fw_gap >= away_gap || alpha_(a) >= 1.0) {
      if (fw_gap <= 0) return false;
      dir_rho = P_.vertex(s) - rho_;
      max_step = 1.0;
    } else {
      if (away_gap <= 0) return false;
      toward = false;
      dir_rho = rho_ - P_.vertex(a);
      max_step = alpha_(a) / (1.0 - alpha_(a));
    }
    const double curvature = dir_rho.squaredNorm();
    double t = max_step;
    if (curvature > 0) t = std::clamp(-rho_.dot(dir_rho) / curvature, 0.0, max_step);
    if (t <= 0) return false;
    if (toward) {
      alpha_ *= (1.0 - t);
      alpha_(s) += t;
    } else {
      alpha_ *= (1.0 + t);
      alpha_(a) -= t;
      if (t == max_step) alpha_(a) = 0.0;
    }
    refresh();
    return true;
  }

  /// Wolfe minor cycles: move toward the affine minimizer on the support,
  /// dropping vertices whose weights reach zero, until the minimizer is
  /// inside the simplex face.
  void correct() {
    for (Index guard = 0; guard <= alpha_.size(); ++guard) {
      std::vector<Index> support;
      for (Index i = 0; i < alpha_.size(); ++i)
        if (alpha_(i) > 0) support.push_back(i);
      if (support.size() < 2) return;
      const AffinePoint target = affine_min_norm(P_, support);
      const double before = objective();
      if (target.point.squaredNorm() > before) return;
      double theta = 1.0;
      Index blocking = -1;
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double w = target.weights(static_cast<Index>(k));
        const double a = alpha_(support[k]);
        if (w < 0) {
          const double ratio = a / (a - w);
          if (ratio < theta) {
            theta = ratio;
            blocking = support[k];
          }
        }
      }
      const Vector saved = alpha_;
      for (std::size_t k = 0; k < support.size(); ++k) {
        const Index i = support[k];
        alpha_(i) += theta * (target.weights(static_cast<Index>(k)) - alpha_(i));
        if (alpha_(i) < 0) alpha_(i) = 0.0;
      }
      if (blocking >= 0) alpha_(blocking) = 0.0;
      alpha_ /= alpha_.sum();
      refresh();
      if (objective() > before) {
        alpha_ = saved;
        refresh();
        return;
      }
      if (blocking < 0) return;
    }
  }

  void finalize() {
    alpha_ = alpha_.cwiseMax(0.0);
    alpha_ /= alpha_.sum();
    refresh();
  }

 private:
  void refresh() { rho_ = P_.vertices().transpose() * alpha_; }

  const Polyhedron& P_;
  Vector alpha_;
  Vector rho_;
};

}  // namespace detail

/// `on_iterate`, when set, receives the objective after every accepted step.
inline SimplexSolution solve_wolfe(const Polyhedron& P, const ToleranceConfig& cfg = {},
                                   const std::function<void(double)>& on_iterate = {}) {
  cfg.validate();
  detail::WolfeState state(P);
  auto snapshot = [&](long iterations) {
    SimplexSolution sol;
    sol.alpha = state.alpha();
    sol.rho = state.rho();
    sol.phi = sol.rho.squaredNorm();
    sol.gap = state.gap();
    sol.iterations = iterations;
    sol.origin_inside = sol.phi <= cfg.zero_tol;
    return sol;
  };
  state.correct();
  if (on_iterate) on_iterate(state.objective());
  long it = 0;
  while (state.gap() > cfg.opt_tol) {
    if (it >= cfg.max_iter) {
      state.finalize();
      throw MaxIterExceeded<SimplexSolution>("solve_wolfe: iteration limit reached", snapshot(it));
    }
    ++it;
    if (!state.step()) {
      state.finalize();
      throw MaxIterExceeded<SimplexSolution>("solve_wolfe: no descent direction but gap above tolerance",
                                             snapshot(it));
    }
    state.correct();
    if (on_iterate) on_iterate(state.objective());
  }
  state.finalize();
  return snapshot(it);
}

}  // namespace ppocp
