#pragma once

// Nonnegative least squares and the reduction of the dual problem to it.
//
// With A = C^T and a right-hand side b satisfying A^T b = 2e,
//
//   1/4 |Ax - b|^2 = 1/4 <x, C C^T x> - <e, x> + 1/4 |b|^2,
//
// so the NNLS minimizer is the dual minimizer u*, and y* = -1/2 C^T x*
// gives rho = y* / |y*|^2. The objective keeps the 1/4 scaling; the
// active-set solver minimizes |Ax - b|^2, which has the same argmin.

#include <algorithm>
#include <optional>
#include <vector>

#include "ppocp/core.hpp"
#include "ppocp/support_qp.hpp"

namespace ppocp {

struct NnlsProblem {
  Matrix A;
  Vector b;
};

struct QuadraticForm {
  Matrix Q;
  Vector p;
};

/// Q = A^T A, p = -1/2 A^T b, so 1/4 x^T Q x + p^T x = 1/4 |Ax - b|^2 - 1/4 |b|^2.
inline QuadraticForm qp_form(const NnlsProblem& N) {
  return {N.A.transpose() * N.A, -0.5 * (N.A.transpose() * N.b)};
}

/// Gradient of 1/4 |Ax - b|^2.
inline Vector nnls_gradient(const NnlsProblem& N, const Vector& x) {
  return 0.5 * (N.A.transpose() * (N.A * x - N.b));
}

/// Lawson-Hanson active-set method. Entering index is the largest negative
/// gradient coordinate, lowest index on ties. `iterations`, when set,
/// receives the number of outer iterations.
inline Vector nnls_solve(const NnlsProblem& N, const ToleranceConfig& cfg = {},
                         long* iterations = nullptr) {
  cfg.validate();
  const Index s = N.A.cols();
  if (N.A.rows() != N.b.size()) throw DimensionMismatch("nnls_solve: A and b disagree in rows");
  if (!N.A.allFinite() || !N.b.allFinite()) throw InvalidInstance("nnls_solve: non-finite data");

  Vector x = Vector::Zero(s);
  std::vector<bool> passive(static_cast<std::size_t>(s), false);
  std::vector<bool> excluded(static_cast<std::size_t>(s), false);

  auto solve_passive = [&]() {
    std::vector<Index> idx;
    for (Index j = 0; j < s; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Vector out = Vector::Zero(s);
    if (idx.empty()) return out;
    Matrix Ap(N.A.rows(), static_cast<Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<Index>(c)) = N.A.col(idx[c]);
    const Vector sol = Eigen::ColPivHouseholderQR<Matrix>(Ap).solve(N.b);
    for (std::size_t c = 0; c < idx.size(); ++c) out(idx[c]) = sol(static_cast<Index>(c));
    return out;
  };

  long outer = 0;
  while (true) {
    // w is the negative gradient of 1/2 |Ax - b|^2.
    const Vector w = N.A.transpose() * (N.b - N.A * x);
    Index enter = -1;
    for (Index j = 0; j < s; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (passive[uj] || excluded[uj] || !(w(j) > cfg.opt_tol)) continue;
      if (enter < 0 || w(j) > w(enter)) enter = j;
    }
    if (enter < 0) break;
    if (outer >= cfg.max_iter) {
      if (iterations) *iterations = outer;
      throw MaxIterExceeded<Vector>("nnls_solve: iteration limit reached", x);
    }
    ++outer;
    passive[static_cast<std::size_t>(enter)] = true;

    Vector z = solve_passive();
    if (z(enter) <= 0) {
      // Rounding made the entering coordinate useless; skip it until the
      // passive set changes.
      passive[static_cast<std::size_t>(enter)] = false;
      excluded[static_cast<std::size_t>(enter)] = true;
      continue;
    }
    std::fill(excluded.begin(), excluded.end(), false);

    // Inner loop: step back toward x until z is feasible, shrinking the
    // passive set by at least one index each round.
    for (Index guard = 0; guard <= s; ++guard) {
      double step = 1.0;
      Index blocking = -1;
      for (Index j = 0; j < s; ++j) {
        if (!passive[static_cast<std::size_t>(j)] || z(j) > 0) continue;
        const double denom = x(j) - z(j);
        const double ratio = denom > 0 ? x(j) / denom : 0.0;
        if (blocking < 0 || ratio < step) {
          step = std::min(step, ratio);
          blocking = j;
        }
      }
      if (blocking < 0) break;
      x += step * (z - x);
      x(blocking) = 0.0;
      const double scale = 1e-15 * (1.0 + x.cwiseAbs().maxCoeff());
      for (Index j = 0; j < s; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (passive[uj] && x(j) <= scale) {
          passive[uj] = false;
          x(j) = 0.0;
        }
      }
      z = solve_passive();
    }
    x = z.cwiseMax(0.0);
  }
  if (iterations) *iterations = outer;
  return x;
}

struct ReductionData {
  enum class Rule { Diagonal, Inverse, LeastSquares };
  bool applicable = false;
  std::optional<Vector> b;
  double residual = 0.0;
  Rule rule = Rule::LeastSquares;
};

/// A right-hand side b with C b = 2e, so that A = C^T satisfies A^T b = 2e.
inline ReductionData construct_b(const ConstraintSystem& S, const ToleranceConfig& cfg = {}) {
  const Matrix& C = S.C;
  const Vector target = 2.0 * S.e;
  ReductionData out;
  Vector b;
  const bool square = C.rows() == C.cols();
  const bool diagonal = square && C.isDiagonal(0.0) && (C.diagonal().array() != 0.0).all();
  if (diagonal) {
    out.rule = ReductionData::Rule::Diagonal;
    b = target.cwiseQuotient(C.diagonal());
  } else {
    bool solved = false;
    if (square) {
      Eigen::FullPivLU<Matrix> lu(C);
      if (lu.isInvertible()) {
        out.rule = ReductionData::Rule::Inverse;
        b = lu.solve(target);
        solved = true;
      }
    }
    if (!solved) {
      out.rule = ReductionData::Rule::LeastSquares;
      b = Eigen::CompleteOrthogonalDecomposition<Matrix>(C).solve(target);
    }
  }
  out.residual = (C * b - target).norm();
  out.applicable = out.residual <= cfg.feas_tol * (1.0 + S.e.norm());
  if (out.applicable) out.b = std::move(b);
  return out;
}

/// Projection through the NNLS reduction; nullopt when no b satisfies the
/// reduction's conditions.
inline std::optional<ProjectionResult> project_via_nnls(const Polyhedron& P,
                                                        const ToleranceConfig& cfg = {}) {
  const ConstraintSystem S = constraint_matrix(P);
  const ReductionData red = construct_b(S, cfg);
  if (!red.applicable) return std::nullopt;
  const NnlsProblem N{S.C.transpose(), *red.b};
  long iters = 0;
  const Vector x = nnls_solve(N, cfg, &iters);
  const Vector y = recover_primal(S, x);
  if (!(y.norm() > cfg.zero_tol)) {
    throw ZeroVector("project_via_nnls: recovered support vector vanishes (origin inside)");
  }
  ProjectionResult res;
  res.route = Route::Nnls;
  res.rho = rho_from_ybar(y, cfg);
  res.distance = res.rho.norm();
  res.iterations = iters;
  res.vi_min = vi_residuals(P, res.rho).minCoeff();
  if (x.sum() > 0) res.alpha = Vector(x / x.sum());
  return res;
}

}  // namespace ppocp
