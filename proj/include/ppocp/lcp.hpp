#pragma once

// Linear complementarity formulations of the projection problem and a
// Lemke complementary pivoting solver.
//
// Notation: the block matrix of the split quadratic form is called H here
// (it is the 2n x 2n matrix [[E, -E], [-E, E]] obtained from y = s - s').
// The letter D stays reserved for the set { y : <z_i, y> >= 1 }.
//
// Three instances w = M v + q, w, v >= 0, <w, v> = 0 are built:
//   PrimalSplit  k = 2n + m   min <x, Hx>, [-C | C] x >= e, x >= 0
//   WolfeKkt     k = m + 2    min <a, Ba>, e^T a >= 1, -e^T a >= -1, a >= 0
//   DualOrthant  k = m        M = B / 2, q = -e
// The KKT systems use nonstrict sign conditions.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "ppocp/core.hpp"
#include "ppocp/support_qp.hpp"

namespace ppocp {

struct CanonicalQP {
  Matrix H;  // 2n x 2n
  Matrix A;  // m x 2n, [-C | C]
  Vector b;  // m ones
  Vector p;  // 2n zeros

  /// y = s - s' for x = (s, s').
  Vector reconstruct_y(const Vector& x) const {
    const Index n = H.rows() / 2;
    return x.head(n) - x.tail(n);
  }
};

inline CanonicalQP canonicalize_primal(const Polyhedron& P) {
  const Index n = P.n();
  const Index m = P.m();
  const ConstraintSystem S = constraint_matrix(P);
  CanonicalQP qp;
  const Matrix E = Matrix::Identity(n, n);
  qp.H.resize(2 * n, 2 * n);
  qp.H << E, -E, -E, E;
  qp.A.resize(m, 2 * n);
  qp.A << -S.C, S.C;
  qp.b = Vector::Ones(m);
  qp.p = Vector::Zero(2 * n);
  return qp;
}

enum class LcpVariant { PrimalSplit, WolfeKkt, DualOrthant };

inline std::string_view variant_name(LcpVariant v) {
  switch (v) {
    case LcpVariant::PrimalSplit: return "primal-split";
    case LcpVariant::WolfeKkt: return "wolfe-kkt";
    case LcpVariant::DualOrthant: return "dual-orthant";
  }
  return "unknown";
}

struct LCPInstance {
  Matrix M;
  Vector q;
  Index k = 0;
  LcpVariant variant = LcpVariant::DualOrthant;
};

inline LCPInstance build_lcp(const Polyhedron& P, LcpVariant variant) {
  const Index n = P.n();
  const Index m = P.m();
  LCPInstance L;
  L.variant = variant;
  switch (variant) {
    case LcpVariant::PrimalSplit: {
      const CanonicalQP qp = canonicalize_primal(P);
      L.k = 2 * n + m;
      L.M = Matrix::Zero(L.k, L.k);
      L.M.topLeftCorner(2 * n, 2 * n) = 2.0 * qp.H;
      L.M.topRightCorner(2 * n, m) = -qp.A.transpose();
      L.M.bottomLeftCorner(m, 2 * n) = qp.A;
      L.q = Vector::Zero(L.k);
      L.q.tail(m) = -qp.b;
      break;
    }
    case LcpVariant::WolfeKkt: {
      const GramMatrix G = gram_matrix(P);
      L.k = m + 2;
      Matrix Ahat(2, m);
      Ahat.row(0).setOnes();
      Ahat.row(1).setConstant(-1.0);
      L.M = Matrix::Zero(L.k, L.k);
      L.M.topLeftCorner(m, m) = 2.0 * G.B;
      L.M.topRightCorner(m, 2) = -Ahat.transpose();
      L.M.bottomLeftCorner(2, m) = Ahat;
      L.q = Vector::Zero(L.k);
      L.q(m) = -1.0;
      L.q(m + 1) = 1.0;
      break;
    }
    case LcpVariant::DualOrthant: {
      const GramMatrix G = gram_matrix(P);
      L.k = m;
      L.M = 0.5 * G.B;
      L.q = -Vector::Ones(m);
      break;
    }
  }
  return L;
}

struct LCPOutcome {
  enum class Status { Solution, RayTermination };
  Status status = Status::Solution;
  Vector w;
  Vector v;
  long pivots = 0;

  bool solved() const { return status == Status::Solution; }
};

namespace detail {

// Dense Lemke tableau. Columns: w_0..w_{k-1}, v_0..v_{k-1}, z0, rhs. The w
// block holds the current basis inverse, which is what the lexicographic
// ratio test compares.
class LemkeTableau {
 public:
  explicit LemkeTableau(const LCPInstance& L)
      : k_(L.k), T_(Matrix::Zero(L.k, 2 * L.k + 2)), basis_(static_cast<std::size_t>(L.k)) {
    T_.leftCols(k_).setIdentity();
    T_.middleCols(k_, k_) = -L.M;
    T_.col(z0()).setConstant(-1.0);
    T_.col(rhs()) = L.q;
    for (Index i = 0; i < k_; ++i) basis_[static_cast<std::size_t>(i)] = i;
    const double scale = std::max(1.0, L.M.cwiseAbs().maxCoeff());
    pivot_tol_ = 1e-9 * scale;
  }

  Index z0() const { return 2 * k_; }
  Index rhs() const { return 2 * k_ + 1; }
  Index basic(Index row) const { return basis_[static_cast<std::size_t>(row)]; }

  static Index complement(Index var, Index k) { return var < k ? var + k : var - k; }

  /// Row achieving the lexicographic minimum ratio over rows with positive
  /// entries in `col`, or -1 if the column has none (ray).
  Index ratio_test(Index col) const {
    const double tol = std::max(pivot_tol_, 1e-9 * T_.col(col).cwiseAbs().maxCoeff());
    Index best = -1;
    for (Index i = 0; i < k_; ++i) {
      const double piv = T_(i, col);
      if (piv <= tol) continue;
      if (best < 0 || lex_less(i, best, col)) best = i;
    }
    // Let the covering variable leave whenever it ties for the minimum ratio.
    if (best >= 0) {
      const double rb = T_(best, rhs()) / T_(best, col);
      for (Index i = 0; i < k_; ++i) {
        if (basic(i) != z0() || T_(i, col) <= tol) continue;
        const double ri = T_(i, rhs()) / T_(i, col);
        if (ri <= rb + tie_tol(ri, rb)) return i;
      }
    }
    return best;
  }

  /// Initial row for z0: the most negative q (lexicographic ties).
  Index initial_row() const {
    Index best = 0;
    for (Index i = 1; i < k_; ++i) {
      const double a = T_(i, rhs());
      const double b = T_(best, rhs());
      if (a < b - tie_tol(a, b)) best = i;
    }
    return best;
  }

  void pivot(Index row, Index col) {
    const double piv = T_(row, col);
    T_.row(row) /= piv;
    for (Index i = 0; i < k_; ++i) {
      if (i == row) continue;
      const double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(row);
    }
    T_.col(col).setZero();
    T_(row, col) = 1.0;
    basis_[static_cast<std::size_t>(row)] = col;
  }

  /// No complementary pair has both members basic, and exactly one pair has
  /// neither when the covering variable is basic.
  void check_accounting() const {
    std::vector<int> count(static_cast<std::size_t>(k_), 0);
    bool cover_basic = false;
    for (Index var : basis_) {
      if (var == z0()) {
        cover_basic = true;
      } else {
        ++count[static_cast<std::size_t>(var < k_ ? var : var - k_)];
      }
    }
    int missing = 0;
    for (int c : count) {
      if (c > 1) throw InternalInconsistency("lemke: complementary pair with both members basic");
      if (c == 0) ++missing;
    }
    if (missing != (cover_basic ? 1 : 0)) {
      throw InternalInconsistency("lemke: basis is not almost complementary");
    }
  }

  Vector values_of(Index offset) const {
    Vector out = Vector::Zero(k_);
    for (Index i = 0; i < k_; ++i) {
      const Index var = basic(i);
      if (var >= offset && var < offset + k_) out(var - offset) = T_(i, rhs());
    }
    return out;
  }

  /// Current value of the covering variable, 0 when it is nonbasic.
  double cover_value() const {
    for (Index i = 0; i < k_; ++i)
      if (basic(i) == z0()) return T_(i, rhs());
    return 0.0;
  }

  void dump(std::ostream& os, long pivot_count) const {
    os << "lemke tableau after pivot " << pivot_count << '\n';
    for (Index i = 0; i < k_; ++i) {
      const Index var = basic(i);
      std::string name = var == z0() ? "z0"
                         : var < k_  ? "w" + std::to_string(var)
                                     : "v" + std::to_string(var - k_);
      os << "  " << name << " = " << T_(i, rhs()) << '\n';
    }
  }

 private:
  static double tie_tol(double a, double b) { return 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

  // Compare rows a and b by (rhs, basis-inverse row) / pivot entry.
  bool lex_less(Index a, Index b, Index col) const {
    const double pa = T_(a, col);
    const double pb = T_(b, col);
    const double ra = T_(a, rhs()) / pa;
    const double rb = T_(b, rhs()) / pb;
    if (ra < rb - tie_tol(ra, rb)) return true;
    if (ra > rb + tie_tol(ra, rb)) return false;
    for (Index j = 0; j < k_; ++j) {
      const double xa = T_(a, j) / pa;
      const double xb = T_(b, j) / pb;
      if (xa < xb - tie_tol(xa, xb)) return true;
      if (xa > xb + tie_tol(xa, xb)) return false;
    }
    return false;
  }

  Index k_;
  Matrix T_;
  std::vector<Index> basis_;
  double pivot_tol_;
};

}  // namespace detail

/// Lemke's method with covering vector e and lexicographic ratio test.
/// `debug`, when set, receives the basic solution after each pivot.
inline LCPOutcome lemke_solve(const LCPInstance& L, const ToleranceConfig& cfg = {},
                              std::ostream* debug = nullptr) {
  const Index k = L.k;
  if (L.M.rows() != k || L.M.cols() != k || L.q.size() != k) {
    throw DimensionMismatch("lemke_solve: inconsistent instance dimensions");
  }
  LCPOutcome out;
  if (k == 0 || L.q.minCoeff() >= 0) {
    out.v = Vector::Zero(k);
    out.w = L.q;
    return out;
  }
  detail::LemkeTableau tab(L);
  const long limit = 50 * static_cast<long>(k);
  const Index first = tab.initial_row();
  Index leaving = tab.basic(first);
  tab.pivot(first, tab.z0());
  out.pivots = 1;
  tab.check_accounting();
  if (debug) tab.dump(*debug, out.pivots);

  while (true) {
    const Index entering = detail::LemkeTableau::complement(leaving, k);
    const Index row = tab.ratio_test(entering);
    if (row < 0) {
      // A covering value below the feasibility tolerance means the basis
      // already solves the LCP with q perturbed by z0 e.
      if (tab.cover_value() <= cfg.feas_tol * std::max(1.0, L.q.cwiseAbs().maxCoeff())) break;
      out.status = LCPOutcome::Status::RayTermination;
      out.w = tab.values_of(0);
      out.v = tab.values_of(k);
      return out;
    }
    leaving = tab.basic(row);
    tab.pivot(row, entering);
    ++out.pivots;
    tab.check_accounting();
    if (debug) tab.dump(*debug, out.pivots);
    if (leaving == tab.z0()) break;
    if (out.pivots >= limit) throw PivotLimitExceeded("lemke_solve: pivot limit reached");
  }
  out.status = LCPOutcome::Status::Solution;
  out.v = tab.values_of(k).cwiseMax(0.0);
  out.w = L.M * out.v + L.q;
  return out;
}

namespace detail {

// Multipliers of the constraints <z_i, y> >= 1 at the min-norm y_bar, scaled
// to sum to one, are convex weights of rho = y_bar / |y_bar|^2.
inline std::optional<Vector> normalized_weights(const Vector& multipliers) {
  const Vector clipped = multipliers.cwiseMax(0.0);
  const double total = clipped.sum();
  if (!(total > 0)) return std::nullopt;
  return Vector(clipped / total);
}

}  // namespace detail

inline Route route_of(LcpVariant v) {
  switch (v) {
    case LcpVariant::PrimalSplit: return Route::LcpPrimal;
    case LcpVariant::WolfeKkt: return Route::LcpWolfe;
    case LcpVariant::DualOrthant: return Route::LcpDual;
  }
  return Route::LcpDual;
}

inline ProjectionResult extract_projection(const Polyhedron& P, const LCPInstance& L,
                                           const LCPOutcome& O, const ToleranceConfig& cfg = {}) {
  ProjectionResult res;
  res.route = route_of(L.variant);
  res.iterations = O.pivots;
  const Index n = P.n();
  const Index m = P.m();
  if (!O.solved()) {
    if (L.variant == LcpVariant::WolfeKkt) {
      throw InconsistentOutcome("extract_projection: the simplex LCP always has a solution");
    }
    res.rho = Vector::Zero(n);
    res.origin_inside = true;
  } else {
    switch (L.variant) {
      case LcpVariant::PrimalSplit: {
        const Vector y = O.v.head(n) - O.v.segment(n, n);
        res.rho = rho_from_ybar(y, cfg);
        res.alpha = detail::normalized_weights(O.v.tail(m));
        break;
      }
      case LcpVariant::WolfeKkt: {
        Vector alpha = O.v.head(m).cwiseMax(0.0);
        const double total = alpha.sum();
        if (!(total > 0)) throw InconsistentOutcome("extract_projection: empty simplex weights");
        alpha /= total;
        res.rho = P.vertices().transpose() * alpha;
        res.alpha = alpha;
        res.origin_inside = res.rho.squaredNorm() <= cfg.zero_tol;
        break;
      }
      case LcpVariant::DualOrthant: {
        const ConstraintSystem S = constraint_matrix(P);
        res.rho = rho_from_ybar(recover_primal(S, O.v), cfg);
        res.alpha = detail::normalized_weights(O.v);
        break;
      }
    }
  }
  res.distance = res.rho.norm();
  res.vi_min = vi_residuals(P, res.rho).minCoeff();
  if (res.vi_min < -10 * cfg.opt_tol) {
    throw InconsistentOutcome("extract_projection: recovered point fails the optimality check");
  }
  return res;
}

}  // namespace ppocp
