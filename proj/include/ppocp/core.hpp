#pragma once

// Instance representation and the shared computations every projection
// route relies on: derived matrices, support values, variational-inequality
// residuals and the membership predicates for the sets D and Omega.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppocp/errors.hpp"

namespace ppocp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

struct ToleranceConfig {
  double feas_tol = 1e-9;
  double opt_tol = 1e-8;
  double zero_tol = 1e-8;
  long max_iter = 100000;
  double unbounded_cap = 1e8;

  void validate() const {
    if (!(feas_tol > 0) || !(opt_tol > 0) || !(zero_tol > 0) || max_iter <= 0 ||
        !(unbounded_cap > 0)) {
      throw InvalidInstance("all tolerances and limits must be positive");
    }
  }
};

/// Convex hull of finitely many points. Row i of vertices() is z_i; the row
/// order is the stable vertex numbering.
class Polyhedron {
 public:
  explicit Polyhedron(Matrix vertices) : vertices_(std::move(vertices)) { validate(); }

  explicit Polyhedron(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidInstance("polyhedron needs at least one vertex");
    const std::size_t n = rows.front().size();
    vertices_.resize(static_cast<Index>(rows.size()), static_cast<Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != n) {
        throw InvalidInstance("vertex " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " coordinates, expected " +
                              std::to_string(n));
      }
      for (std::size_t j = 0; j < n; ++j) {
        vertices_(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
      }
    }
    validate();
  }

  Index m() const noexcept { return vertices_.rows(); }
  Index n() const noexcept { return vertices_.cols(); }

  const Matrix& vertices() const noexcept { return vertices_; }
  auto vertex(Index i) const { return vertices_.row(i).transpose(); }

  /// Largest vertex norm; zero for the one-point hull {0}.
  double max_vertex_norm() const { return vertices_.rowwise().norm().maxCoeff(); }

  /// Warnings gathered at construction (for instance, duplicate vertices).
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  void validate() {
    if (vertices_.rows() < 1) throw InvalidInstance("polyhedron needs at least one vertex");
    if (vertices_.cols() < 1) throw InvalidInstance("vertices must have dimension >= 1");
    if (!vertices_.allFinite()) throw InvalidInstance("vertex coordinates must be finite");
    for (Index i = 0; i < vertices_.rows(); ++i) {
      for (Index j = 0; j < i; ++j) {
        if (vertices_.row(i) == vertices_.row(j)) {
          diagnostics_.push_back("duplicate vertex: " + std::to_string(i) +
                                 " repeats vertex " + std::to_string(j));
          break;
        }
      }
    }
  }

  Matrix vertices_;
  std::vector<std::string> diagnostics_;
};

/// The system C y + e <= 0 describing D: rows of C are -z_i^T.
struct ConstraintSystem {
  Matrix C;
  Vector e;
};

inline ConstraintSystem constraint_matrix(const Polyhedron& P) {
  return {-P.vertices(), Vector::Ones(P.m())};
}

/// B(i, j) = <z_i, z_j>.
struct GramMatrix {
  Matrix B;
};

inline GramMatrix gram_matrix(const Polyhedron& P) {
  const Matrix& Z = P.vertices();
  const Index m = P.m();
  Matrix B(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double b = Z.row(i).dot(Z.row(j));
      B(i, j) = b;
      B(j, i) = b;
    }
  }
  return {std::move(B)};
}

enum class Route { Wolfe, Dual, Maximin, LcpPrimal, LcpWolfe, LcpDual, Nnls, Oracle };

inline std::string_view route_name(Route r) {
  switch (r) {
    case Route::Wolfe: return "wolfe";
    case Route::Dual: return "dual";
    case Route::Maximin: return "maximin";
    case Route::LcpPrimal: return "lcp-primal";
    case Route::LcpWolfe: return "lcp-wolfe";
    case Route::LcpDual: return "lcp-dual";
    case Route::Nnls: return "nnls";
    case Route::Oracle: return "oracle";
  }
  return "unknown";
}

struct ProjectionResult {
  Vector rho;
  double distance = 0.0;
  Route route = Route::Wolfe;
  long iterations = 0;
  double vi_min = 0.0;
  bool origin_inside = false;
  /// Convex weights with rho = sum_i alpha_i z_i, when the route produces them.
  std::optional<Vector> alpha;
};

struct SupportValue {
  double value;
  Index index;
};

/// t_L(c) = min_i <c, z_i>, with the lowest achieving index.
inline SupportValue support_value(const Polyhedron& P, const Vector& c) {
  if (c.size() != P.n()) throw DimensionMismatch("support_value: functional has wrong dimension");
  const Vector values = P.vertices() * c;
  SupportValue best{values(0), 0};
  for (Index i = 1; i < values.size(); ++i) {
    if (values(i) < best.value) best = {values(i), i};
  }
  return best;
}

/// Residual i is <z_i - y, y>; y solves the projection problem iff all are >= 0.
inline Vector vi_residuals(const Polyhedron& P, const Vector& y) {
  if (y.size() != P.n()) throw DimensionMismatch("vi_residuals: point has wrong dimension");
  return (P.vertices() * y).array() - y.squaredNorm();
}

namespace detail {

inline void require_dimension(const Polyhedron& P, const Vector& y, const char* who) {
  if (y.size() != P.n()) throw DimensionMismatch(std::string(who) + ": point has wrong dimension");
}

}  // namespace detail

/// Omega = { y : <z_i, y> >= |y|^2 } is also the intersection of the balls
/// centered at z_i/2 with radius |z_i|/2. Both tests are evaluated and
/// must agree.
inline bool in_omega(const Polyhedron& P, const Vector& y, const ToleranceConfig& cfg = {}) {
  detail::require_dimension(P, y, "in_omega");
  const double ft = cfg.feas_tol;
  const double yy = y.squaredNorm();
  bool halfspace = true;
  for (Index i = 0; i < P.m(); ++i) {
    const auto z = P.vertex(i);
    const double slack = z.dot(y) - yy;
    const double radius = 0.5 * z.norm();
    const double dist = (y - 0.5 * z).norm();
    const double excess = dist - radius;
    const bool half_ok = slack >= -ft;
    const bool ball_ok = excess <= ft;
    halfspace = halfspace && half_ok;
    // slack = -excess * (radius + dist) exactly, so the tests differ only by
    // the unit conversion of the tolerance plus rounding.
    const double span = radius + dist;
    const double rounding = 1e-12 * (1.0 + yy + radius * radius);
    if (span > 0 && ((half_ok && excess > ft + ft / span + rounding / span) ||
                     (ball_ok && slack < -ft * (1.0 + span) - rounding))) {
      throw InternalInconsistency("in_omega: halfspace and ball tests disagree at vertex " +
                                  std::to_string(i));
    }
  }
  return halfspace;
}

/// D = { y : <z_i, y> >= 1 for all i }.
inline bool in_D(const Polyhedron& P, const Vector& y, const ToleranceConfig& cfg = {}) {
  detail::require_dimension(P, y, "in_D");
  return ((P.vertices() * y).array() >= 1.0 - cfg.feas_tol).all();
}

/// Vertices z_i - p. Projecting p onto L is translate(L, p) projected, plus p.
inline Polyhedron translate(const Polyhedron& P, const Vector& p) {
  if (p.size() != P.n()) throw DimensionMismatch("translate: offset has wrong dimension");
  if (!p.allFinite()) throw InvalidInstance("translate: offset must be finite");
  Matrix Z = P.vertices().rowwise() - p.transpose();
  return Polyhedron(std::move(Z));
}

namespace detail {

/// Minimum-norm point of the affine hull of the selected vertices, with one
/// set of affine weights (summing to one) producing it.
struct AffinePoint {
  Vector point;
  Vector weights;  // indexed like `support`
};

inline AffinePoint affine_min_norm(const Polyhedron& P, const std::vector<Index>& support) {
  const Index k = static_cast<Index>(support.size());
  const Vector base = P.vertex(support.front());
  AffinePoint out;
  out.weights = Vector::Zero(k);
  if (k == 1) {
    out.point = base;
    out.weights(0) = 1.0;
    return out;
  }
  // x = z_0 + sum_j beta_j (z_j - z_0); minimize |x|.
  Matrix D(P.n(), k - 1);
  for (Index j = 1; j < k; ++j) D.col(j - 1) = P.vertex(support[static_cast<std::size_t>(j)]) - base;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(D);
  const Vector beta = cod.solve(-base);
  out.point = base + D * beta;
  out.weights(0) = 1.0 - beta.sum();
  out.weights.tail(k - 1) = beta;
  return out;
}

}  // namespace detail

}  // namespace ppocp
