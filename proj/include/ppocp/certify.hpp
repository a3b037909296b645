#pragma once

// Optimality certificates, origin-membership consensus across the
// equivalent characterizations, an enumeration oracle for small instances,
// and the cross-route consistency report.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppocp/core.hpp"
#include "ppocp/routes.hpp"

namespace ppocp {

struct CertificateCheck {
  std::string name;
  bool pass;
  double residual;
};

struct Certificate {
  Vector rho;
  double vi_min = 0.0;
  std::optional<Vector> alpha_witness;
  bool zero_inside = false;
  std::vector<CertificateCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CertificateCheck& c) { return c.pass; });
  }
};

/// Exact projection for m <= 4 by enumerating every nonempty vertex subset:
/// project the origin onto the subset's affine hull, keep candidates whose
/// barycentric weights are nonnegative, return the shortest. Every kept
/// candidate lies in the hull, and the optimal face is among the subsets.
inline ProjectionResult reference_projection(const Polyhedron& P, const ToleranceConfig& cfg = {}) {
  const Index m = P.m();
  if (m > 4) throw OracleScaleExceeded("reference_projection: oracle handles at most 4 vertices");
  const GramMatrix G = gram_matrix(P);
  std::optional<Vector> best_alpha;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<Index> idx;
    for (Index i = 0; i < m; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const Index k = static_cast<Index>(idx.size());
    // Stationarity of |sum w_i z_i|^2 on sum w_i = 1: [2 B_S 1; 1^T 0].
    Matrix K = Matrix::Zero(k + 1, k + 1);
    for (Index a = 0; a < k; ++a) {
      for (Index b = 0; b < k; ++b) K(a, b) = 2.0 * G.B(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
      K(a, k) = 1.0;
      K(k, a) = 1.0;
    }
    Vector rhs = Vector::Zero(k + 1);
    rhs(k) = 1.0;
    const Vector sol = Eigen::CompleteOrthogonalDecomposition<Matrix>(K).solve(rhs);
    const Vector w = sol.head(k);
    if (!w.allFinite() || w.minCoeff() < -1e-10 || std::abs(w.sum() - 1.0) > 1e-8) continue;
    Vector alpha = Vector::Zero(m);
    for (Index a = 0; a < k; ++a) alpha(idx[static_cast<std::size_t>(a)]) = std::max(0.0, w(a));
    alpha /= alpha.sum();
    const double sq = (P.vertices().transpose() * alpha).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best_alpha = alpha;
    }
  }
  ProjectionResult res;
  res.route = Route::Oracle;
  res.alpha = best_alpha;
  res.rho = P.vertices().transpose() * *best_alpha;
  res.origin_inside = res.rho.squaredNorm() <= cfg.zero_tol;
  return detail::finish_result(P, std::move(res));
}

/// Criterion: rho is the projection iff <z_i - rho, rho> >= 0 for all i and
/// rho lies in the hull. The hull part is checked only through a witness.
inline Certificate check_optimality(const Polyhedron& P, const Vector& rho,
                                    const std::optional<Vector>& alpha = std::nullopt,
                                    const ToleranceConfig& cfg = {}) {
  Certificate cert;
  cert.rho = rho;
  cert.alpha_witness = alpha;
  cert.vi_min = vi_residuals(P, rho).minCoeff();
  cert.checks.push_back({"variational_inequality", cert.vi_min >= -cfg.opt_tol, cert.vi_min});

  double ball_excess = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < P.m(); ++i) {
    const auto z = P.vertex(i);
    ball_excess = std::max(ball_excess, (rho - 0.5 * z).norm() - 0.5 * z.norm());
  }
  ToleranceConfig omega_cfg = cfg;
  omega_cfg.feas_tol = cfg.opt_tol;
  bool omega = false;
  try {
    omega = in_omega(P, rho, omega_cfg) && ball_excess <= cfg.opt_tol;
  } catch (const InternalInconsistency&) {
    omega = false;
  }
  cert.checks.push_back({"omega_membership", omega, ball_excess});

  if (alpha) {
    const Vector& a = *alpha;
    const bool sized = a.size() == P.m();
    const double simplex_res =
        sized ? std::max({0.0, -a.minCoeff(), std::abs(a.sum() - 1.0)}) : std::numeric_limits<double>::infinity();
    cert.checks.push_back({"witness_simplex", simplex_res <= cfg.feas_tol, simplex_res});
    const double hull_res = sized ? (P.vertices().transpose() * a - rho).norm()
                                  : std::numeric_limits<double>::infinity();
    cert.checks.push_back({"witness_hull", hull_res <= cfg.feas_tol * (1.0 + rho.norm()), hull_res});
  }
  cert.zero_inside = rho.squaredNorm() <= cfg.zero_tol && cert.passed();
  return cert;
}

inline Certificate check_optimality(const Polyhedron& P, const ProjectionResult& r,
                                    const ToleranceConfig& cfg = {}) {
  return check_optimality(P, r.rho, r.alpha, cfg);
}

/// Votes of the four origin-membership characterizations: zero optimum of the
/// simplex QP, unbounded dual, zero maximin value, ray termination of the
/// split-variable LCP. An absent vote means that route failed.
struct MembershipVotes {
  std::optional<bool> wolfe;
  std::optional<bool> dual;
  std::optional<bool> maximin;
  std::optional<bool> lcp_primal;

  std::vector<std::optional<bool>> all() const { return {wolfe, dual, maximin, lcp_primal}; }

  bool complete() const {
    const auto v = all();
    return std::all_of(v.begin(), v.end(), [](const auto& x) { return x.has_value(); });
  }

  /// True when every present vote is equal.
  bool unanimous() const {
    std::optional<bool> first;
    for (const auto& v : all()) {
      if (!v) continue;
      if (!first) first = v;
      else if (*first != *v) return false;
    }
    return true;
  }

  /// The common answer, when complete and unanimous.
  std::optional<bool> verdict() const {
    if (!complete() || !unanimous()) return std::nullopt;
    return wolfe;
  }
};

class ConflictingCharacterizations : public Error {
 public:
  ConflictingCharacterizations(const std::string& what, MembershipVotes votes)
      : Error(what), votes_(votes) {}
  const MembershipVotes& votes() const noexcept { return votes_; }

 private:
  MembershipVotes votes_;
};

inline MembershipVotes detect_zero_membership(const Polyhedron& P, const ToleranceConfig& cfg = {}) {
  MembershipVotes votes;
  votes.wolfe = solve_wolfe(P, cfg).phi <= cfg.zero_tol;
  votes.dual = solve_dual(P, cfg).status == DualOutcome::Status::UnboundedBelow;
  votes.maximin = solve_maximin(P, cfg).t_value <= cfg.zero_tol;
  votes.lcp_primal = !lemke_solve(build_lcp(P, LcpVariant::PrimalSplit), cfg).solved();
  if (!votes.unanimous()) {
    throw ConflictingCharacterizations("detect_zero_membership: characterizations disagree", votes);
  }
  return votes;
}

struct RouteReport {
  enum class Status { Ok, NotApplicable, Failed };
  Route route;
  Status status = Status::Ok;
  std::optional<ProjectionResult> result;
  std::optional<Certificate> certificate;
  std::string message;
};

inline std::string_view status_name(RouteReport::Status s) {
  switch (s) {
    case RouteReport::Status::Ok: return "ok";
    case RouteReport::Status::NotApplicable: return "not-applicable";
    case RouteReport::Status::Failed: return "failed";
  }
  return "unknown";
}

struct ConsensusReport {
  enum class Verdict { Agree, Conflict };
  std::vector<RouteReport> routes;
  double max_deviation = 0.0;
  std::optional<double> oracle_deviation;
  MembershipVotes votes;
  Verdict verdict = Verdict::Agree;

  bool has_failures() const {
    return std::any_of(routes.begin(), routes.end(),
                       [](const RouteReport& r) { return r.status == RouteReport::Status::Failed; });
  }

  const RouteReport* find(Route r) const {
    for (const auto& rep : routes)
      if (rep.route == r) return &rep;
    return nullptr;
  }
};

inline constexpr double kRouteAgreementTol = 1e-6;
inline constexpr double kOracleAgreementTol = 1e-5;

/// Runs every route and the oracle when m <= 4. Route errors are recorded
/// and do not stop the remaining routes.
inline ConsensusReport cross_check(const Polyhedron& P, const ToleranceConfig& cfg = {}) {
  ConsensusReport rep;
  const Route order[] = {Route::Wolfe,    Route::Dual,     Route::Maximin, Route::LcpPrimal,
                         Route::LcpWolfe, Route::LcpDual,  Route::Nnls};
  for (Route route : order) {
    RouteReport rr;
    rr.route = route;
    try {
      switch (route) {
        case Route::Wolfe: {
          const SimplexSolution s = solve_wolfe(P, cfg);
          rep.votes.wolfe = s.phi <= cfg.zero_tol;
          rr.result = to_result(P, s);
          break;
        }
        case Route::Dual: {
          const DualOutcome d = solve_dual(P, cfg);
          rep.votes.dual = !d.solved();
          rr.result = to_result(P, d);
          break;
        }
        case Route::Maximin: {
          const MaximinSolution s = solve_maximin(P, cfg);
          rep.votes.maximin = s.t_value <= cfg.zero_tol;
          rr.result = to_result(P, s);
          break;
        }
        case Route::LcpPrimal: {
          const LCPInstance L = build_lcp(P, LcpVariant::PrimalSplit);
          const LCPOutcome O = lemke_solve(L, cfg);
          rep.votes.lcp_primal = !O.solved();
          rr.result = extract_projection(P, L, O, cfg);
          break;
        }
        default:
          rr.result = run_route(P, route, cfg);
          if (!rr.result) rr.status = RouteReport::Status::NotApplicable;
          break;
      }
    } catch (const Error& e) {
      rr.status = RouteReport::Status::Failed;
      rr.message = e.what();
      rr.result.reset();
    }
    if (rr.result) rr.certificate = check_optimality(P, *rr.result, cfg);
    rep.routes.push_back(std::move(rr));
  }
  if (P.m() <= 4) {
    RouteReport rr;
    rr.route = Route::Oracle;
    rr.result = reference_projection(P, cfg);
    rr.certificate = check_optimality(P, *rr.result, cfg);
    rep.routes.push_back(std::move(rr));
  }

  double max_distance = 0.0;
  for (const auto& a : rep.routes) {
    if (a.result) max_distance = std::max(max_distance, a.result->distance);
  }
  const RouteReport* oracle = rep.find(Route::Oracle);
  for (std::size_t i = 0; i < rep.routes.size(); ++i) {
    const auto& a = rep.routes[i];
    if (!a.result || a.route == Route::Oracle) continue;
    for (std::size_t j = i + 1; j < rep.routes.size(); ++j) {
      const auto& b = rep.routes[j];
      if (!b.result || b.route == Route::Oracle) continue;
      rep.max_deviation = std::max(rep.max_deviation, (a.result->rho - b.result->rho).norm());
    }
    if (oracle) {
      const double dev = (a.result->rho - oracle->result->rho).norm();
      rep.oracle_deviation = std::max(rep.oracle_deviation.value_or(0.0), dev);
    }
  }
  const bool routes_agree = rep.max_deviation <= kRouteAgreementTol * (1.0 + max_distance);
  const bool oracle_agrees = !rep.oracle_deviation || *rep.oracle_deviation <= kOracleAgreementTol;
  rep.verdict = routes_agree && oracle_agrees && rep.votes.unanimous()
                    ? ConsensusReport::Verdict::Agree
                    : ConsensusReport::Verdict::Conflict;
  return rep;
}

}  // namespace ppocp
