#pragma once

// Uniform entry point: run one formulation and report its projection.

#include <optional>
#include <ostream>

#include "ppocp/core.hpp"
#include "ppocp/lcp.hpp"
#include "ppocp/maximin.hpp"
#include "ppocp/nnls.hpp"
#include "ppocp/simplex_qp.hpp"
#include "ppocp/support_qp.hpp"

namespace ppocp {

namespace detail {

inline ProjectionResult finish_result(const Polyhedron& P, ProjectionResult res) {
  res.distance = res.rho.norm();
  res.vi_min = vi_residuals(P, res.rho).minCoeff();
  return res;
}

}  // namespace detail

inline ProjectionResult to_result(const Polyhedron& P, const SimplexSolution& s) {
  ProjectionResult res;
  res.route = Route::Wolfe;
  res.rho = s.rho;
  res.iterations = s.iterations;
  res.origin_inside = s.origin_inside;
  res.alpha = s.alpha;
  return detail::finish_result(P, std::move(res));
}

inline ProjectionResult to_result(const Polyhedron& P, const DualOutcome& d) {
  ProjectionResult res;
  res.route = Route::Dual;
  res.iterations = d.iterations;
  if (d.solved()) {
    res.rho = d.rho;
    res.alpha = detail::normalized_weights(d.u_star);
  } else {
    res.rho = Vector::Zero(P.n());
    res.origin_inside = true;
    if (d.recession) res.alpha = detail::normalized_weights(*d.recession);
  }
  return detail::finish_result(P, std::move(res));
}

inline ProjectionResult to_result(const Polyhedron& P, const MaximinSolution& s) {
  ProjectionResult res;
  res.route = Route::Maximin;
  res.rho = s.rho;
  res.iterations = s.iterations;
  res.origin_inside = s.origin_inside;
  res.alpha = s.alpha_witness;
  return detail::finish_result(P, std::move(res));
}

inline ProjectionResult project_lcp(const Polyhedron& P, LcpVariant variant,
                                    const ToleranceConfig& cfg = {}, std::ostream* debug = nullptr) {
  const LCPInstance L = build_lcp(P, variant);
  const LCPOutcome O = lemke_solve(L, cfg, debug);
  return extract_projection(P, L, O, cfg);
}

/// Runs `route`. Returns nullopt only for the NNLS route on instances
/// where its reduction does not apply.
inline std::optional<ProjectionResult> run_route(const Polyhedron& P, Route route,
                                                 const ToleranceConfig& cfg = {},
                                                 std::ostream* debug = nullptr) {
  switch (route) {
    case Route::Wolfe: return to_result(P, solve_wolfe(P, cfg));
    case Route::Dual: return to_result(P, solve_dual(P, cfg));
    case Route::Maximin: return to_result(P, solve_maximin(P, cfg));
    case Route::LcpPrimal: return project_lcp(P, LcpVariant::PrimalSplit, cfg, debug);
    case Route::LcpWolfe: return project_lcp(P, LcpVariant::WolfeKkt, cfg, debug);
    case Route::LcpDual: return project_lcp(P, LcpVariant::DualOrthant, cfg, debug);
    case Route::Nnls: return project_via_nnls(P, cfg);
    case Route::Oracle: break;
  }
  throw InvalidInstance("run_route: the oracle is not a solver route");
}

}  // namespace ppocp
