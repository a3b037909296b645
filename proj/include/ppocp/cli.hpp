#pragma once

// Command-line front end.
//
//   ppocp project --input PATH [--method NAME] [--tol F] [--feas-tol F]
//                 [--zero-tol F] [--max-iter N] [--point x1 ... xn]
//                 [--output json|text] [--verbose]
//   ppocp gen --m M --n N --box B        (seed from PPOCP_SEED)
//
// Exit codes: 0 success, 2 invalid input or usage, 3 solver
// non-convergence, 4 consensus conflict.

#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppocp/certify.hpp"
#include "ppocp/io.hpp"
#include "ppocp/routes.hpp"

namespace ppocp::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNonConvergence = 3, kConflict = 4 };

enum class Method { Wolfe, Dual, Maximin, LcpPrimal, LcpWolfe, LcpDual, Nnls, All };

inline const std::map<std::string, Method>& method_names() {
  static const std::map<std::string, Method> names{
      {"wolfe", Method::Wolfe},         {"dual", Method::Dual},          {"maximin", Method::Maximin},
      {"lcp-primal", Method::LcpPrimal}, {"lcp-wolfe", Method::LcpWolfe}, {"lcp-dual", Method::LcpDual},
      {"nnls", Method::Nnls},           {"all", Method::All}};
  return names;
}

inline Route route_for(Method m) {
  switch (m) {
    case Method::Wolfe: return Route::Wolfe;
    case Method::Dual: return Route::Dual;
    case Method::Maximin: return Route::Maximin;
    case Method::LcpPrimal: return Route::LcpPrimal;
    case Method::LcpWolfe: return Route::LcpWolfe;
    case Method::LcpDual: return Route::LcpDual;
    case Method::Nnls: return Route::Nnls;
    case Method::All: break;
  }
  return Route::Wolfe;
}

struct RunConfig {
  std::string input;
  Method method = Method::All;
  ToleranceConfig tol;
  bool text = false;
  bool verbose = false;
  std::vector<double> point;
};

namespace detail {

inline io::Json result_json(const Polyhedron& P, const ProjectionResult& r, const Vector& offset,
                            const ToleranceConfig& tol) {
  io::Json j;
  j["rho"] = io::to_json(Vector(r.rho + offset));
  j["distance"] = r.distance;
  j["route"] = std::string(route_name(r.route));
  j["origin_inside"] = r.origin_inside;
  j["certificate"] = io::to_json(check_optimality(P, r, tol));
  return j;
}

inline void write_text(std::ostream& out, const io::Json& j) {
  if (j.contains("status")) {
    out << "status: " << j["status"].get<std::string>() << '\n';
    return;
  }
  out << "route: " << j["route"].get<std::string>() << '\n';
  out << "rho:";
  for (const auto& x : j["rho"]) out << ' ' << io::format_number(x.get<double>());
  out << '\n';
  out << "distance: " << io::format_number(j["distance"].get<double>()) << '\n';
  out << "origin_inside: " << (j["origin_inside"].get<bool>() ? "true" : "false") << '\n';
  const auto& cert = j["certificate"];
  out << "certificate: " << (cert["pass"].get<bool>() ? "pass" : "fail")
      << " (vi_min " << io::format_number(cert["vi_min"].get<double>()) << ")\n";
  if (j.contains("report")) {
    const auto& rep = j["report"];
    out << "verdict: " << rep["verdict"].get<std::string>() << '\n';
    out << "max_deviation: " << io::format_number(rep["max_deviation"].get<double>()) << '\n';
    for (const auto& rr : rep["routes"]) {
      out << "  " << rr["route"].get<std::string>() << ": " << rr["status"].get<std::string>();
      if (rr.contains("distance")) out << " distance " << io::format_number(rr["distance"].get<double>());
      if (rr.contains("message")) out << " (" << rr["message"].get<std::string>() << ')';
      out << '\n';
    }
  }
}

inline int project(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Polyhedron original = io::load_instance(cfg.input);
  if (cfg.verbose) {
    for (const auto& d : original.diagnostics()) err << "warning: " << d << '\n';
  }
  Vector offset = Vector::Zero(original.n());
  if (!cfg.point.empty()) {
    if (static_cast<Index>(cfg.point.size()) != original.n()) {
      throw DimensionMismatch("--point needs " + std::to_string(original.n()) + " coordinates");
    }
    for (std::size_t i = 0; i < cfg.point.size(); ++i) offset(static_cast<Index>(i)) = cfg.point[i];
  }
  const Polyhedron P = cfg.point.empty() ? original : translate(original, offset);

  io::Json doc;
  int code = kOk;
  if (cfg.method == Method::All) {
    const ConsensusReport rep = cross_check(P, cfg.tol);
    const RouteReport* chosen = nullptr;
    for (const auto& rr : rep.routes) {
      if (rr.result && rr.route != Route::Oracle) {
        chosen = &rr;
        break;
      }
    }
    if (!chosen) throw NonConvergence("no route produced a projection");
    doc = result_json(P, *chosen->result, offset, cfg.tol);
    doc["report"] = io::to_json(rep);
    if (rep.verdict == ConsensusReport::Verdict::Conflict) code = kConflict;
    else if (rep.has_failures()) code = kNonConvergence;
  } else {
    const auto res = run_route(P, route_for(cfg.method), cfg.tol, cfg.verbose ? &err : nullptr);
    if (!res) {
      doc["status"] = "not-applicable";
    } else {
      doc = result_json(P, *res, offset, cfg.tol);
    }
  }
  if (cfg.text) {
    write_text(out, doc);
  } else {
    io::write_json(out, doc);
    out << '\n';
  }
  return code;
}

inline int generate(long m, long n, double box, std::ostream& out) {
  if (m < 1 || n < 1 || !(box > 0)) throw InvalidInstance("gen needs --m >= 1, --n >= 1, --box > 0");
  std::uint64_t seed;
  if (const char* env = std::getenv("PPOCP_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInstance("PPOCP_SEED must be a nonnegative integer");
    }
  } else {
    seed = std::random_device{}();
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box, box);
  Matrix Z(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) Z(i, j) = coord(rng);
  io::write_json(out, io::to_json(Polyhedron(std::move(Z))));
  out << '\n';
  return kOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection of the origin onto the convex hull of finitely many points"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string method = "all";
  std::string output = "json";
  auto* project = app.add_subcommand("project", "Project the origin (or --point) onto the hull");
  project->add_option("--input", cfg.input, "Instance JSON file")->required();
  project->add_option("--method", method, "wolfe, dual, maximin, lcp-primal, lcp-wolfe, lcp-dual, nnls, all");
  project->add_option("--tol", cfg.tol.opt_tol, "Optimality tolerance");
  project->add_option("--feas-tol", cfg.tol.feas_tol, "Feasibility tolerance");
  project->add_option("--zero-tol", cfg.tol.zero_tol, "Threshold for declaring the origin inside");
  project->add_option("--max-iter", cfg.tol.max_iter, "Iteration limit");
  project->add_option("--point", cfg.point, "Project this point instead of the origin");
  project->add_option("--output", output, "json or text");
  project->add_flag("--verbose", cfg.verbose, "Diagnostics and pivot traces on stderr");

  long gen_m = 0;
  long gen_n = 0;
  double gen_box = 0;
  auto* gen = app.add_subcommand("gen", "Random instance with vertices uniform in [-B, B]^n");
  gen->add_option("--m", gen_m, "Vertex count")->required();
  gen->add_option("--n", gen_n, "Dimension")->required();
  gen->add_option("--box", gen_box, "Half-width of the sampling box")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (*gen) return detail::generate(gen_m, gen_n, gen_box, out);

    const auto it = method_names().find(method);
    if (it == method_names().end()) {
      err << "usage error: unknown method '" << method << "'\n";
      return kInvalidInput;
    }
    cfg.method = it->second;
    if (output != "json" && output != "text") {
      err << "usage error: --output must be json or text\n";
      return kInvalidInput;
    }
    cfg.text = output == "text";
    cfg.tol.validate();
    return detail::project(cfg, out, err);
  } catch (const InvalidInstance& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DimensionMismatch& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ConflictingCharacterizations& e) {
    err << "conflict: " << e.what() << '\n';
    return kConflict;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << '\n';
    return kNonConvergence;
  }
}

}  // namespace ppocp::cli
