#pragma once

// Instance files and result serialization.
//
// Instance: {"vertices": [[x11, ..., x1n], ..., [xm1, ..., xmn]]}.
// Output numbers are written with 17 significant digits so that the text is
// stable and round-trips exactly.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ppocp/certify.hpp"
#include "ppocp/core.hpp"

namespace ppocp::io {

using Json = nlohmann::ordered_json;

inline Polyhedron parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInstance(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw InvalidInstance("instance must be an object with a \"vertices\" array");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : doc["vertices"]) {
    if (!row.is_array()) throw InvalidInstance("every vertex must be an array of numbers");
    std::vector<double> v;
    for (const auto& x : row) {
      if (!x.is_number()) throw InvalidInstance("vertex coordinates must be numbers");
      v.push_back(x.get<double>());
    }
    rows.push_back(std::move(v));
  }
  return Polyhedron(rows);
}

inline Polyhedron load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Compact JSON with fixed 17-digit floats; keys keep insertion order.
inline void write_json(std::ostream& os, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ", ";
        first = false;
        os << Json(it.key()).dump() << ": ";
        write_json(os, it.value());
      }
      os << '}';
      break;
    }
    case Json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        write_json(os, j[i]);
      }
      os << ']';
      break;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      break;
    default:
      os << j.dump();
  }
}

inline std::string to_string(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

inline Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline Json to_json(const Polyhedron& P) {
  Json rows = Json::array();
  for (Index i = 0; i < P.m(); ++i) rows.push_back(to_json(Vector(P.vertex(i))));
  Json doc;
  doc["vertices"] = std::move(rows);
  return doc;
}

inline Json to_json(const Certificate& c) {
  Json j;
  j["pass"] = c.passed();
  j["vi_min"] = c.vi_min;
  j["zero_inside"] = c.zero_inside;
  Json checks = Json::array();
  for (const auto& ch : c.checks) {
    Json item;
    item["name"] = ch.name;
    item["pass"] = ch.pass;
    item["residual"] = ch.residual;
    checks.push_back(std::move(item));
  }
  j["checks"] = std::move(checks);
  return j;
}

inline Json vote_json(const std::optional<bool>& v) { return v ? Json(*v) : Json(nullptr); }

/// Report schema:
/// {"verdict": "agree"|"conflict", "max_deviation": x, "oracle_deviation": x|null,
///  "votes": {"wolfe", "dual", "maximin", "lcp-primal"},
///  "routes": [{"route", "status", "rho", "distance", "origin_inside", "certificate_pass", "message"}]}
inline Json to_json(const ConsensusReport& r) {
  Json j;
  j["verdict"] = r.verdict == ConsensusReport::Verdict::Agree ? "agree" : "conflict";
  j["max_deviation"] = r.max_deviation;
  j["oracle_deviation"] = r.oracle_deviation ? Json(*r.oracle_deviation) : Json(nullptr);
  Json votes;
  votes["wolfe"] = vote_json(r.votes.wolfe);
  votes["dual"] = vote_json(r.votes.dual);
  votes["maximin"] = vote_json(r.votes.maximin);
  votes["lcp-primal"] = vote_json(r.votes.lcp_primal);
  j["votes"] = std::move(votes);
  Json routes = Json::array();
  for (const auto& rr : r.routes) {
    Json item;
    item["route"] = std::string(route_name(rr.route));
    item["status"] = std::string(status_name(rr.status));
    if (rr.result) {
      item["rho"] = to_json(rr.result->rho);
      item["distance"] = rr.result->distance;
      item["origin_inside"] = rr.result->origin_inside;
    }
    if (rr.certificate) item["certificate_pass"] = rr.certificate->passed();
    if (!rr.message.empty()) item["message"] = rr.message;
    routes.push_back(std::move(item));
  }
  j["routes"] = std::move(routes);
  return j;
}

}  // namespace ppocp::io
