#pragma once

// Instance documents and JSON reports.
//
//   { "m": 3, "n": 2,
//     "A": [[1, 0], [1, 0], [0, 1]],      // rows; a flat row-major list also works
//     "b": [0, 0, 0],
//     "points": [ { "name": "origin", "x": [0, 0] } ],
//     "tolerances": { "tol": 1e-9, "projection_tol": 1e-10, "max_iter": 100000 } }

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "socpcq/affine_instance.hpp"
#include "socpcq/cq_checker.hpp"

#ifndef SOCPCQ_VERSION
#define SOCPCQ_VERSION "0.0.0"
#endif

namespace socpcq::io {

using nlohmann::json;

/// Malformed instance document; the message names the offending field.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

struct Tolerances {
  double tol = kDefaultTol;
  double projection_tol = 1e-10;
  long max_iter = 100000;

  bool operator==(const Tolerances&) const = default;
};

struct NamedPoint {
  std::string name;
  std::vector<double> x;

  bool operator==(const NamedPoint&) const = default;
};

struct InstanceDocument {
  long m = 0;
  long n = 0;
  std::vector<double> A;  // row-major, m * n
  std::vector<double> b;
  std::vector<NamedPoint> points;
  Tolerances tolerances;

  bool operator==(const InstanceDocument&) const = default;

  AffineSocInstance instance() const {
    Matrix M(m, n);
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < n; ++j) M(i, j) = A[static_cast<std::size_t>(i * n + j)];
    return AffineSocInstance(M, Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size())));
  }

  Vector point(const std::string& name) const {
    for (const auto& p : points) {
      if (p.name == name) return Eigen::Map<const Vector>(p.x.data(), static_cast<Eigen::Index>(p.x.size()));
    }
    throw InputError("no point named '" + name + "'");
  }
};

namespace detail {

inline double finite_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(field + ": non-finite number");
  return d;
}

inline std::vector<double> number_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError(field + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(finite_number(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline long positive_integer(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ParseError(field + ": missing field");
  const json& v = doc.at(field);
  if (!v.is_number_integer()) throw ParseError(field + ": expected an integer");
  return v.get<long>();
}

inline const json& required(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ParseError(field + ": missing field");
  return doc.at(field);
}

}  // namespace detail

inline InstanceDocument parse_instance_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");
  InstanceDocument d;
  d.m = detail::positive_integer(doc, "m");
  d.n = detail::positive_integer(doc, "n");
  if (d.m < 2) throw ParseError("m: cone order must be >= 2, got " + std::to_string(d.m));
  if (d.n < 1) throw ParseError("n: variable dimension must be >= 1, got " + std::to_string(d.n));

  const json& A = detail::required(doc, "A");
  if (!A.is_array()) throw ParseError("A: expected an array");
  if (!A.empty() && A[0].is_array()) {
    if (static_cast<long>(A.size()) != d.m) {
      throw ParseError("A: expected " + std::to_string(d.m) + " rows, got " + std::to_string(A.size()));
    }
    for (std::size_t i = 0; i < A.size(); ++i) {
      const auto row = detail::number_list(A[i], "A[" + std::to_string(i) + "]");
      if (static_cast<long>(row.size()) != d.n) {
        throw ParseError("A[" + std::to_string(i) + "]: expected " + std::to_string(d.n) +
                         " entries, got " + std::to_string(row.size()));
      }
      d.A.insert(d.A.end(), row.begin(), row.end());
    }
  } else {
    d.A = detail::number_list(A, "A");
    if (static_cast<long>(d.A.size()) != d.m * d.n) {
      throw ParseError("A: expected " + std::to_string(d.m * d.n) + " entries, got " +
                       std::to_string(d.A.size()));
    }
  }

  d.b = detail::number_list(detail::required(doc, "b"), "b");
  if (static_cast<long>(d.b.size()) != d.m) {
    throw ParseError("b: expected " + std::to_string(d.m) + " entries, got " + std::to_string(d.b.size()));
  }

  if (doc.contains("points")) {
    const json& pts = doc.at("points");
    if (!pts.is_array()) throw ParseError("points: expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string field = "points[" + std::to_string(i) + "]";
      if (!pts[i].is_object()) throw ParseError(field + ": expected an object");
      const json& nm = detail::required(pts[i], "name");
      if (!nm.is_string()) throw ParseError(field + ".name: expected a string");
      NamedPoint p;
      p.name = nm.get<std::string>();
      if (!seen.insert(p.name).second) throw ParseError(field + ".name: duplicate point name '" + p.name + "'");
      p.x = detail::number_list(detail::required(pts[i], "x"), field + ".x");
      if (static_cast<long>(p.x.size()) != d.n) {
        throw ParseError(field + ".x: expected " + std::to_string(d.n) + " entries, got " +
                         std::to_string(p.x.size()));
      }
      d.points.push_back(std::move(p));
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) throw ParseError("tolerances: expected an object");
    if (t.contains("tol")) d.tolerances.tol = detail::finite_number(t.at("tol"), "tolerances.tol");
    if (t.contains("projection_tol")) {
      d.tolerances.projection_tol = detail::finite_number(t.at("projection_tol"), "tolerances.projection_tol");
    }
    if (t.contains("max_iter")) d.tolerances.max_iter = detail::positive_integer(t, "max_iter");
    if (!(d.tolerances.tol > 0.0)) throw ParseError("tolerances.tol: must be positive");
    if (!(d.tolerances.projection_tol > 0.0)) throw ParseError("tolerances.projection_tol: must be positive");
    if (d.tolerances.max_iter < 1) throw ParseError("tolerances.max_iter: must be >= 1");
  }
  return d;
}

inline InstanceDocument parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("document: invalid JSON: ") + e.what());
  }
  return parse_instance_json(doc);
}

inline InstanceDocument parse_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

inline json to_json(const Tolerances& t) {
  return {{"tol", t.tol}, {"projection_tol", t.projection_tol}, {"max_iter", t.max_iter}};
}

inline json to_json(const InstanceDocument& d) {
  json A = json::array();
  for (long i = 0; i < d.m; ++i) {
    A.push_back(std::vector<double>(d.A.begin() + i * d.n, d.A.begin() + (i + 1) * d.n));
  }
  json pts = json::array();
  for (const auto& p : d.points) pts.push_back({{"name", p.name}, {"x", p.x}});
  return {{"m", d.m}, {"n", d.n}, {"A", A}, {"b", d.b}, {"points", pts}, {"tolerances", to_json(d.tolerances)}};
}

inline std::string serialize_instance(const InstanceDocument& d) { return to_json(d).dump(2); }

inline std::vector<double> to_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline json to_json(const Verdict& v) {
  json ev = json::object();
  for (const auto& [k, vals] : v.evidence.values) ev[k] = vals;
  json out = {{"holds", v.holds},
              {"condition", std::string(label(v.condition))},
              {"evidence", ev},
              {"notes", v.evidence.notes},
              {"marginal", v.evidence.marginal}};
  if (!v.holds) out["failure"] = v.failure;
  return out;
}

inline json to_json(const CQReport& r, const Tolerances& tol) {
  json point = {{"x", to_list(r.point.x)},
                {"g", to_list(r.point.y)},
                {"location", std::string(to_string(r.point.location))},
                {"reduction", std::string(to_string(r.point.reduction.kind))}};
  if (r.point.reduction.kind == ReductionInfo::Kind::BoundaryCase) {
    point["phi"] = r.point.reduction.phi;
    point["grad_phi"] = to_list(r.point.reduction.grad_phi);
  }
  json h = {{"kind", std::string(to_string(r.h_set.kind))}};
  if (r.h_set.generator.size() > 0) h["generator"] = to_list(r.h_set.generator);
  if (r.h_set.closed) h["closed"] = *r.h_set.closed;
  return {{"version", SOCPCQ_VERSION},
          {"tolerances", to_json(tol)},
          {"feasible", true},
          {"point", point},
          {"h_set", h},
          {"nondegeneracy", to_json(r.nondegeneracy)},
          {"rcq", to_json(r.rcq)},
          {"fcr", to_json(r.fcr)},
          {"h_closed", to_json(r.h_closed)},
          {"crcq", to_json(r.crcq)},
          {"mscq", to_json(r.mscq)},
          {"derived_claims", r.derived_claims}};
}

inline json infeasible_report(const Vector& x, const Vector& gx, double distance, const Tolerances& tol) {
  return {{"version", SOCPCQ_VERSION},
          {"tolerances", to_json(tol)},
          {"feasible", false},
          {"point", {{"x", to_list(x)}, {"g", to_list(gx)}, {"location", "outside"}}},
          {"distance", distance}};
}

}  // namespace socpcq::io
