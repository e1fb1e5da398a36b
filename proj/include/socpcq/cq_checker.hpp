#pragma once

// Decision procedures for constraint qualifications of g(x) = Ax + b in Q_m at
// a feasible point. Every verdict names the clause that decided it and carries
// the numbers needed to recheck that clause.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socpcq/affine_instance.hpp"
#include "socpcq/subspace_cone.hpp"

namespace socpcq {

enum class Condition {
  None,
  NondegInterior,
  NondegGradient,
  NondegFullRank,
  RcqInterior,
  RcqGradient,
  RcqMeetsInterior,
  Fcr_i,
  Fcr_ii,
  Fcr_iii,
  Fcr_iv,
  HClosed_i,
  HClosed_ii,
  HClosed_iii,
  HClosed_iv,
  Crcq_i,
  Crcq_ii,
  Crcq_iii,
  Crcq_iv,
  Crcq_v,
  Crcq_vi,
  Mscq,
};

/// Machine label used in reports, e.g. "Thm4.4(vi)".
inline std::string_view label(Condition c) {
  switch (c) {
    case Condition::None: return "none";
    case Condition::NondegInterior: return "nondeg:interior";
    case Condition::NondegGradient: return "nondeg:grad_phi";
    case Condition::NondegFullRank: return "nondeg:full_rank";
    case Condition::RcqInterior: return "rcq:interior";
    case Condition::RcqGradient: return "rcq:grad_phi";
    case Condition::RcqMeetsInterior: return "rcq:meets_interior";
    case Condition::Fcr_i: return "Thm3.2(i)";
    case Condition::Fcr_ii: return "Thm3.2(ii)";
    case Condition::Fcr_iii: return "Thm3.2(iii)";
    case Condition::Fcr_iv: return "Thm3.2(iv)";
    case Condition::HClosed_i: return "Thm4.1(i)";
    case Condition::HClosed_ii: return "Thm4.1(ii)";
    case Condition::HClosed_iii: return "Thm4.1(iii)";
    case Condition::HClosed_iv: return "Thm4.1(iv)";
    case Condition::Crcq_i: return "Thm4.4(i)";
    case Condition::Crcq_ii: return "Thm4.4(ii)";
    case Condition::Crcq_iii: return "Thm4.4(iii)";
    case Condition::Crcq_iv: return "Thm4.4(iv)";
    case Condition::Crcq_v: return "Thm4.4(v)";
    case Condition::Crcq_vi: return "Thm4.4(vi)";
    case Condition::Mscq: return "Thm5.1";
  }
  return "unknown";
}

inline std::optional<Condition> condition_from_label(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Condition::Mscq); ++i) {
    const auto c = static_cast<Condition>(i);
    if (label(c) == s) return c;
  }
  return std::nullopt;
}

/// Human-readable form, e.g. "Thm 4.4 (vi)".
inline std::string display_label(Condition c) {
  std::string s(label(c));
  if (s.rfind("Thm", 0) != 0) return s;
  s.insert(3, " ");
  const auto paren = s.find('(');
  if (paren != std::string::npos) s.insert(paren, " ");
  return s;
}

/// Clauses at which g(x) = 0. Used by the exclusivity property.
inline bool is_vertex_clause(Condition c) {
  return c == Condition::Crcq_iv || c == Condition::Crcq_v || c == Condition::Crcq_vi;
}

struct Evidence {
  std::map<std::string, std::vector<double>> values;
  std::vector<std::string> notes;
  bool marginal = false;

  void add(const std::string& key, double v) { values[key] = {v}; }
  void add(const std::string& key, const Vector& v) {
    values[key] = std::vector<double>(v.data(), v.data() + v.size());
  }
  const std::vector<double>* find(const std::string& key) const {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  }
};

struct Verdict {
  bool holds = false;
  Condition condition = Condition::None;
  Evidence evidence;
  /// Reason for a failing verdict, e.g. "Cor4.2".
  std::string failure;
};

struct CQReport {
  PointAnalysis point;
  HSetDescription h_set;
  Verdict nondegeneracy;
  Verdict rcq;
  Verdict fcr;
  Verdict h_closed;
  Verdict crcq;
  Verdict mscq;
  std::vector<std::string> derived_claims;
};

namespace detail {

struct VertexFacts {
  SubspaceConeClass cls;
  bool image_is_ray_line = false;
};

inline VertexFacts vertex_facts(const AffineSocInstance& inst, double tol) {
  VertexFacts f;
  f.cls = classify_image_vs_cone(inst.A(), tol);
  if (f.cls.kind == SubspaceConeClass::Kind::Ray) {
    f.image_is_ray_line = image_equals_line(inst.A(), f.cls.ray, tol);
  }
  return f;
}

inline bool gradient_nonzero(const AffineSocInstance& inst, const PointAnalysis& pa) {
  return pa.reduction.grad_phi.norm() > pa.tol * inst.operator_norm();
}

inline void add_gradient_evidence(Evidence& ev, const AffineSocInstance& inst,
                                  const PointAnalysis& pa) {
  ev.add("grad_phi", pa.reduction.grad_phi);
  ev.add("grad_phi_norm", pa.reduction.grad_phi.norm());
  ev.add("threshold", pa.tol * inst.operator_norm());
}

inline void add_class_evidence(Evidence& ev, const VertexFacts& f) {
  ev.add("rank", static_cast<double>(f.cls.rank));
  ev.add("lambda_max", f.cls.lambda_max);
  if (f.cls.kind == SubspaceConeClass::Kind::Ray) ev.add("ray", f.cls.ray);
  if (f.cls.kind == SubspaceConeClass::Kind::MeetsInterior) ev.add("witness", f.cls.witness);
  if (f.cls.marginal) {
    ev.marginal = true;
    ev.notes.emplace_back("spectral margin within tolerance");
  }
}

inline Verdict pass(Condition c) { return Verdict{true, c, {}, {}}; }

inline Verdict fail(std::string why) {
  Verdict v;
  v.failure = std::move(why);
  return v;
}

inline Verdict nondegeneracy(const AffineSocInstance& inst, const PointAnalysis& pa) {
  switch (pa.location) {
    case ConeLocation::Interior: return pass(Condition::NondegInterior);
    case ConeLocation::PositiveBoundary: {
      Verdict v = gradient_nonzero(inst, pa) ? pass(Condition::NondegGradient)
                                             : fail("grad phi vanishes");
      add_gradient_evidence(v.evidence, inst, pa);
      return v;
    }
    default: {
      const int r = numeric_rank(inst.A(), pa.tol);
      Verdict v = r == inst.cone_order() ? pass(Condition::NondegFullRank) : fail("rank(A) < m");
      v.evidence.add("rank", static_cast<double>(r));
      v.evidence.add("m", static_cast<double>(inst.cone_order()));
      return v;
    }
  }
}

inline Verdict rcq(const AffineSocInstance& inst, const PointAnalysis& pa, const VertexFacts* f) {
  switch (pa.location) {
    case ConeLocation::Interior: return pass(Condition::RcqInterior);
    case ConeLocation::PositiveBoundary: {
      Verdict v = gradient_nonzero(inst, pa) ? pass(Condition::RcqGradient)
                                             : fail("Im(A) lies in the supporting hyperplane");
      add_gradient_evidence(v.evidence, inst, pa);
      return v;
    }
    default: {
      Verdict v = f->cls.kind == SubspaceConeClass::Kind::MeetsInterior
                      ? pass(Condition::RcqMeetsInterior)
                      : fail("Im(A) misses int(Q_m)");
      add_class_evidence(v.evidence, *f);
      return v;
    }
  }
}

inline Verdict fcr(const AffineSocInstance& inst, const PointAnalysis& pa) {
  switch (pa.location) {
    case ConeLocation::Zero: return pass(Condition::Fcr_i);
    case ConeLocation::Interior: return pass(Condition::Fcr_ii);
    default: break;
  }
  if (gradient_nonzero(inst, pa)) {
    Verdict v = pass(Condition::Fcr_iii);
    add_gradient_evidence(v.evidence, inst, pa);
    return v;
  }
  if (auto cert = vanishing_reduction_test(inst, pa)) {
    Verdict v = pass(Condition::Fcr_iv);
    v.evidence.add("u", cert->u);
    v.evidence.add("w", cert->w);
    v.evidence.add("c", cert->c);
    return v;
  }
  Verdict v = fail("grad phi vanishes at the point but not nearby");
  add_gradient_evidence(v.evidence, inst, pa);
  return v;
}

inline Verdict h_closed(const PointAnalysis& pa, const VertexFacts* f) {
  if (pa.location != ConeLocation::Zero) return pass(Condition::HClosed_i);
  Verdict v;
  switch (f->cls.kind) {
    case SubspaceConeClass::Kind::MeetsInterior: v = pass(Condition::HClosed_ii); break;
    case SubspaceConeClass::Kind::ZeroOnly: v = pass(Condition::HClosed_iii); break;
    case SubspaceConeClass::Kind::Ray:
      v = f->image_is_ray_line ? pass(Condition::HClosed_iv) : fail("Cor4.2");
      break;
  }
  add_class_evidence(v.evidence, *f);
  return v;
}

inline Verdict crcq(const AffineSocInstance& inst, const PointAnalysis& pa, const VertexFacts* f) {
  if (pa.location == ConeLocation::Interior) return pass(Condition::Crcq_i);
  if (pa.location == ConeLocation::PositiveBoundary) {
    Verdict v = fcr(inst, pa);
    if (v.condition == Condition::Fcr_iii) v.condition = Condition::Crcq_ii;
    else if (v.condition == Condition::Fcr_iv) v.condition = Condition::Crcq_iii;
    return v;
  }
  Verdict v = h_closed(pa, f);
  if (v.condition == Condition::HClosed_ii) v.condition = Condition::Crcq_iv;
  else if (v.condition == Condition::HClosed_iii) v.condition = Condition::Crcq_v;
  else if (v.condition == Condition::HClosed_iv) v.condition = Condition::Crcq_vi;
  return v;
}

/// Closed-form error-bound data for the clauses where one is available.
inline void add_modulus_evidence(Verdict& v, Condition clause, const AffineSocInstance& inst,
                                 const PointAnalysis& pa, const VertexFacts* f) {
  switch (clause) {
    case Condition::Crcq_i:
    case Condition::Crcq_iii:
      v.evidence.notes.emplace_back("point is interior to the feasible set");
      v.evidence.add("kappa", 0.0);
      break;
    case Condition::Crcq_ii:
    case Condition::Crcq_iv:
      v.evidence.notes.emplace_back("Robinson CQ holds");
      break;
    case Condition::Crcq_v: {
      if (f->cls.rank == 0) {
        v.evidence.notes.emplace_back("A = 0: feasible set is all of R^n");
        v.evidence.add("kappa", 0.0);
        break;
      }
      // M = |h^{-1}| for h = A restricted to ker(A)^perp; eta = min over the
      // unit sphere of Im(A) of dist(y, Q_m), attained where y0 is largest.
      const Vector sv = Eigen::JacobiSVD<Matrix>(inst.A()).singularValues();
      const double sigma_min = sv(f->cls.rank - 1);
      const Matrix B = image_basis(inst.A(), pa.tol);
      const double c = B.row(0).norm();
      const double eta = kHalfSqrt2 * (std::sqrt(std::max(0.0, 1.0 - c * c)) - c);
      v.evidence.add("inverse_restriction_norm", 1.0 / sigma_min);
      v.evidence.add("eta", eta);
      v.evidence.add("kappa_bound", 1.0 / (sigma_min * eta));
      break;
    }
    case Condition::Crcq_vi: {
      // A = v a^T with |v| = 1, so a = A^T v and kappa = 1 / (|a| |v|).
      const Vector a = inst.A().transpose() * f->cls.ray;
      v.evidence.add("a", a);
      v.evidence.add("v", f->cls.ray);
      v.evidence.add("kappa", 1.0 / a.norm());
      break;
    }
    default: break;
  }
}

inline Verdict mscq(const AffineSocInstance& inst, const PointAnalysis& pa, const VertexFacts* f) {
  Verdict base = crcq(inst, pa, f);
  Verdict v = base;
  if (base.holds) {
    v.condition = Condition::Mscq;
    v.evidence.notes.emplace_back("via " + std::string(label(base.condition)));
    add_modulus_evidence(v, base.condition, inst, pa, f);
  }
  return v;
}

inline std::optional<VertexFacts> facts_if_vertex(const AffineSocInstance& inst,
                                                  const PointAnalysis& pa) {
  if (pa.location != ConeLocation::Zero) return std::nullopt;
  return vertex_facts(inst, pa.tol);
}

}  // namespace detail

inline Verdict check_nondegeneracy(const AffineSocInstance& inst, const PointAnalysis& pa) {
  return detail::nondegeneracy(inst, pa);
}

inline Verdict check_rcq(const AffineSocInstance& inst, const PointAnalysis& pa) {
  const auto f = detail::facts_if_vertex(inst, pa);
  return detail::rcq(inst, pa, f ? &*f : nullptr);
}

inline Verdict check_fcr(const AffineSocInstance& inst, const PointAnalysis& pa) {
  return detail::fcr(inst, pa);
}

inline Verdict check_h_closed(const AffineSocInstance& inst, const PointAnalysis& pa) {
  const auto f = detail::facts_if_vertex(inst, pa);
  return detail::h_closed(pa, f ? &*f : nullptr);
}

inline Verdict check_crcq(const AffineSocInstance& inst, const PointAnalysis& pa) {
  const auto f = detail::facts_if_vertex(inst, pa);
  return detail::crcq(inst, pa, f ? &*f : nullptr);
}

inline Verdict check_mscq(const AffineSocInstance& inst, const PointAnalysis& pa) {
  const auto f = detail::facts_if_vertex(inst, pa);
  return detail::mscq(inst, pa, f ? &*f : nullptr);
}

inline Verdict check_nondegeneracy(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  return check_nondegeneracy(inst, analyze_point(inst, x, tol));
}

inline Verdict check_rcq(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  return check_rcq(inst, analyze_point(inst, x, tol));
}

inline Verdict check_fcr(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  return check_fcr(inst, analyze_point(inst, x, tol));
}

inline Verdict check_h_closed(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  return check_h_closed(inst, analyze_point(inst, x, tol));
}

inline Verdict check_crcq(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  return check_crcq(inst, analyze_point(inst, x, tol));
}

inline Verdict check_mscq(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  return check_mscq(inst, analyze_point(inst, x, tol));
}

inline CQReport full_report(const AffineSocInstance& inst, const PointAnalysis& pa) {
  const auto f = detail::facts_if_vertex(inst, pa);
  const detail::VertexFacts* fp = f ? &*f : nullptr;

  CQReport r;
  r.point = pa;
  r.nondegeneracy = detail::nondegeneracy(inst, pa);
  r.rcq = detail::rcq(inst, pa, fp);
  r.fcr = detail::fcr(inst, pa);
  r.h_closed = detail::h_closed(pa, fp);
  r.crcq = detail::crcq(inst, pa, fp);
  r.mscq = detail::mscq(inst, pa, fp);
  r.h_set = h_set_description(inst, pa);
  r.h_set.closed = r.h_closed.holds;

  if (r.crcq.holds != (r.fcr.holds && r.h_closed.holds)) {
    throw NumericalFailure("inconsistent verdicts: CRCQ differs from FCR and H-closedness");
  }
  if (r.mscq.holds != r.crcq.holds) {
    throw NumericalFailure("inconsistent verdicts: MSCQ differs from CRCQ");
  }
  if (r.nondegeneracy.holds && !r.rcq.holds) {
    throw NumericalFailure("inconsistent verdicts: nondegeneracy without RCQ");
  }
  if (r.mscq.holds) {
    r.derived_claims.emplace_back("T_Omega(x) = L_Omega(x)");
    r.derived_claims.emplace_back("N_Omega(x) = H(x)");
  }
  return r;
}

inline CQReport full_report(const AffineSocInstance& inst, const Vector& x,
                            double tol = kDefaultTol) {
  return full_report(inst, analyze_point(inst, x, tol));
}

}  // namespace socpcq
