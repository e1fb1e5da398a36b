#pragma once

// Subcommands behind the socpcq binary. Each writes to the given streams and
// returns the process exit code:
//   0 success, 1 infeasible point or harness disagreement, 2 usage or input
//   error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "socpcq/cq_checker.hpp"
#include "socpcq/io.hpp"
#include "socpcq/oracles/dim_scan.hpp"
#include "socpcq/oracles/harness.hpp"
#include "socpcq/oracles/kappa_scan.hpp"
#include "socpcq/oracles/projection.hpp"

namespace socpcq::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kUsage = 2, kNumerical = 3 };

inline constexpr std::uint64_t kDefaultSeed = 42;

struct AnalyzeArgs {
  std::string instance_path;
  std::string point;
  std::string out_path;
  bool json_stdout = false;
};

struct ScanArgs {
  std::string instance_path;
  std::string point;
  std::vector<double> radii = {1e-1, 1e-2, 1e-3};
  long samples = 1000;
  std::uint64_t seed = kDefaultSeed;
};

struct HarnessArgs {
  long trials = 1000;
  int m_max = 6;
  int n_max = 6;
  std::uint64_t seed = kDefaultSeed;
  long samples = 256;
  std::string out_path;
  std::string instance_path;
  std::string point;
};

struct ProjectArgs {
  std::string instance_path;
  std::string point;
};

namespace detail {

/// Entries below 1e-13 relative to the vector print as 0.
inline std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os << std::setprecision(10) << "(";
  const double cut = 1e-13 * std::max(1.0, v.lpNorm<Eigen::Infinity>());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << (i ? ", " : "") << (std::abs(v(i)) < cut ? 0.0 : v(i));
  }
  os << ")";
  return os.str();
}

inline std::string display_failure(const std::string& f) {
  if (f.rfind("Cor", 0) == 0 && f.size() > 3 && f[3] != ' ') return "Cor " + f.substr(3);
  return f;
}

inline std::string verdict_phrase(const Verdict& v) {
  return v.holds ? "holds (" + display_label(v.condition) + ")" : "fails";
}

inline void write_summary(std::ostream& out, const std::string& name, const CQReport& r) {
  out << "point " << name << ": g(x) = " << format_vector(r.point.y) << " ["
      << to_string(r.point.location) << "]\n";
  out << "nondegeneracy: " << verdict_phrase(r.nondegeneracy) << "; RCQ: " << verdict_phrase(r.rcq) << "\n";
  out << "FCR: " << verdict_phrase(r.fcr) << "\n";
  out << "H(x̄): ";
  if (r.h_closed.holds) {
    out << "closed (" << display_label(r.h_closed.condition) << ")";
  } else {
    out << "not closed (" << display_failure(r.h_closed.failure) << ")";
  }
  out << "; CRCQ: " << verdict_phrase(r.crcq) << "; MSCQ: " << verdict_phrase(r.mscq) << "\n";
  for (const auto& c : r.derived_claims) out << "derived: " << c << "\n";
}

struct Loaded {
  io::InstanceDocument doc;
  AffineSocInstance inst;
  Vector x;
};

inline Loaded load(const std::string& path, const std::string& point) {
  io::InstanceDocument doc = io::parse_instance(path);
  AffineSocInstance inst = doc.instance();
  Vector x = doc.point(point);
  return {std::move(doc), std::move(inst), std::move(x)};
}

inline oracles::ProjectionOptions projection_options(const io::Tolerances& t) {
  oracles::ProjectionOptions o;
  o.tol = t.projection_tol;
  o.max_iter = t.max_iter;
  return o;
}

inline std::string join(const std::vector<double>& v, char sep) {
  std::ostringstream os;
  os << std::setprecision(10);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? std::string(1, sep) : "") << v[i];
  return os.str();
}

}  // namespace detail

inline int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const detail::Loaded L = detail::load(a.instance_path, a.point);
    const io::Tolerances& tol = L.doc.tolerances;
    io::json report;
    int code = kOk;
    try {
      const CQReport r = full_report(L.inst, L.x, tol.tol);
      detail::write_summary(out, a.point, r);
      report = io::to_json(r, tol);
    } catch (const InfeasiblePointError& e) {
      out << "point " << a.point << ": infeasible, dist(g(x), Q_m) = " << std::setprecision(10)
          << e.distance() << "\n";
      report = io::infeasible_report(L.x, L.inst.evaluate(L.x), e.distance(), tol);
      code = kInfeasible;
    }
    if (a.json_stdout) out << report.dump(2) << "\n";
    if (!a.out_path.empty()) {
      std::ofstream f(a.out_path);
      if (!f) {
        err << "error: cannot write " << a.out_path << "\n";
        return kUsage;
      }
      f << report.dump(2) << "\n";
    }
    return code;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

inline int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  try {
    if (a.samples < 1) throw InputError("--samples must be >= 1");
    oracles::require_decreasing_radii(a.radii);
    const detail::Loaded L = detail::load(a.instance_path, a.point);
    const double tol = L.doc.tolerances.tol;
    try {
      analyze_point(L.inst, L.x, tol);
    } catch (const InfeasiblePointError& e) {
      out << "point " << a.point << ": infeasible, dist(g(x), Q_m) = " << std::setprecision(10)
          << e.distance() << "\n";
      return kInfeasible;
    }
    const oracles::FeasibleSetProjector projector(L.inst, detail::projection_options(L.doc.tolerances));
    const oracles::KappaScan ks = oracles::mscq_kappa_scan(projector, L.x, a.radii, a.samples, a.seed, tol);
    out << "radius,kappa_hat,samples,discarded\n" << std::setprecision(10);
    for (std::size_t i = 0; i < ks.radii.size(); ++i) {
      out << ks.radii[i] << "," << ks.kappa_hat[i] << "," << ks.samples[i] << ","
          << ks.discarded[i] + ks.floored[i] << "\n";
    }
    const oracles::GrowthClass g = oracles::classify_growth(ks);
    out << "# growth: " << to_string(g.growth) << " (ratio " << g.ratio << ")\n";

    const auto dims = oracles::fcr_dim_scan(L.inst, L.x, a.radii.front(), a.samples, a.seed, tol);
    out << "\nface,observed_dims,samples,discarded\n";
    for (const auto& d : dims) {
      out << d.label() << ",\"{";
      bool first = true;
      for (int k : d.observed_dims) {
        out << (first ? "" : ",") << k;
        first = false;
      }
      out << "}\"," << d.sample_count << "," << d.discarded << "\n";
    }
    out << "# FCR-consistent: " << (oracles::fcr_consistent(dims) ? "yes" : "no") << "\n";
    return kOk;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

inline void write_trials_csv(std::ostream& os, const oracles::HarnessReport& rep) {
  os << "index,seed,stratum,m,n,nondegeneracy,rcq,fcr,h_closed,crcq,mscq,condition,radii,kappa_hat,"
        "growth,ratio,retried,agreement,error\n"
     << std::setprecision(10);
  for (const auto& t : rep.trials) {
    os << t.index << "," << t.seed << "," << t.stratum << "," << t.m << "," << t.n << ","
       << t.nondegeneracy << "," << t.rcq << "," << t.fcr << "," << t.h_closed << "," << t.crcq << ","
       << t.mscq << "," << t.crcq_condition << "," << detail::join(t.scan.radii, ';') << ","
       << detail::join(t.scan.kappa_hat, ';') << "," << to_string(t.growth.growth) << "," << t.growth.ratio
       << "," << t.retried << "," << t.agreement << ",\"";
    for (char c : t.error) os << (c == '"' ? '\'' : c);
    os << "\"\n";
  }
}

inline int cmd_harness(const HarnessArgs& a, std::ostream& out, std::ostream& err) {
  try {
    if (a.trials < 1) throw InputError("--trials must be >= 1");
    if (a.samples < 1) throw InputError("--samples must be >= 1");
    oracles::HarnessOptions opt;
    opt.samples_per_radius = a.samples;
    oracles::HarnessReport rep;
    if (!a.instance_path.empty()) {
      if (a.point.empty()) throw InputError("--point is required with --instance");
      const detail::Loaded L = detail::load(a.instance_path, a.point);
      rep = oracles::equivalence_harness(L.inst, L.x, a.trials, a.seed, opt);
    } else {
      rep = oracles::equivalence_harness(a.trials, a.m_max, a.n_max, a.seed, opt);
    }
    if (!a.out_path.empty()) {
      std::ofstream f(a.out_path);
      if (!f) throw InputError("cannot write " + a.out_path);
      write_trials_csv(f, rep);
    }
    for (const auto& t : rep.trials) {
      const bool listed = !a.instance_path.empty() || !t.error.empty() || !t.agreement ||
                          !oracles::lattice_violations(t).empty();
      if (!listed) continue;
      out << "trial " << t.index << " [" << t.stratum << "]: ";
      if (!t.error.empty()) {
        out << "error: " << t.error << "\n";
        continue;
      }
      out << "crcq=" << (t.crcq ? "true" : "false") << ", kappa=" << to_string(t.growth.growth)
          << ", " << (t.agreement ? "agreement" : "disagreement") << " (kappa_hat "
          << detail::join(t.scan.kappa_hat, ';') << ", ratio " << t.growth.ratio
          << (t.retried ? ", retried" : "") << ")\n";
      for (const auto& v : oracles::lattice_violations(t)) out << "  lattice violation: " << v << "\n";
    }
    out << "trials: " << rep.trials.size() << "; agreements: " << rep.agreements
        << "; disagreements: " << rep.disagreements << "; inconclusive: " << rep.inconclusive
        << "; errors: " << rep.errors << "; lattice violations: " << rep.lattice_violations << "\n";
    return rep.clean() ? kOk : kInfeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

inline int cmd_project(const ProjectArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const detail::Loaded L = detail::load(a.instance_path, a.point);
    const oracles::FeasibleSetProjector projector(L.inst, detail::projection_options(L.doc.tolerances));
    const oracles::ProjectionResult p = projector.project(L.x);
    out << std::setprecision(10);
    out << "z = " << detail::format_vector(p.z) << "\n";
    out << "dist(x, Omega) = " << p.distance << "\n";
    out << "dist(g(x), Q_m) = " << distance_to_cone(L.inst.evaluate(L.x)) << "\n";
    out << "method: " << to_string(p.method) << "; certified gap " << p.gap << "\n";
    return kOk;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace socpcq::cli
