#pragma once

// Stratified cross-check of the analytic CRCQ verdict against kappa scans.
// Agreement means: CRCQ holds and the scan is bounded, or CRCQ fails and the
// scan is growing. An inconclusive scan is rerun once with one extra radius.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socpcq/cq_checker.hpp"
#include "socpcq/oracles/generator.hpp"
#include "socpcq/oracles/kappa_scan.hpp"

namespace socpcq::oracles {

struct HarnessOptions {
  std::vector<double> radii = {1e-1, 1e-2, 1e-3};
  long samples_per_radius = 256;
};

struct TrialRecord {
  long index = 0;
  std::uint64_t seed = 0;
  std::string stratum;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  bool nondegeneracy = false;
  bool rcq = false;
  bool fcr = false;
  bool h_closed = false;
  bool crcq = false;
  bool mscq = false;
  std::string crcq_condition;
  KappaScan scan;
  GrowthClass growth;
  bool retried = false;
  bool agreement = false;
  /// Set when generation, analysis or scanning threw.
  std::string error;
};

struct HarnessReport {
  std::uint64_t seed = 0;
  std::vector<TrialRecord> trials;
  long agreements = 0;
  long disagreements = 0;
  long inconclusive = 0;
  long errors = 0;
  long lattice_violations = 0;

  bool clean() const {
    return disagreements == 0 && inconclusive == 0 && errors == 0 && lattice_violations == 0;
  }
};

/// Lattice: nondeg => RCQ => MSCQ, CRCQ <=> FCR and H-closed, MSCQ <=> CRCQ.
inline std::vector<std::string> lattice_violations(const TrialRecord& t) {
  std::vector<std::string> v;
  if (!t.error.empty()) return v;
  if (t.nondegeneracy && !t.rcq) v.emplace_back("nondegeneracy without RCQ");
  if (t.rcq && !t.mscq) v.emplace_back("RCQ without MSCQ");
  if (t.crcq != (t.fcr && t.h_closed)) v.emplace_back("CRCQ differs from FCR and H-closed");
  if (t.mscq != t.crcq) v.emplace_back("MSCQ differs from CRCQ");
  return v;
}

inline bool scan_agrees(bool crcq, Growth g) {
  return crcq ? g == Growth::Bounded : g == Growth::Growing;
}

/// Runs the scan and grades it against the analytic verdict; fills verdict fields of rec.
inline void run_trial(const AffineSocInstance& inst, const Vector& xbar, const HarnessOptions& opt,
                      TrialRecord& rec) {
  const CQReport r = full_report(inst, xbar);
  rec.m = inst.cone_order();
  rec.n = inst.dimension();
  rec.nondegeneracy = r.nondegeneracy.holds;
  rec.rcq = r.rcq.holds;
  rec.fcr = r.fcr.holds;
  rec.h_closed = r.h_closed.holds;
  rec.crcq = r.crcq.holds;
  rec.mscq = r.mscq.holds;
  rec.crcq_condition = r.crcq.holds ? std::string(label(r.crcq.condition)) : r.crcq.failure;

  const FeasibleSetProjector projector(inst);
  const std::uint64_t scan_seed = derive_seed(rec.seed, 0xC0FFEE);
  rec.scan = mscq_kappa_scan(projector, xbar, opt.radii, opt.samples_per_radius, scan_seed);
  rec.growth = classify_growth(rec.scan);
  if (rec.growth.growth == Growth::Inconclusive) {
    std::vector<double> radii = opt.radii;
    radii.push_back(radii.back() / 10.0);
    rec.retried = true;
    rec.scan = mscq_kappa_scan(projector, xbar, radii, opt.samples_per_radius, scan_seed);
    rec.growth = classify_growth(rec.scan);
  }
  rec.agreement = scan_agrees(rec.crcq, rec.growth.growth);
}

inline void tally(HarnessReport& rep, const TrialRecord& t) {
  if (!lattice_violations(t).empty()) ++rep.lattice_violations;
  if (!t.error.empty()) ++rep.errors;
  else if (t.growth.growth == Growth::Inconclusive) ++rep.inconclusive;
  else if (t.agreement) ++rep.agreements;
  else ++rep.disagreements;
}

/// Trial i draws stratum i mod 8 (skipping strata the dimension caps cannot
/// realize) from the stream derive_seed(seed, i).
inline HarnessReport equivalence_harness(long trials, int m_max, int n_max, std::uint64_t seed,
                                         const HarnessOptions& opt = {}) {
  if (trials < 1) throw InputError("trials must be >= 1");
  if (m_max < 2) throw InputError("m_max must be >= 2");
  if (n_max < 1) throw InputError("n_max must be >= 1");
  std::vector<Stratum> strata;
  for (Stratum s : kAllStrata) {
    if (m_max >= min_cone_order(s) && n_max >= min_dimension(s)) strata.push_back(s);
  }
  HarnessReport rep;
  rep.seed = seed;
  for (long i = 0; i < trials; ++i) {
    TrialRecord rec;
    rec.index = i;
    rec.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const Stratum s = strata[static_cast<std::size_t>(i) % strata.size()];
    rec.stratum = std::string(to_string(s));
    try {
      Rng dims(rec.seed);
      const int m = dims.integer(min_cone_order(s), m_max);
      const int n = dims.integer(min_dimension(s), n_max);
      const GeneratedInstance g = random_instance(m, n, s, derive_seed(rec.seed, 1));
      run_trial(g.instance, g.point, opt, rec);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    tally(rep, rec);
    rep.trials.push_back(std::move(rec));
  }
  return rep;
}

/// Repeated trials over a given instance; trial i scans with derive_seed(seed, i).
inline HarnessReport equivalence_harness(const AffineSocInstance& inst, const Vector& xbar, long trials,
                                         std::uint64_t seed, const HarnessOptions& opt = {}) {
  if (trials < 1) throw InputError("trials must be >= 1");
  HarnessReport rep;
  rep.seed = seed;
  for (long i = 0; i < trials; ++i) {
    TrialRecord rec;
    rec.index = i;
    rec.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    rec.stratum = "given";
    try {
      run_trial(inst, xbar, opt, rec);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    tally(rep, rec);
    rep.trials.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace socpcq::oracles
