// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only (1..9)

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "socpcq/cq_checker.hpp"
#include "socpcq/io.hpp"
#include "socpcq/oracles/brute_force.hpp"
#include "socpcq/oracles/dim_scan.hpp"
#include "socpcq/oracles/generator.hpp"
#include "socpcq/oracles/harness.hpp"
#include "socpcq/oracles/kappa_scan.hpp"
#include "socpcq/oracles/projection.hpp"
#include "support.hpp"

using namespace socpcq;
using namespace socpcq::oracles;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  std::ostringstream failures;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures << " [failed: " << what << "]";
    }
  }
};

io::InstanceDocument load(const std::string& name) { return io::parse_instance(support::fixture(name)); }

std::string fmt(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(6) << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

void c1(Outcome& o) {
  const auto d = load("degenerate_boundary.json");
  const auto inst = d.instance();
  const Vector x = d.point("xbar");
  const CQReport r = full_report(inst, x);
  o.require(!r.fcr.holds, "FCR false");
  o.require(!r.crcq.holds, "CRCQ false");
  o.require(!r.mscq.holds, "MSCQ false");
  o.require(r.h_closed.holds && r.h_closed.condition == Condition::HClosed_i, "H-closed via Thm4.1(i)");
  const auto scans = fcr_dim_scan(inst, x, 0.1, 1000, kSeed);
  const bool dims = !scans.empty() && scans[0].face == DimScan::Face::ZeroFace &&
                    scans[0].observed_dims == std::set<int>{0, 1};
  o.require(dims, "ZeroFace dims {0,1}");
  o.detail << "FCR=" << r.fcr.holds << " CRCQ=" << r.crcq.holds << " MSCQ=" << r.mscq.holds
           << " H-closed=" << label(r.h_closed.condition) << "; ZeroFace dims {";
  bool first = true;
  for (int k : scans[0].observed_dims) {
    o.detail << (first ? "" : ",") << k;
    first = false;
  }
  o.detail << "} over 1000 samples at radius 0.1";
}

void c2(Outcome& o) {
  const auto d = load("fcr_unstable.json");
  const auto inst = d.instance();
  const CQReport r = full_report(inst, d.point("origin"));
  o.require(r.fcr.holds && r.fcr.condition == Condition::Fcr_i, "FCR via Thm3.2(i) at origin");
  o.require(!r.crcq.holds && !r.mscq.holds, "CRCQ and MSCQ false at origin");
  const auto cls = classify_image_vs_cone(inst.A());
  const Vector v = support::vec({1, 1, 0}).normalized();
  o.require(cls.kind == SubspaceConeClass::Kind::Ray && (cls.ray - v).norm() <= 1e-12, "Ray((1,1,0)/sqrt2)");
  o.require(numeric_rank(inst.A()) == 2, "rank(A) = 2");
  int false_count = 0;
  for (int k = 1; k <= 5; ++k) {
    if (!check_fcr(inst, d.point("x" + std::to_string(k))).holds) ++false_count;
  }
  o.require(false_count == 5, "FCR false at (1/k,0,0), k=1..5");
  o.detail << "origin: FCR " << label(r.fcr.condition) << ", CRCQ=" << r.crcq.holds << ", MSCQ=" << r.mscq.holds
           << ", ray error " << (cls.ray - v).norm() << ", rank " << numeric_rank(inst.A())
           << "; FCR false at " << false_count << "/5 points (1/k,0,0)";
}

void c3(Outcome& o) {
  const auto d = load("vertex_ray_plane.json");
  const auto inst = d.instance();
  const Vector x = d.point("origin");
  const Verdict h = check_h_closed(inst, x);
  o.require(!h.holds && h.failure == "Cor4.2", "H not closed via Cor4.2");
  const auto scan = mscq_kappa_scan(inst, x, {1e-1, 1e-2, 1e-3}, 10000, kSeed);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < scan.kappa_hat.size(); ++i) {
    worst = std::min(worst, scan.kappa_hat[i] / scan.kappa_hat[i - 1]);
  }
  o.require(worst >= 10.0, "consecutive kappa_hat ratio >= 10");
  o.detail << "H-closed=" << h.holds << " (" << h.failure << "); kappa_hat " << fmt(scan.kappa_hat)
           << ", min consecutive ratio " << worst << " (need >= 10)";
}

void c4(Outcome& o) {
  const auto d = load("vertex_ray_line.json");
  const auto inst = d.instance();
  const Vector x = d.point("origin");
  const Verdict c = check_crcq(inst, x);
  o.require(c.holds && c.condition == Condition::Crcq_vi, "CRCQ via Thm4.4(vi)");
  const auto scan = mscq_kappa_scan(inst, x, {1e-1, 1e-2, 1e-3}, 10000, kSeed);
  double err = 0.0;
  for (double k : scan.kappa_hat) err = std::max(err, std::abs(k - std::sqrt(0.5)));
  o.require(err <= 1e-6, "kappa_hat within 1e-6 of sqrt2/2");
  o.detail << "CRCQ " << label(c.condition) << "; kappa_hat " << fmt(scan.kappa_hat) << ", max error "
           << err << " (tol 1e-6)";
}

void c5(Outcome& o) {
  Rng rng(kSeed);
  double worst_dist = 0.0, worst_feas = 0.0, worst_vi = 0.0;
  long count = 0;
  for (Eigen::Index m = 2; m <= 6; ++m) {
    for (int i = 0; i < 10000; ++i) {
      const Vector y = rng.gaussian(m) * std::exp(rng.uniform(-3.0, 3.0));
      const Vector p = project_to_cone(y);
      const double scale = std::max(1.0, y.norm());
      worst_dist = std::max(worst_dist, std::abs(distance_to_cone(y) - (y - p).norm()) / scale);
      worst_feas = std::max(worst_feas, -cone_margin(p) / std::max(1.0, p.norm()));
      for (int k = 0; k < 4; ++k) {
        Vector z(m);
        const Vector r = rng.gaussian(m - 1);
        z << r.norm() + (k == 0 ? 0.0 : rng.uniform(0.0, 2.0)), r;
        worst_vi = std::max(worst_vi, (y - p).dot(z - p) / std::max(1.0, y.norm() * z.norm()));
      }
      ++count;
    }
  }
  o.require(worst_dist <= 1e-10, "|dist - |y - p|| <= 1e-10 max(1,|y|)");
  o.require(worst_feas <= 1e-12, "p in Q_m within 1e-12");
  o.require(worst_vi <= 1e-10, "variational inequality within 1e-10");
  o.detail << count << " vectors; max scaled distance error " << worst_dist << " (tol 1e-10), infeasibility "
           << std::max(0.0, worst_feas) << " (tol 1e-12), VI residual " << std::max(0.0, worst_vi)
           << " (tol 1e-10)";
}

void c6(Outcome& o) {
  Rng rng(kSeed);
  const double tol = kDefaultTol;
  int compared = 0, agreed = 0, drawn = 0;
  std::map<std::string, int> kinds;
  while (compared < 500) {
    Matrix A = rng.gaussian(rng.integer(2, 6), rng.integer(1, 6));
    A.row(0) *= rng.uniform(0.0, 1.5);
    ++drawn;
    const auto c = classify_image_vs_cone(A, tol);
    if (std::abs(c.lambda_max) < 10 * tol) continue;
    const auto b = brute_force_subspace_class(A, 4000, 400, derive_seed(kSeed, static_cast<std::uint64_t>(drawn)));
    ++compared;
    ++kinds[std::string(to_string(c.kind))];
    if (b.kind == c.kind) ++agreed;
  }
  double worst = 0.0;
  int ray_ok = 0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index m = rng.integer(2, 6);
    const Eigen::Index n = rng.integer(1, 6);
    const Eigen::Index k = rng.integer(1, static_cast<int>(std::min(m - 1, n)));
    const auto r = support::ray_matrix(rng, m, n, k);
    const auto c = classify_image_vs_cone(r.A, tol);
    if (c.kind != SubspaceConeClass::Kind::Ray) {
      worst = std::numeric_limits<double>::infinity();
      continue;
    }
    const double e = (c.ray - r.v.normalized()).norm();
    worst = std::max(worst, e);
    if (e <= 1e-8) ++ray_ok;
  }
  o.require(agreed == compared, "100% agreement with brute force");
  o.require(ray_ok == 50, "50/50 rays within 1e-8");
  o.detail << agreed << "/" << compared << " agree (";
  for (const auto& [k, v] : kinds) o.detail << k << " " << v << " ";
  o.detail << "); rays " << ray_ok << "/50, max generator error " << worst << " (tol 1e-8)";
}

const HarnessReport& harness_run() {
  static const HarnessReport rep = equivalence_harness(1000, 6, 6, kSeed);
  return rep;
}

void c7(Outcome& o) {
  const auto& rep = harness_run();
  o.require(rep.disagreements == 0, "zero disagreements");
  o.require(rep.inconclusive == 0, "zero inconclusive after retry");
  o.require(rep.errors == 0, "zero trial errors");
  o.detail << rep.trials.size() << " trials: " << rep.agreements << " agree, " << rep.disagreements
           << " disagree, " << rep.inconclusive << " inconclusive, " << rep.errors << " errors; by stratum:";
  std::map<std::string, std::array<int, 3>> by;
  for (const auto& t : rep.trials) {
    auto& row = by[t.stratum];
    if (!t.error.empty() || t.growth.growth == Growth::Inconclusive) ++row[2];
    else if (t.agreement) ++row[0];
    else ++row[1];
  }
  for (const auto& [s, row] : by) o.detail << " " << s << " " << row[0] << "/" << row[1] << "/" << row[2];
  o.detail << " (agree/disagree/inconclusive)";
}

void c8(Outcome& o) {
  Rng rng(kSeed);
  ProjectionOptions opt;
  opt.force_splitting = true;
  double worst = 0.0;
  long points = 0;
  for (int t = 0; t < 50; ++t) {
    const int m = rng.integer(2, 6);
    const int n = rng.integer(1, 6);
    const auto g = random_instance(m, n, Stratum::VertexLine, rng.engine()());
    const auto cls = classify_image_vs_cone(g.instance.A());
    const Vector a = g.instance.A().transpose() * cls.ray;
    const FeasibleSetProjector proj(g.instance, opt);
    for (int k = 0; k < 10; ++k) {
      Vector x = g.point + rng.ball(n, 1.0);
      // Infeasible side of the half-space, where the splitting iteration runs.
      if (a.dot(x - g.point) > 0) x = 2 * g.point - x;
      const Vector p = support::halfspace_projection(a, g.point, x);
      worst = std::max(worst, (proj.project(x).z - p).norm());
      ++points;
    }
  }
  o.require(worst <= 1e-7, "splitting matches closed form to 1e-7");
  o.detail << "50 instances, " << points << " points; max |z - p| " << worst << " (tol 1e-7)";
}

void c9(Outcome& o) {
  const auto& rep = harness_run();
  long checked = 0;
  for (const auto& t : rep.trials) {
    if (t.error.empty()) ++checked;
  }
  o.require(rep.lattice_violations == 0, "zero lattice violations");
  o.detail << checked << " trials checked; " << rep.lattice_violations << " violations";
}

struct Criterion {
  const char* title;
  double limit_s;
  std::function<void(Outcome&)> run;
};

const std::map<int, Criterion> kCriteria = {
    {1, {"degenerate boundary point verdicts and face dimensions", 1.0, c1}},
    {2, {"FCR at the origin but not along (1/k,0,0)", 1.0, c2}},
    {3, {"non-closed H and growing kappa at the vertex of the plane instance", 10.0, c3}},
    {4, {"CRCQ via the line clause and kappa = sqrt2/2", 10.0, c4}},
    {5, {"cone kernel suite", 10.0, c5}},
    {6, {"subspace classifier vs brute force", 30.0, c6}},
    {7, {"CRCQ vs kappa-scan equivalence harness", 60.0, c7}},
    {8, {"splitting projection vs half-space closed form", 10.0, c8}},
    {9, {"implication lattice over harness trials", 60.0, c9}},
};

bool run(int id) {
  const Criterion& c = kCriteria.at(id);
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.failures << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= c.limit_s) o.require(false, "runtime limit");
  std::cout << "criterion " << id << ": " << (o.ok ? "PASS" : "FAIL") << " " << c.title << ": "
            << o.detail.str() << o.failures.str() << " (" << std::fixed << std::setprecision(3) << secs << " s, limit "
            << c.limit_s << " s)" << std::defaultfloat << std::endl;
  return o.ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      const int id = std::atoi(argv[++i]);
      if (!kCriteria.count(id)) {
        std::cerr << "unknown criterion " << argv[i] << "\n";
        return 2;
      }
      ids.push_back(id);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (ids.empty()) {
    for (const auto& [id, c] : kCriteria) ids.push_back(id);
  }
  bool all = true;
  for (int id : ids) all = run(id) && all;
  return all ? 0 : 1;
}
