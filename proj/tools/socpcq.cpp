// socpcq: constraint qualifications of affine second-order cone constraints.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "socpcq/cli.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SOCPCQ_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable SOCPCQ_SEED='" << s << "'\n";
    }
  }
  return socpcq::cli::kDefaultSeed;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace socpcq::cli;
  CLI::App app{"Decide FCR, CRCQ, MSCQ, RCQ and nondegeneracy for Ax + b in Q_m"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SOCPCQ_VERSION);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Analyze a named point and print its CQ verdicts");
  an->add_option("instance", analyze.instance_path, "Instance JSON file")->required();
  an->add_option("--point", analyze.point, "Point name")->required();
  an->add_option("--out", analyze.out_path, "Write the JSON report here");
  an->add_flag("--json", analyze.json_stdout, "Also print the JSON report");

  ScanArgs scan;
  scan.seed = default_seed();
  auto* sc = app.add_subcommand("scan", "Sampled kappa and face-dimension scans around a point");
  sc->add_option("instance", scan.instance_path, "Instance JSON file")->required();
  sc->add_option("--point", scan.point, "Point name")->required();
  sc->add_option("--radii", scan.radii, "Decreasing radii")->delimiter(',');
  sc->add_option("--samples", scan.samples, "Samples per radius");
  sc->add_option("--seed", scan.seed, "RNG seed (default $SOCPCQ_SEED or 42)");

  HarnessArgs harness;
  harness.seed = default_seed();
  auto* ha = app.add_subcommand("harness", "CRCQ verdicts against kappa scans on random instances");
  ha->add_option("--trials", harness.trials, "Number of trials");
  ha->add_option("--mmax", harness.m_max, "Largest cone order");
  ha->add_option("--nmax", harness.n_max, "Largest variable dimension");
  ha->add_option("--seed", harness.seed, "Master seed (default $SOCPCQ_SEED or 42)");
  ha->add_option("--samples", harness.samples, "Samples per radius");
  ha->add_option("--out", harness.out_path, "Per-trial CSV output");
  ha->add_option("--instance", harness.instance_path, "Run on this instance instead of random ones");
  ha->add_option("--point", harness.point, "Point name for --instance");

  ProjectArgs project;
  auto* pr = app.add_subcommand("project", "Project a named point onto the feasible set");
  pr->add_option("instance", project.instance_path, "Instance JSON file")->required();
  pr->add_option("--point", project.point, "Point name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (an->parsed()) return cmd_analyze(analyze, std::cout, std::cerr);
  if (sc->parsed()) return cmd_scan(scan, std::cout, std::cerr);
  if (ha->parsed()) return cmd_harness(harness, std::cout, std::cerr);
  return cmd_project(project, std::cout, std::cerr);
}
