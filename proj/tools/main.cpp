#include <CLI11.hpp>

#include <iostream>
#include <json.hpp>
#include <stdexcept>

#include "commands.hpp"

namespace {

const std::vector<std::string> kMethods{"3f2n", "3f2n+", "d2nt", "roadseg", "planesvd"};
const std::vector<std::string> kFilters{"fd", "roberts", "prewitt", "sobel", "scharr"};
const std::vector<std::string> kTendencies{"mean", "median", "trimean", "trimmean"};
const std::vector<std::string> kCurvatures{"mean", "max", "normal", "gauss"};
const std::vector<std::string> kCombines{"max", "kendall", "pearson"};
const std::vector<std::string> kNoiseModes{"absolute", "relative"};

}  // namespace

int main(int argc, char** argv) {
  using namespace dnorm::cli;
  CLI::App app{"Depth image to surface normal estimation and evaluation"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Render a synthetic scene with ground truth");
  g->add_option("--scene", gen.scene, "Scene description (JSON)")->required();
  g->add_option("--noise-sigma", gen.noise_sigma, "Gaussian noise sigma (m, or fraction of depth)");
  g->add_option("--noise-mode", gen.noise_mode)->check(CLI::IsMember(kNoiseModes));
  g->add_option("--seed", gen.seed, "Noise seed");
  g->add_option("--out-dir", gen.out_dir, "Output directory")->required();

  EstimateOptions est;
  auto* e = app.add_subcommand("estimate", "Estimate surface normals from a depth PFM");
  e->add_option("--depth", est.depth, "Depth image (PFM)")->required();
  e->add_option("--intrinsics", est.intrinsics, "Camera intrinsics (JSON)")->required();
  e->add_option("--method", est.method)->check(CLI::IsMember(kMethods));
  e->add_option("--filter", est.filter)->check(CLI::IsMember(kFilters));
  e->add_option("--tendency", est.tendency)->check(CLI::IsMember(kTendencies));
  e->add_option("--curvature", est.curvature)->check(CLI::IsMember(kCurvatures));
  e->add_option("--correlation", est.correlation, "How tau and eps combine")->check(CLI::IsMember(kCombines));
  e->add_option("--sigma", est.sigma, "CRF node weight");
  e->add_option("--lambda", est.lambda, "CRF edge weight");
  e->add_option("--max-sweeps", est.max_sweeps, "CRF sweep limit");
  e->add_option("--out", est.out, "Output normals (3-channel PFM)")->required();
  e->add_option("--vis", est.vis, "Optional PNG visualization");
  e->add_option("--report", est.report, "Optional JSON run report");
  e->add_flag("--timing", est.timing, "Include wall-clock timings in the report");

  EvalOptions ev;
  auto* v = app.add_subcommand("eval", "Compare estimated normals against ground truth");
  v->add_option("--est", ev.est, "Estimated normals (PFM)")->required();
  v->add_option("--gt", ev.gt, "Ground-truth normals (PFM)")->required();
  v->add_option("--band", ev.band, "Optional band mask (PFM)");
  v->add_option("--report", ev.report, "Output report (JSON)")->required();
  v->add_option("--error-map", ev.error_map, "Optional per-pixel error map (PFM, degrees)");
  v->add_flag("--timing", ev.timing, "Include wall-clock timings in the report");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Filter x tendency x curvature ablation grid");
  b->add_option("--scene", bench.scene, "Scene description (JSON)")->required();
  b->add_option("--methods", bench.methods, "Methods to run")->delimiter(',')->check(CLI::IsMember(kMethods));
  b->add_option("--filters", bench.filters)->delimiter(',')->check(CLI::IsMember(kFilters));
  b->add_option("--tendencies", bench.tendencies)->delimiter(',')->check(CLI::IsMember(kTendencies));
  b->add_option("--curvatures", bench.curvatures)->delimiter(',')->check(CLI::IsMember(kCurvatures));
  b->add_option("--seeds", bench.seeds, "Number of noise seeds")->check(CLI::PositiveNumber);
  b->add_option("--noise-sigma", bench.noise_sigma);
  b->add_option("--noise-mode", bench.noise_mode)->check(CLI::IsMember(kNoiseModes));
  b->add_option("--report", bench.report, "Output report (JSON)")->required();
  b->add_flag("--timing", bench.timing, "Include wall-clock timings in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return run_gen(gen);
    if (e->parsed()) return run_estimate(est);
    if (v->parsed()) return run_eval(ev);
    if (b->parsed()) return run_bench(bench);
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
