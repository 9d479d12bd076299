#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "dnorm/config_io.hpp"
#include "dnorm/ddm.hpp"
#include "dnorm/io.hpp"
#include "dnorm/metrics.hpp"
#include "dnorm/sne.hpp"
#include "dnorm/synthgen.hpp"

namespace dnorm::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

struct MethodSettings {
  std::string method = "3f2n";
  SneConfig sne{};
  CurvatureKind curvature = CurvatureKind::Mean;
  CrfConfig crf{};
};

struct MethodRun {
  NormalMap normals;
  std::optional<CrfEnergyReport> crf;
  std::vector<std::pair<std::string, double>> stage_ms;
};

MethodRun run_method(const MethodSettings& s, const DepthImage& depth, const CameraIntrinsics& K) {
  MethodRun run;
  if (s.method == "3f2n+") {
    PlusConfig cfg{s.sne, s.curvature, PearsonPairing::Lag1, s.crf};
    PlusResult r = estimate_3f2n_plus(depth, K, cfg);
    run.normals = std::move(r.normals);
    run.crf = std::move(r.crf);
    run.stage_ms = std::move(r.stage_ms);
    return run;
  }
  SneConfig sne = s.sne;
  if (s.method == "3f2n") {
    sne.method = SneMethod::ThreeF2N;
  } else if (s.method == "roadseg") {
    sne.method = SneMethod::RoadSeg;
  } else if (s.method == "d2nt") {
    sne.method = SneMethod::D2NT;
  } else if (s.method == "planesvd") {
    sne.method = SneMethod::PlaneSVD;
  } else {
    throw std::invalid_argument("unknown method '" + s.method + "'");
  }
  const auto t = Clock::now();
  run.normals = estimate_normals(depth, K, sne);
  run.stage_ms.emplace_back(s.method, ms_since(t));
  return run;
}

Json settings_json(const MethodSettings& s) {
  Json j;
  j["method"] = s.method;
  j["filter"] = std::string(to_string(s.sne.filter.kind));
  j["tendency"] = std::string(to_string(s.sne.tendency.kind));
  if (s.method == "3f2n+") {
    j["curvature"] = std::string(to_string(s.curvature));
    j["correlation"] = std::string(to_string(s.crf.combine));
    j["pearson_pairing"] = std::string(to_string(PearsonPairing::Lag1));
    j["sigma"] = s.crf.sigma;
    j["lambda"] = s.crf.lambda;
    j["max_sweeps"] = s.crf.max_sweeps;
    j["tolerance_deg"] = s.crf.tolerance_deg;
  }
  return j;
}

Json crf_json(const CrfEnergyReport& r) {
  return {{"energies", r.energies}, {"sweeps", r.sweeps}, {"converged", r.converged}};
}

Json timings_json(const std::vector<std::pair<std::string, double>>& stages) {
  Json j = Json::object();
  for (const auto& [name, ms] : stages) j[name] = ms;
  return j;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void ensure_same_shape(const DepthImage& depth, const IntrinsicsFile& intr, const std::string& depth_path) {
  if (depth.width() != intr.width || depth.height() != intr.height) {
    throw std::invalid_argument("'" + depth_path + "' is " + std::to_string(depth.width()) + "x" +
                                std::to_string(depth.height()) + " but the intrinsics declare " +
                                std::to_string(intr.width) + "x" + std::to_string(intr.height));
  }
}

}  // namespace

int run_gen(const GenOptions& opt) {
  const SceneSpec spec = load_scene(opt.scene);
  const NoiseSpec noise{parse_noise_mode(opt.noise_mode), opt.noise_sigma, opt.seed};
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("--noise-sigma must be >= 0");

  const Scene scene = generate_scene(spec);
  const DepthImage depth = add_gaussian_noise(scene.depth, noise);

  const fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  write_pfm(dir / "depth.pfm", depth);
  write_pfm3(dir / "gt_normals.pfm", scene.normals);
  write_pfm(dir / "band.pfm", scene.band);

  Json meta;
  meta["scene"] = scene_to_json(spec);
  meta["noise"] = noise_to_json(noise);
  meta["intrinsics"] = intrinsics_to_json({spec.K, spec.width, spec.height});
  meta["valid_pixels"] = depth.field().valid_count();
  write_json_file(dir / "meta.json", meta);
  write_json_file(dir / "intrinsics.json", intrinsics_to_json({spec.K, spec.width, spec.height}));
  return 0;
}

int run_estimate(const EstimateOptions& opt) {
  const IntrinsicsFile intr = load_intrinsics(opt.intrinsics);
  const DepthImage depth = read_depth_pfm(opt.depth);
  ensure_same_shape(depth, intr, opt.depth);

  MethodSettings s;
  s.method = opt.method;
  s.sne.filter.kind = parse_filter(opt.filter);
  s.sne.tendency.kind = parse_tendency(opt.tendency);
  s.curvature = parse_curvature(opt.curvature);
  s.crf.sigma = opt.sigma;
  s.crf.lambda = opt.lambda;
  s.crf.max_sweeps = opt.max_sweeps;
  s.crf.combine = parse_combine(opt.correlation);
  s.crf.validate();

  const MethodRun run = run_method(s, depth, intr.K);
  write_pfm3(opt.out, run.normals);
  if (!opt.vis.empty()) write_normal_png(opt.vis, run.normals);
  if (!opt.report.empty()) {
    Json report;
    report["config"] = settings_json(s);
    report["inputs"] = {{"depth", opt.depth}, {"intrinsics", opt.intrinsics}};
    report["valid_pixels"] = run.normals.valid_count();
    if (run.crf) report["crf"] = crf_json(*run.crf);
    if (opt.timing) report["runtime_ms"] = timings_json(run.stage_ms);
    write_json_file(opt.report, report);
  }
  return 0;
}

int run_eval(const EvalOptions& opt) {
  const auto t = Clock::now();
  const NormalMap est = read_pfm3(opt.est);
  const NormalMap gt = read_pfm3(opt.gt);
  if (!est.same_shape(gt)) throw std::invalid_argument("'" + opt.est + "' and '" + opt.gt + "' differ in size");
  std::optional<ScalarField> band;
  if (!opt.band.empty()) {
    band = read_pfm(opt.band);
    if (!band->same_shape(gt)) throw std::invalid_argument("'" + opt.band + "' differs in size from the normals");
  }

  const ScalarField err = angular_error_map(est, gt);
  Json report;
  report["inputs"] = {{"est", opt.est}, {"gt", opt.gt}, {"band", opt.band.empty() ? Json(nullptr) : Json(opt.band)}};
  report["pixels"] = err.valid_count();
  report["e_A_deg"] = err.valid_count() ? Json(mean_angular_error(err)) : Json(nullptr);
  if (band) {
    const RegionBreakdown r = region_breakdown(err, *band);
    report["band"] = {{"e_A_deg", optional_number(r.band)}, {"pixels", r.band_count}};
    report["interior"] = {{"e_A_deg", optional_number(r.interior)}, {"pixels", r.interior_count}};
  }
  if (!opt.error_map.empty()) write_pfm(opt.error_map, err);
  if (opt.timing) report["runtime_ms"] = {{"eval", ms_since(t)}};
  write_json_file(opt.report, report);
  if (err.valid_count() == 0) {
    std::cerr << "error: no pixel is valid in both '" << opt.est << "' and '" << opt.gt << "'\n";
    return 1;
  }
  return 0;
}

int run_bench(const BenchOptions& opt) {
  const SceneSpec spec = load_scene(opt.scene);
  const NoiseMode mode = parse_noise_mode(opt.noise_mode);
  if (!(opt.noise_sigma >= 0.0)) throw std::invalid_argument("--noise-sigma must be >= 0");
  const Scene scene = generate_scene(spec);

  std::vector<DepthImage> inputs;
  for (int seed = 0; seed < opt.seeds; ++seed) {
    inputs.push_back(add_gaussian_noise(scene.depth, {mode, opt.noise_sigma, static_cast<std::uint64_t>(seed)}));
  }

  std::vector<MethodSettings> grid;
  for (const auto& method : opt.methods) {
    const bool filtered = method == "3f2n" || method == "3f2n+" || method == "roadseg";
    const bool tended = method == "3f2n" || method == "3f2n+";
    for (const auto& f : filtered ? opt.filters : std::vector<std::string>{"fd"}) {
      for (const auto& t : tended ? opt.tendencies : std::vector<std::string>{"median"}) {
        for (const auto& c : method == "3f2n+" ? opt.curvatures : std::vector<std::string>{"mean"}) {
          MethodSettings s;
          s.method = method;
          s.sne.filter.kind = parse_filter(f);
          s.sne.tendency.kind = parse_tendency(t);
          s.curvature = parse_curvature(c);
          grid.push_back(s);
        }
      }
    }
  }

  Json rows = Json::array();
  for (const auto& s : grid) {
    double sum = 0.0, band_sum = 0.0, interior_sum = 0.0, ms = 0.0;
    int band_n = 0, interior_n = 0;
    for (const auto& depth : inputs) {
      const auto t = Clock::now();
      const MethodRun run = run_method(s, depth, spec.K);
      ms += ms_since(t);
      const ScalarField err = angular_error_map(run.normals, scene.normals);
      sum += mean_angular_error(err);
      const RegionBreakdown r = region_breakdown(err, scene.band);
      if (r.band) {
        band_sum += *r.band;
        ++band_n;
      }
      if (r.interior) {
        interior_sum += *r.interior;
        ++interior_n;
      }
    }
    Json row = settings_json(s);
    row["e_A_deg"] = sum / static_cast<double>(inputs.size());
    row["band_e_A_deg"] = band_n ? Json(band_sum / band_n) : Json(nullptr);
    row["interior_e_A_deg"] = interior_n ? Json(interior_sum / interior_n) : Json(nullptr);
    if (opt.timing) row["runtime_ms"] = ms / static_cast<double>(inputs.size());
    rows.push_back(row);
  }

  Json report;
  report["scene"] = scene_to_json(spec);
  report["noise"] = {{"mode", opt.noise_mode}, {"sigma", opt.noise_sigma}, {"seeds", opt.seeds}};
  report["rows"] = rows;
  write_json_file(opt.report, report);
  return 0;
}

}  // namespace dnorm::cli
