#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dnorm::cli {

struct GenOptions {
  std::string scene;
  double noise_sigma = 0.0;
  std::string noise_mode = "relative";
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct EstimateOptions {
  std::string depth;
  std::string intrinsics;
  std::string method = "3f2n";
  std::string filter = "fd";
  std::string tendency = "median";
  std::string curvature = "mean";
  std::string correlation = "max";
  double sigma = 1.0;
  double lambda = 1.0;
  int max_sweeps = 10;
  std::string out;
  std::string vis;
  std::string report;
  bool timing = false;
};

struct EvalOptions {
  std::string est;
  std::string gt;
  std::string band;
  std::string report;
  std::string error_map;
  bool timing = false;
};

struct BenchOptions {
  std::string scene;
  std::vector<std::string> methods{"3f2n+"};
  std::vector<std::string> filters{"fd", "roberts"};
  std::vector<std::string> tendencies{"median", "trimean", "trimmean"};
  std::vector<std::string> curvatures{"mean", "max", "normal", "gauss"};
  int seeds = 1;
  double noise_sigma = 0.0;
  std::string noise_mode = "relative";
  std::string report;
  bool timing = false;
};

// Each returns the process exit code; IO and validation failures throw.
int run_gen(const GenOptions& opt);
int run_estimate(const EstimateOptions& opt);
int run_eval(const EvalOptions& opt);
int run_bench(const BenchOptions& opt);

}  // namespace dnorm::cli
