// One entry point per subcommand. Each takes a plain parameter struct (filled
// either from parsed flags or from a recorded manifest), writes its outputs
// plus a run manifest, and returns the process exit code.
#pragma once

#include <string>

#include "run_manifest.hpp"

namespace tvwf::cli {

struct SolverFlags {
    double dt = 1.0;
    double eps = 1e-3;
    double tau0 = 1.0;
    double tau_decay = 0.5;
    double tau_min = 1e-8;
    double eps_tol = 1e-6;
    int max_inner = 50;
    double tol_lin = 1e-10;
    double u_floor_rel = 1e-3;
    std::string solver = "direct";
};

struct GenerateParams {
    std::string kind;  // square | pyramid
    int n = 64;
    std::string out;  // basename; writes .tvwf, .pgm, .manifest
};

struct NoiseParams {
    std::string input;
    double variance = 0.001;
    unsigned long long seed = 1;
    std::string out;  // basename, as in generate
};

struct EvolveParams {
    std::string input;
    std::string out_dir;
    double h = 1.0;
    int steps = 1;
    SolverFlags solver;
    int frame_stride = 0;
    bool normalize = true;
    bool clamp_renormalize = false;
    bool strict = false;
};

struct DenoiseParams {
    std::string method;  // tv | tvw
    std::string input;
    std::string clean;  // optional reference for the metrics file
    std::string out_dir;
    double h = 1.0;
    double alpha = 0.1;  // tv only
    int steps = 10;      // tvw only
    SolverFlags solver;
};

struct MetricsParams {
    std::string a;
    std::string b;
    double h = 1.0;
    std::string manifest;  // optional; written only when nonempty
};

int cmd_generate(const GenerateParams& p);
int cmd_noise(const NoiseParams& p);
int cmd_evolve(const EvolveParams& p);
int cmd_denoise(const DenoiseParams& p);
int cmd_metrics(const MetricsParams& p);

// Replays a recorded run; out_override, when nonempty, replaces the recorded
// output basename / directory.
int cmd_rerun(const std::string& manifest_path, const std::string& out_override);

}  // namespace tvwf::cli
