#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "tvwf/errors.hpp"
#include "tvwf/version.hpp"

namespace {

// Shared solver dials. The tv method ignores --dt and --u-floor-rel; keeping
// one flag set for every command beats two diverging ones.
void add_solver_flags(CLI::App* cmd, tvwf::cli::SolverFlags& s) {
    cmd->add_option("--dt", s.dt, "Implicit time step (flow)");
    cmd->add_option("--eps", s.eps, "Constraint penalty weight");
    cmd->add_option("--tau0", s.tau0, "Initial Newton damping");
    cmd->add_option("--tau-decay", s.tau_decay, "Geometric damping decay per iteration");
    cmd->add_option("--tau-min", s.tau_min, "Damping floor");
    cmd->add_option("--eps-tol", s.eps_tol, "Relative-update stopping tolerance");
    cmd->add_option("--max-inner", s.max_inner, "Inner iteration cap");
    cmd->add_option("--tol-lin", s.tol_lin, "Linear solver backward-error tolerance");
    cmd->add_option("--u-floor-rel", s.u_floor_rel,
                    "Relative undershoot tolerated before aborting a step (flow)");
    cmd->add_option("--solver", s.solver, "Linear solver")
        ->check(CLI::IsMember({"direct", "iterative"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourth-order TV-Wasserstein gradient flow toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", TVWF_VERSION);
    app.set_config("--config", "", "Read option defaults from an INI file");

    using namespace tvwf::cli;
    GenerateParams gp;
    NoiseParams np;
    EvolveParams ep;
    DenoiseParams dp;
    MetricsParams mp;
    std::string rerun_path, rerun_out;

    CLI::App* gen = app.add_subcommand("generate", "Write a phantom density (.tvwf + .pgm preview)");
    gen->add_option("kind", gp.kind, "square | pyramid")
        ->required()
        ->check(CLI::IsMember({"square", "pyramid"}));
    gen->add_option("--n", gp.n, "Grid side length")->check(CLI::Range(2, 1 << 14));
    gen->add_option("--out", gp.out, "Output basename")->required();

    CLI::App* noi = app.add_subcommand("noise", "Add seeded Gaussian noise to a field");
    noi->add_option("input", np.input, "Field to perturb (.tvwf or .pgm)")->required();
    noi->add_option("--variance", np.variance, "Noise variance");
    noi->add_option("--seed", np.seed, "RNG seed");
    noi->add_option("--out", np.out, "Output basename")->required();

    CLI::App* evo = app.add_subcommand("evolve", "Run the gradient flow from an initial density");
    evo->add_option("input", ep.input, "Initial density (.tvwf or .pgm)")->required();
    evo->add_option("--out", ep.out_dir, "Output directory")->required();
    evo->add_option("--spacing", ep.h, "Grid spacing")->check(CLI::PositiveNumber);
    evo->add_option("--steps", ep.steps, "Number of time steps")->check(CLI::PositiveNumber);
    add_solver_flags(evo, ep.solver);
    evo->add_option("--frame-stride", ep.frame_stride, "Write every k-th field (0 = none)")
        ->check(CLI::NonNegativeNumber);
    evo->add_flag("--normalize,!--no-normalize", ep.normalize,
                  "Scale the input to unit mass first (default on)");
    evo->add_flag("--clamp-renormalize", ep.clamp_renormalize,
                  "Clamp negatives and rescale the mass after each step");
    evo->add_flag("--strict", ep.strict, "Abort when an inner solve hits the iteration cap");

    CLI::App* den = app.add_subcommand("denoise", "Denoise a field (tv baseline or tvw flow)");
    den->add_option("method", dp.method, "tv | tvw")
        ->required()
        ->check(CLI::IsMember({"tv", "tvw"}));
    den->add_option("input", dp.input, "Noisy field (.tvwf or .pgm)")->required();
    den->add_option("--clean", dp.clean, "Reference field for the metrics file");
    den->add_option("--out", dp.out_dir, "Output directory")->required();
    den->add_option("--spacing", dp.h, "Grid spacing")->check(CLI::PositiveNumber);
    den->add_option("--alpha", dp.alpha, "TV regularization weight (tv)")
        ->check(CLI::PositiveNumber);
    den->add_option("--steps", dp.steps, "Flow steps (tvw)")->check(CLI::PositiveNumber);
    add_solver_flags(den, dp.solver);

    CLI::App* met =
        app.add_subcommand("metrics", "Print psnr,l2,mass_a,mass_b,tv_a,tv_b for two fields");
    met->add_option("a", mp.a, "Field to evaluate")->required();
    met->add_option("b", mp.b, "Reference field")->required();
    met->add_option("--spacing", mp.h, "Grid spacing")->check(CLI::PositiveNumber);
    met->add_option("--manifest", mp.manifest, "Also record a manifest at this path");

    CLI::App* rer = app.add_subcommand("rerun", "Replay a recorded run from its manifest");
    rer->add_option("manifest", rerun_path, "Manifest written by a previous run")->required();
    rer->add_option("--out", rerun_out, "Override the recorded output location");

    // lets --config (and any future global flag) appear after the subcommand
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the usage error
        return rc == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_generate(gp);
        if (noi->parsed()) return cmd_noise(np);
        if (evo->parsed()) return cmd_evolve(ep);
        if (den->parsed()) return cmd_denoise(dp);
        if (met->parsed()) return cmd_metrics(mp);
        if (rer->parsed()) return cmd_rerun(rerun_path, rerun_out);
    } catch (const tvwf::NonConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const tvwf::SolveError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const tvwf::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const tvwf::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
