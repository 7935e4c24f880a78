#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

#include "tvwf/errors.hpp"
#include "tvwf/flow.hpp"
#include "tvwf/imaging.hpp"
#include "tvwf/tv_denoise.hpp"
#include "tvwf/version.hpp"

namespace tvwf::cli {
namespace {

namespace fs = std::filesystem;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void make_dirs(const fs::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    return f;
}

// BASE.tvwf for exact values, BASE.pgm as a rescaled preview.
void write_pair(const ScalarField& u, const fs::path& base) {
    write_field(u, base.string() + ".tvwf");
    write_pgm(to_image(u, /*rescale=*/true), base.string() + ".pgm");
}

LinearMethod parse_linear_method(const std::string& s) {
    if (s == "direct") return LinearMethod::direct;
    if (s == "iterative") return LinearMethod::iterative;
    throw Error("unknown linear solver '" + s + "' (expected direct or iterative)");
}

SolverConfig to_config(const SolverFlags& f, double h) {
    SolverConfig c;
    c.dt = f.dt;
    c.eps = f.eps;
    c.tau0 = f.tau0;
    c.tau_decay = f.tau_decay;
    c.tau_min = f.tau_min;
    c.eps_tol = f.eps_tol;
    c.max_inner = f.max_inner;
    c.tol_lin = f.tol_lin;
    c.u_floor_rel = f.u_floor_rel;
    c.h = h;
    c.method = parse_linear_method(f.solver);
    return c;
}

void put_solver_flags(RunManifest& m, const SolverFlags& f) {
    m.set_double("dt", f.dt);
    m.set_double("eps", f.eps);
    m.set_double("tau0", f.tau0);
    m.set_double("tau_decay", f.tau_decay);
    m.set_double("tau_min", f.tau_min);
    m.set_double("eps_tol", f.eps_tol);
    m.set_int("max_inner", f.max_inner);
    m.set_double("tol_lin", f.tol_lin);
    m.set_double("u_floor_rel", f.u_floor_rel);
    m.set("solver", f.solver);
}

SolverFlags solver_flags_from(const RunManifest& m) {
    SolverFlags f;
    f.dt = m.get_double("dt");
    f.eps = m.get_double("eps");
    f.tau0 = m.get_double("tau0");
    f.tau_decay = m.get_double("tau_decay");
    f.tau_min = m.get_double("tau_min");
    f.eps_tol = m.get_double("eps_tol");
    f.max_inner = static_cast<int>(m.get_int("max_inner"));
    f.tol_lin = m.get_double("tol_lin");
    f.u_floor_rel = m.get_double("u_floor_rel");
    f.solver = m.get("solver");
    return f;
}

constexpr const char* kDiagnosticsHeader =
    "step,mass,min_u,max_u,inner_iterations,converged,rel_update,"
    "max_constraint_violation,l2_change\n";

void write_diag_row(std::ofstream& out, const StepDiagnostics& d) {
    out << d.step << ',' << fmt(d.mass) << ',' << fmt(d.min_u) << ',' << fmt(d.max_u) << ','
        << d.inner_iterations << ',' << (d.converged ? 1 : 0) << ',' << fmt(d.rel_update_final)
        << ',' << fmt(d.max_constraint_violation) << ',' << fmt(d.l2_change) << '\n';
}

// psnr,discrete_tv,staircase_metric; psnr needs a reference, staircase falls
// back to the unmasked variant without one.
void write_metrics_csv(const fs::path& path, const ScalarField& u, const ScalarField* clean) {
    std::ofstream out = open_out(path);
    out << "psnr,discrete_tv,staircase_metric\n";
    const double p = clean ? psnr(u, *clean) : std::nan("");
    const double s = clean ? staircase_metric(u, *clean) : staircase_metric(u);
    out << fmt(p) << ',' << fmt(discrete_tv(u)) << ',' << fmt(s) << '\n';
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void warn_version(const RunManifest& m, const std::string& path) {
    if (m.has("version") && m.get("version") != TVWF_VERSION)
        std::fprintf(stderr, "warning: %s was recorded by version %s, this is %s\n", path.c_str(),
                     m.get("version").c_str(), TVWF_VERSION);
}

}  // namespace

int cmd_generate(const GenerateParams& p) {
    Timer timer;
    ScalarField u;
    if (p.kind == "square")
        u = gen_square(p.n);
    else if (p.kind == "pyramid")
        u = gen_pyramid(p.n);
    else
        throw Error("unknown phantom '" + p.kind + "' (expected square or pyramid)");

    make_dirs(fs::path(p.out).parent_path());
    write_pair(u, p.out);

    RunManifest m;
    m.command = "generate";
    m.set("kind", p.kind);
    m.set_int("n", p.n);
    m.set("out", p.out);
    m.set_double("h", u.grid.h);
    m.duration_seconds = timer.seconds();
    m.write(p.out + ".manifest");
    return 0;
}

int cmd_noise(const NoiseParams& p) {
    Timer timer;
    ScalarField u = read_field(p.input);
    ScalarField noisy = add_gaussian_noise(u, p.variance, p.seed);

    make_dirs(fs::path(p.out).parent_path());
    write_pair(noisy, p.out);

    RunManifest m;
    m.command = "noise";
    m.set("input", p.input);
    m.set_double("variance", p.variance);
    m.set_uint("seed", p.seed);
    m.set("out", p.out);
    m.duration_seconds = timer.seconds();
    m.write(p.out + ".manifest");
    return 0;
}

int cmd_evolve(const EvolveParams& p) {
    Timer timer;
    ScalarField u0 = read_field(p.input, p.h);
    if (p.normalize) u0 = normalize_mass(u0, p.h);

    const fs::path dir(p.out_dir);
    make_dirs(dir);

    FlowRun run;
    run.config = to_config(p.solver, p.h);
    run.n_steps = p.steps;
    run.initial = std::move(u0);
    run.clamp_renormalize = p.clamp_renormalize;
    run.frame_stride = p.frame_stride;
    run.strict = p.strict;

    std::ofstream diag = open_out(dir / "diagnostics.csv");
    diag << kDiagnosticsHeader;

    int nonconverged = 0;
    FlowObserver obs;
    obs.on_step = [&](const StepDiagnostics& d) {
        if (!d.converged) ++nonconverged;
        write_diag_row(diag, d);
    };
    obs.on_frame = [&](int step, const ScalarField& u) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06d", step);
        write_pair(u, dir / name);
    };

    FlowResult res = evolve(run, obs);
    diag.flush();
    if (!diag) throw IoError("write failed for '" + (dir / "diagnostics.csv").string() + "'");
    write_pair(res.final, dir / "final");

    RunManifest m;
    m.command = "evolve";
    m.set("input", p.input);
    m.set("out", p.out_dir);
    m.set_double("h", p.h);
    m.set_int("steps", p.steps);
    put_solver_flags(m, p.solver);
    m.set_int("frame_stride", p.frame_stride);
    m.set_bool("normalize", p.normalize);
    m.set_bool("clamp_renormalize", p.clamp_renormalize);
    m.set_bool("strict", p.strict);
    m.duration_seconds = timer.seconds();
    m.write((dir / "run.manifest").string());

    if (nonconverged > 0)
        std::fprintf(stderr, "warning: %d of %d steps hit the inner iteration cap (see %s)\n",
                     nonconverged, p.steps, (dir / "diagnostics.csv").c_str());
    return 0;
}

int cmd_denoise(const DenoiseParams& p) {
    Timer timer;
    ScalarField f = read_field(p.input, p.h);

    const fs::path dir(p.out_dir);
    make_dirs(dir);

    ScalarField result;
    bool converged = true;
    int iterations = 0;

    if (p.method == "tv") {
        TvDenoiseConfig cfg;
        cfg.alpha = p.alpha;
        cfg.eps = p.solver.eps;
        cfg.tau0 = p.solver.tau0;
        cfg.tau_decay = p.solver.tau_decay;
        cfg.tau_min = p.solver.tau_min;
        cfg.eps_tol = p.solver.eps_tol;
        cfg.max_inner = p.solver.max_inner;
        cfg.tol_lin = p.solver.tol_lin;
        cfg.method = parse_linear_method(p.solver.solver);
        TvDenoiseResult r = denoise_tv(f, cfg);
        result = std::move(r.u);
        converged = r.report.converged;
        iterations = r.report.iterations_used;
    } else if (p.method == "tvw") {
        // The flow needs a nonnegative unit-mass density: clamp the noise
        // undershoots, remember the mass, evolve, scale back up.
        ScalarField g = f;
        for (double& v : g.values) v = std::max(v, 0.0);
        const double m0 = mass(g, p.h);

        FlowRun run;
        run.config = to_config(p.solver, p.h);
        run.n_steps = p.steps;
        run.initial = normalize_mass(g, p.h);
        run.strict = true;  // a half-converged smoothing step is a wrong answer

        std::ofstream diag = open_out(dir / "diagnostics.csv");
        diag << kDiagnosticsHeader;
        FlowObserver obs;
        obs.on_step = [&](const StepDiagnostics& d) {
            iterations += d.inner_iterations;
            write_diag_row(diag, d);
        };
        FlowResult res = evolve(run, obs);
        diag.flush();
        if (!diag) throw IoError("write failed for '" + (dir / "diagnostics.csv").string() + "'");

        result = std::move(res.final);
        for (double& v : result.values) v *= m0;
    } else {
        throw Error("unknown denoise method '" + p.method + "' (expected tv or tvw)");
    }

    write_pair(result, dir / "result");

    ScalarField clean;
    const bool have_clean = !p.clean.empty();
    if (have_clean) clean = read_field(p.clean, p.h);
    write_metrics_csv(dir / "metrics.csv", result, have_clean ? &clean : nullptr);

    RunManifest m;
    m.command = "denoise";
    m.set("method", p.method);
    m.set("input", p.input);
    if (have_clean) m.set("clean", p.clean);
    m.set("out", p.out_dir);
    m.set_double("h", p.h);
    if (p.method == "tv") m.set_double("alpha", p.alpha);
    if (p.method == "tvw") m.set_int("steps", p.steps);
    put_solver_flags(m, p.solver);
    m.duration_seconds = timer.seconds();
    m.write((dir / "run.manifest").string());

    if (!converged) {
        std::fprintf(stderr, "warning: solver stopped at the iteration cap (%d iterations)\n",
                     iterations);
        return 2;
    }
    return 0;
}

int cmd_metrics(const MetricsParams& p) {
    Timer timer;
    ScalarField a = read_field(p.a, p.h);
    ScalarField b = read_field(p.b, p.h);
    if (a.grid.nx != b.grid.nx || a.grid.ny != b.grid.ny)
        throw Error("metrics: grid mismatch, " + std::to_string(a.grid.nx) + "x" +
                    std::to_string(a.grid.ny) + " vs " + std::to_string(b.grid.nx) + "x" +
                    std::to_string(b.grid.ny));

    ScalarField diff = a;
    for (int k = 0; k < diff.size(); ++k) diff.values[k] -= b.values[k];

    std::printf("%s,%s,%s,%s,%s,%s\n", fmt(psnr(a, b)).c_str(), fmt(norm2(diff)).c_str(),
                fmt(mass(a, p.h)).c_str(), fmt(mass(b, p.h)).c_str(), fmt(discrete_tv(a)).c_str(),
                fmt(discrete_tv(b)).c_str());

    if (!p.manifest.empty()) {
        make_dirs(fs::path(p.manifest).parent_path());
        RunManifest m;
        m.command = "metrics";
        m.set("a", p.a);
        m.set("b", p.b);
        m.set_double("h", p.h);
        m.duration_seconds = timer.seconds();
        m.write(p.manifest);
    }
    return 0;
}

int cmd_rerun(const std::string& manifest_path, const std::string& out_override) {
    RunManifest m = RunManifest::read(manifest_path);
    warn_version(m, manifest_path);

    if (m.command == "generate") {
        GenerateParams p;
        p.kind = m.get("kind");
        p.n = static_cast<int>(m.get_int("n"));
        p.out = out_override.empty() ? m.get("out") : out_override;
        return cmd_generate(p);
    }
    if (m.command == "noise") {
        NoiseParams p;
        p.input = m.get("input");
        p.variance = m.get_double("variance");
        p.seed = m.get_uint("seed");
        p.out = out_override.empty() ? m.get("out") : out_override;
        return cmd_noise(p);
    }
    if (m.command == "evolve") {
        EvolveParams p;
        p.input = m.get("input");
        p.out_dir = out_override.empty() ? m.get("out") : out_override;
        p.h = m.get_double("h");
        p.steps = static_cast<int>(m.get_int("steps"));
        p.solver = solver_flags_from(m);
        p.frame_stride = static_cast<int>(m.get_int("frame_stride"));
        p.normalize = m.get_bool("normalize");
        p.clamp_renormalize = m.get_bool("clamp_renormalize");
        p.strict = m.get_bool("strict");
        return cmd_evolve(p);
    }
    if (m.command == "denoise") {
        DenoiseParams p;
        p.method = m.get("method");
        p.input = m.get("input");
        if (m.has("clean")) p.clean = m.get("clean");
        p.out_dir = out_override.empty() ? m.get("out") : out_override;
        p.h = m.get_double("h");
        if (m.has("alpha")) p.alpha = m.get_double("alpha");
        if (m.has("steps")) p.steps = static_cast<int>(m.get_int("steps"));
        p.solver = solver_flags_from(m);
        return cmd_denoise(p);
    }
    if (m.command == "metrics") {
        MetricsParams p;
        p.a = m.get("a");
        p.b = m.get("b");
        p.h = m.get_double("h");
        if (!out_override.empty()) p.manifest = out_override;
        return cmd_metrics(p);
    }
    throw Error("rerun: manifest command '" + m.command + "' is not replayable");
}

}  // namespace tvwf::cli
