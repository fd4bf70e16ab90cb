// kahlab: command-line front end for the Kahler-angle laboratory.
//
//   kahlab verify       --config run.ini [--beta 0,1,2] [--levels 32,64,128] [--out dir] [--tol x]
//   kahlab flow         --config run.ini
//   kahlab angle-report --config run.ini
//   kahlab info         --config run.ini
//
// Exit status: 0 pass, 1 check or flow failure, 2 usage or configuration error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kahlab/config.hpp"
#include "kahlab/errors.hpp"
#include "kahlab/flow.hpp"
#include "kahlab/io.hpp"
#include "kahlab/verify.hpp"

using namespace kahlab;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Overrides {
    std::string config;
    std::string beta;
    std::string levels;
    std::string out;
    std::optional<double> tol;
};

RunConfig resolve(const Overrides& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.beta.empty()) {
        c.task.betas = parse_double_list(o.beta, "--beta");
        for (double b : c.task.betas)
            if (b == -1.0) throw ConfigError("--beta: beta must differ from -1");
    }
    if (!o.levels.empty()) c.task.levels = parse_int_list(o.levels, "--levels");
    if (!o.out.empty()) c.output.directory = o.out;
    if (o.tol) c.task.tol = *o.tol;
    validate_config(c);
    return c;
}

std::string out_path(const RunConfig& c, const std::string& name) {
    return (std::filesystem::path(c.output.directory) / name).string();
}

int finest(const RunConfig& c) { return *std::max_element(c.task.levels.begin(), c.task.levels.end()); }

// The surface a single-level check runs on: the file, or the generator at the finest level.
ImmersedSurface single_surface(const RunConfig& c) {
    if (!c.surface.file.empty()) return build_surface(c.surface);
    return surface_family(c.surface)(finest(c));
}

std::string header(const RunConfig& c, const AmbientManifold& m) {
    std::ostringstream os;
    os << "[run]\n";
    os << "ambient = " << m.name << "\n";
    os << "surface = " << (c.surface.file.empty() ? c.surface.generator : c.surface.file) << "\n";
    os << "\n";
    return os.str();
}

void print_line(const Report& r, const std::string& label) {
    fmt::print("{:<40} {:<20} linf={:.3e}\n", label, r.status, r.linf);
}

CurvatureSign curvature_sign(const RunConfig& c, std::string& record) {
    CurvatureSign sign;
    if (!c.task.calibrate) {
        record = "sign -1 (convention)\n";
        return sign;
    }
    if (!c.surface.file.empty()) {
        record = "sign -1 (convention; calibration needs a generator surface)\n";
        return sign;
    }
    VerifyOptions o;
    o.tolerance = c.task.tol;
    o.min_order = c.task.min_order;
    const SignCalibration cal = calibrate_curvature_sign(surface_family(c.surface),
                                                         standard_conformal_ambients(),
                                                         c.task.levels, o);
    std::ostringstream os;
    for (const auto& e : cal.entries)
        os << "calibration_ambient = " << e.ambient << " plus=" << e.plus.status
           << " minus=" << e.minus.status << " chosen=" << e.chosen << "\n";
    if (cal.stable) {
        sign.sign = cal.sign;
        sign.source = "calibrated on " + std::to_string(cal.entries.size()) + " conformal ambients";
    } else {
        os << "calibration unstable; keeping the convention sign\n";
    }
    os << "sign " << sign.sign << " (" << sign.source << ")\n";
    record = os.str();
    return sign;
}

int cmd_verify(const RunConfig& c) {
    const AmbientManifold m = build_ambient(c.ambient);
    std::string record;
    const CurvatureSign sign = curvature_sign(c, record);
    write_text(out_path(c, "calibration.txt"), record);

    VerifyOptions vo;
    vo.tolerance = c.task.tol;
    vo.min_order = c.task.min_order;
    vo.curvature_sign = sign;

    bool all_pass = true;
    for (const std::string& check : c.task.checks) {
        std::string body = header(c, m);
        auto add = [&](const Report& r, const std::string& label) {
            body += serialize(r) + "\n";
            print_line(r, label);
            all_pass = all_pass && r.pass;
        };
        try {
            if (check == "gradient" || check == "laplacian") {
                const bool grad = check == "gradient";
                Report r;
                if (c.surface.file.empty()) {
                    const SurfaceFamily family = surface_family(c.surface);
                    r = grad ? verify_gradient_identities(family, m, c.task.levels, vo)
                             : verify_laplacian_identity(family, m, c.task.levels, vo);
                } else {
                    const ImmersedSurface s = build_surface(c.surface);
                    r = grad ? verify_gradient_identities(s, m, vo)
                             : verify_laplacian_identity(s, m, vo);
                }
                add(r, check);
            } else if (check == "variation") {
                const ImmersedSurface s = single_surface(c);
                const SurfaceGeometry g = compute_geometry(s, m);
                VariationOptions o;
                o.delta = c.task.delta;
                o.tolerance = c.task.tol;
                o.min_order = c.task.min_order;
                for (double b : c.task.betas)
                    for (const auto& field : standard_variation_fields()) {
                        Report r = verify_first_variation(s, m, Beta(b), normal_field(g, field.coefficients), o);
                        r.set("field", field.name);
                        r.curvature_sign = sign;
                        add(r, fmt::format("variation beta={} {}", b, field.name));
                    }
            } else if (check == "critical") {
                const ImmersedSurface s = single_surface(c);
                CriticalOptions o;
                o.min_sin = c.task.min_sin;
                o.curvature_sign = sign;
                for (double b : c.task.betas)
                    add(verify_critical_identity(s, m, Beta(b), o), fmt::format("critical beta={}", b));
            } else if (check == "conditions") {
                const ImmersedSurface s = single_surface(c);
                Report cyc = check_condition_cyclic(s, m, c.task.condition_tol);
                Report sym = check_condition_symmetric(s, m, c.task.condition_tol);
                cyc.curvature_sign = sym.curvature_sign = sign;
                add(cyc, "conditions cyclic");
                add(sym, "conditions symmetric");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fmt::print(stderr, "{}: {}\n", check, e.what());
            body += "[error]\nmessage = " + std::string(e.what()) + "\n";
            all_pass = false;
        }
        body += "[calibration]\n" + record;
        write_text(out_path(c, check + ".report"), body);
    }
    fmt::print("result: {}\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? kPass : kFail;
}

int cmd_flow(const RunConfig& c) {
    if (c.task.betas.size() != 1) throw ConfigError("[task] beta: flow takes a single beta");
    const AmbientManifold m = build_ambient(c.ambient);
    const ImmersedSurface s0 = build_surface(c.surface);
    const Beta beta(c.task.betas.front());

    FlowOptions o;
    o.residual_tol = c.task.residual;
    o.max_iterations = c.task.max_iterations;
    o.snapshot_every = c.task.snapshot_every;
    o.on_snapshot = [&](const FlowState& st) {
        save_surface(out_path(c, fmt::format("snapshots/snapshot_{:06d}.surf", st.iteration)), st.surface);
    };

    FlowResult r;
    try {
        r = run_flow(s0, m, beta, o);
    } catch (const NotSymplectic& e) {
        fmt::print(stderr, "flow: {}\n", e.what());
        return kFail;
    }

    std::ostringstream trace;
    write_trace(trace, r.state.trace);
    write_text(out_path(c, "trace.csv"), trace.str());
    save_surface(out_path(c, "final.surf"), r.state.surface);

    std::ostringstream rep;
    rep << header(c, m);
    rep << "[flow]\n";
    rep << fmt::format("beta = {}\n", beta.value());
    rep << "outcome = " << to_string(r.outcome) << "\n";
    rep << "iterations = " << r.state.iteration << "\n";
    rep << fmt::format("L_beta = {}\nres_l2 = {}\nres_linf = {}\nmin_cos_alpha = {}\n",
                       r.state.l_beta, r.state.res_l2, r.state.res_linf, r.state.min_cos_alpha);
    rep << fmt::format("stop_residual = {}\n", c.task.residual);
    if (!r.diagnostic.empty()) rep << "diagnostic = " << r.diagnostic << "\n";
    rep << "\n[calibration]\nsign -1 (convention)\n";
    write_text(out_path(c, "flow.report"), rep.str());

    fmt::print("flow: {} after {} iterations, residual linf {:.3e}, L_beta {:.10f}\n",
               to_string(r.outcome), r.state.iteration, r.state.res_linf, r.state.l_beta);
    if (!r.diagnostic.empty()) fmt::print("{}\n", r.diagnostic);
    return r.outcome == FlowOutcome::converged ? kPass : kFail;
}

int cmd_angle_report(const RunConfig& c) {
    const AmbientManifold m = build_ambient(c.ambient);
    const ImmersedSurface s = build_surface(c.surface);
    std::vector<double> cosine;
    try {
        cosine = kahler_cos_alpha(s, m);
    } catch (const NotImmersed& e) {
        fmt::print(stderr, "angle-report: {}\n", e.what());
        return kFail;
    }
    std::string csv = "theta,phi,cos_alpha\n";
    double lo = cosine.front(), hi = cosine.front(), sum = 0.0;
    for (int i = 0; i < s.n_theta; ++i)
        for (int j = 0; j < s.n_phi; ++j) {
            const double v = cosine[s.shape().index(i, j)];
            csv += fmt::format("{},{},{}\n", s.theta(i), s.phi(j), v);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
    const double mean = sum / cosine.size();
    write_text(out_path(c, "angle.csv"), csv);
    write_text(out_path(c, "angle_summary.txt"),
               header(c, m) + fmt::format("[summary]\nnodes = {}\nmin = {}\nmax = {}\nmean = {}\n",
                                          cosine.size(), lo, hi, mean));
    fmt::print("cos(alpha): min {:.12f} max {:.12f} mean {:.12f}\n", lo, hi, mean);
    return kPass;
}

int cmd_info(const RunConfig& c) {
    const AmbientManifold m = build_ambient(c.ambient);
    const ImmersedSurface s = build_surface(c.surface);
    fmt::print("ambient: {} (fd_step {})\n", m.name, m.fd_step);
    fmt::print("surface: {} ({} x {}, periods {:.6f} x {:.6f})\n",
               c.surface.file.empty() ? c.surface.generator : c.surface.file, s.n_theta, s.n_phi,
               s.period_theta, s.period_phi);
    try {
        const SurfaceGeometry g = compute_geometry(s, m);
        const auto [lo, hi] = std::minmax_element(g.cos_alpha.begin(), g.cos_alpha.end());
        fmt::print("area: {:.12f}\n", g.area());
        fmt::print("cos(alpha): min {:.12f} max {:.12f}\n", *lo, *hi);
        fmt::print("unadapted frame nodes: {}\n", g.frame.unadapted_count());
        fmt::print("symplectic: {}\n", *lo > FunctionalOptions{}.cos_floor ? "yes" : "no");
    } catch (const Error& e) {
        fmt::print("geometry: {}\n", e.what());
        return kFail;
    }
    fmt::print("curvature convention: K(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z\n");
    fmt::print("curvature term sign: -1 on -sin(alpha)(K_1213 - K_1224)\n");
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kahler-angle laboratory for symplectic critical surfaces"};
    app.require_subcommand(1);
    Overrides o;
    auto add_flags = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "run configuration (INI)");
        sub->add_option("--beta", o.beta, "comma-separated beta list");
        sub->add_option("--levels", o.levels, "comma-separated grid resolutions");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--tol", o.tol, "pass tolerance");
    };
    CLI::App* verify = app.add_subcommand("verify", "run identity checks and write reports");
    CLI::App* flow = app.add_subcommand("flow", "run the L_beta gradient flow");
    CLI::App* angle = app.add_subcommand("angle-report", "write the per-node Kahler angle");
    CLI::App* info = app.add_subcommand("info", "summarize ambient and surface");
    for (CLI::App* sub : {verify, flow, angle, info}) add_flags(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        const RunConfig c = resolve(o);
        if (verify->parsed()) return cmd_verify(c);
        if (flow->parsed()) return cmd_flow(c);
        if (angle->parsed()) return cmd_angle_report(c);
        return cmd_info(c);
    } catch (const ConfigError& e) {
        if (e.line > 0)
            fmt::print(stderr, "config error (line {}): {}\n", e.line, e.what());
        else
            fmt::print(stderr, "config error: {}\n", e.what());
        return kUsage;
    } catch (const InvalidArgument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kFail;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kFail;
    }
}
