#include "kahlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kahlab/errors.hpp"

namespace kahlab {

namespace {

void require_flow_beta(Beta beta) {
    if (beta.value() < 0.0) throw InvalidArgument("flow requires beta >= 0");
}

GeometryOptions geometry_options(const FlowOptions& options) {
    GeometryOptions go;
    go.frame = options.frame;
    return go;
}

// Fills L_beta and residual diagnostics from a geometry of the state's surface.
void measure(FlowState& st, const SurfaceGeometry& g, Beta beta, const FlowOptions& options) {
    st.l_beta = l_beta(g, beta, options.functional);
    const ELField e = el_operator(g, beta, options.functional);
    st.res_l2 = e.l2;
    st.res_linf = e.linf;
    st.min_cos_alpha = *std::min_element(g.cos_alpha.begin(), g.cos_alpha.end());
}

TraceRow row_of(const FlowState& st) {
    return {st.iteration, st.l_beta, st.res_l2, st.res_linf, st.min_cos_alpha, st.tau};
}

}  // namespace

std::vector<Vec4> flow_velocity(const SurfaceGeometry& g, Beta beta,
                                const FunctionalOptions& options) {
    const ELField e = el_operator(g, beta, options);
    std::vector<Vec4> v(g.size());
    for (std::size_t n = 0; n < g.size(); ++n)
        v[n] = e.vector[n] / std::pow(g.cos_alpha[n], beta.value() + 3.0);
    return v;
}

FlowState initial_state(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
                        const FlowOptions& options) {
    require_flow_beta(beta);
    validate_surface(s);
    FlowState st;
    st.surface = s;
    auto g = std::make_shared<const SurfaceGeometry>(
        compute_geometry(s, m, geometry_options(options)));
    require_symplectic(*g, options.functional.cos_floor);
    measure(st, *g, beta, options);
    st.geometry = std::move(g);
    st.trace.push_back(row_of(st));
    return st;
}

FlowState flow_step(const FlowState& state, const AmbientManifold& m, Beta beta,
                    const FlowOptions& options) {
    require_flow_beta(beta);
    const std::shared_ptr<const SurfaceGeometry> cached =
        state.geometry ? state.geometry
                       : std::make_shared<const SurfaceGeometry>(
                             compute_geometry(state.surface, m, geometry_options(options)));
    const SurfaceGeometry& g = *cached;
    require_symplectic(g, options.functional.cos_floor);
    const std::vector<Vec4> v = flow_velocity(g, beta, options.functional);

    // Slope of L_beta along v is -(beta + 1) * integral <v, E> / cos^(beta+3).
    double slope = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n)
        slope += g.inner(n, v[n], v[n]) * g.area_element[n];
    slope *= (beta.value() + 1.0) * g.cell_area();

    double speed = 0.0;
    for (const Vec4& x : v) speed = std::max(speed, x.cwiseAbs().maxCoeff());
    if (speed <= options.stationary_tol) {
        FlowState next = state;
        next.iteration += 1;
        next.tau = 0.0;
        next.trace.push_back(row_of(next));
        return next;
    }

    const double h = std::min(g.shape.h_theta, g.shape.h_phi);
    double factor = options.tau_factor;
    if (options.stability_cap > 0.0) {
        const double min_cos = *std::min_element(g.cos_alpha.begin(), g.cos_alpha.end());
        factor = std::min(factor, options.stability_cap * std::pow(min_cos, beta.value()));
    }
    double tau = factor * h * h;
    std::string last_reason;
    while (tau >= options.tau_min) {
        ImmersedSurface candidate = state.surface;
        for (std::size_t n = 0; n < v.size(); ++n) candidate.periodic_part[n] += tau * v[n];
        try {
            auto cg_ptr = std::make_shared<const SurfaceGeometry>(
                compute_geometry(candidate, m, geometry_options(options)));
            const SurfaceGeometry& cg = *cg_ptr;
            const double min_cos = *std::min_element(cg.cos_alpha.begin(), cg.cos_alpha.end());
            if (min_cos > options.functional.cos_floor) {
                const double l = l_beta(cg, beta, options.functional);
                if (l < state.l_beta && l <= state.l_beta - options.armijo * tau * slope) {
                    FlowState next;
                    next.surface = std::move(candidate);
                    next.iteration = state.iteration + 1;
                    next.tau = tau;
                    measure(next, cg, beta, options);
                    next.geometry = std::move(cg_ptr);
                    next.trace = state.trace;
                    next.trace.push_back(row_of(next));
                    return next;
                }
                last_reason = "L_beta did not decrease sufficiently";
            } else {
                last_reason = "min cos(alpha) fell to the floor";
            }
        } catch (const NotImmersed&) {
            last_reason = "candidate is not immersed";
        }
        tau *= options.shrink;
    }
    std::ostringstream os;
    os << "flow stalled at iteration " << state.iteration << ": step size below "
       << options.tau_min << " (" << last_reason << "); L_beta = " << state.l_beta
       << ", residual linf = " << state.res_linf << ", min cos(alpha) = " << state.min_cos_alpha;
    throw FlowStalled(os.str());
}

std::string to_string(FlowOutcome o) {
    switch (o) {
        case FlowOutcome::converged: return "converged";
        case FlowOutcome::max_iterations: return "max_iterations";
        case FlowOutcome::stalled: return "stalled";
    }
    return "unknown";
}

FlowResult run_flow(const ImmersedSurface& s0, const AmbientManifold& m, Beta beta,
                    const FlowOptions& options) {
    FlowResult result;
    result.state = initial_state(s0, m, beta, options);
    if (options.on_snapshot && options.snapshot_every > 0) options.on_snapshot(result.state);
    while (!(result.state.res_linf < options.residual_tol)) {
        if (result.state.iteration >= options.max_iterations) {
            result.outcome = FlowOutcome::max_iterations;
            result.diagnostic = "iteration cap reached with residual linf = " +
                                std::to_string(result.state.res_linf);
            return result;
        }
        try {
            FlowState next = flow_step(result.state, m, beta, options);
            if (next.tau == 0.0) {
                result.state = std::move(next);
                result.outcome = FlowOutcome::stalled;
                result.diagnostic = "velocity vanishes but residual is above the stop tolerance";
                return result;
            }
            result.state = std::move(next);
        } catch (const FlowStalled& e) {
            result.outcome = FlowOutcome::stalled;
            result.diagnostic = e.what();
            return result;
        }
        if (options.on_snapshot && options.snapshot_every > 0 &&
            result.state.iteration % options.snapshot_every == 0)
            options.on_snapshot(result.state);
    }
    result.outcome = FlowOutcome::converged;
    return result;
}

}  // namespace kahlab
