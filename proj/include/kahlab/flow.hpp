#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "kahlab/functional.hpp"
#include "kahlab/surface.hpp"

namespace kahlab {

struct TraceRow {
    int iteration = 0;
    double l_beta = 0.0;
    double res_l2 = 0.0;
    double res_linf = 0.0;
    double min_cos_alpha = 0.0;
    double tau = 0.0;
};

struct FlowState {
    ImmersedSurface surface;
    int iteration = 0;
    double l_beta = 0.0;
    double res_l2 = 0.0;
    double res_linf = 0.0;
    double min_cos_alpha = 0.0;
    /// Step accepted by the last flow_step (0 before the first step).
    double tau = 0.0;
    std::vector<TraceRow> trace;
    /// Geometry of `surface` when already known; recomputed when null.
    std::shared_ptr<const SurfaceGeometry> geometry;
};

struct FlowOptions {
    /// Stop once the L-infinity E-L residual drops below this.
    double residual_tol = 1e-3;
    int max_iterations = 20000;
    /// Initial trial step is min(tau_factor, stability_cap * min cos^beta) * h^2, h the finer
    /// grid spacing. Explicit steps above ~0.19 h^2 amplify the grid-scale mode, which the
    /// discrete L_beta cannot see, so the line search alone cannot reject them.
    double tau_factor = 0.5;
    double stability_cap = 0.15;
    double shrink = 0.5;
    double tau_min = 1e-12;
    /// Sufficient-decrease constant: accept when L drops by at least
    /// armijo * tau * (beta + 1) * integral |E|^2 / cos^(2 beta + 6). Zero accepts any decrease.
    double armijo = 0.0;
    /// Velocities below this (L-infinity, chart norm) leave the surface unchanged.
    double stationary_tol = 1e-13;
    int snapshot_every = 0;
    std::function<void(const FlowState&)> on_snapshot;
    FunctionalOptions functional;
    FrameOptions frame;
};

/// L2 gradient direction cos^-(beta+3)(alpha) E of L_beta (up to the factor beta + 1).
std::vector<Vec4> flow_velocity(const SurfaceGeometry& g, Beta beta,
                                const FunctionalOptions& options = {});

/// Diagnostics of S at iteration 0; throws NotSymplectic for non-symplectic input.
FlowState initial_state(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
                        const FlowOptions& options = {});

/// One explicit step F + tau xi with backtracking on tau until L_beta decreases
/// sufficiently and min cos(alpha) stays above the floor. Throws FlowStalled when tau < tau_min.
FlowState flow_step(const FlowState& state, const AmbientManifold& m, Beta beta,
                    const FlowOptions& options = {});

enum class FlowOutcome { converged, max_iterations, stalled };

std::string to_string(FlowOutcome o);

struct FlowResult {
    FlowState state;  ///< last accepted state
    FlowOutcome outcome = FlowOutcome::converged;
    std::string diagnostic;
};

FlowResult run_flow(const ImmersedSurface& s0, const AmbientManifold& m, Beta beta,
                    const FlowOptions& options = {});

}  // namespace kahlab
