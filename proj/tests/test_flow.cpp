#include <doctest.h>

#include <cmath>
#include <limits>

#include "kahlab/errors.hpp"
#include "kahlab/flow.hpp"
#include "kahlab/generators.hpp"
#include "oracles.hpp"

using namespace kahlab;

namespace {

ImmersedSurface bumpy(int n = 24) { return perturbed_holomorphic_graph(n, n, 0.0, {0.05, 1, 1}); }

}  // namespace

TEST_CASE("holomorphic and affine surfaces are stationary") {
    for (const ImmersedSurface& s : {holomorphic_graph(16, 16, {0.4, -0.2}), conj_graph(16, 16, 0.5)}) {
        const FlowState st = initial_state(s, euclidean_c2(), Beta(1.0));
        double speed = 0.0;
        for (const Vec4& v : flow_velocity(*st.geometry, Beta(1.0))) speed = std::max(speed, v.norm());
        CHECK(speed < 1e-12);
        const FlowState next = flow_step(st, euclidean_c2(), Beta(1.0));
        CHECK(next.tau == 0.0);
        CHECK(next.iteration == 1);
        CHECK(next.surface.periodic_part == s.periodic_part);
        CHECK(next.trace.size() == 2);
    }
}

TEST_CASE("beta = 0 steps follow the mean curvature oracle") {
    ImmersedSurface s = bumpy(24);
    FlowState st = initial_state(s, euclidean_c2(), Beta(0.0));
    for (int k = 0; k < 10; ++k) {
        st = flow_step(st, euclidean_c2(), Beta(0.0));
        const std::vector<Vec4> h = oracle::flat_mean_curvature(s);
        for (std::size_t n = 0; n < h.size(); ++n) s.periodic_part[n] += st.tau * h[n];
    }
    double worst = 0.0;
    for (std::size_t n = 0; n < s.node_count(); ++n)
        worst = std::max(worst, (s.periodic_part[n] - st.surface.periodic_part[n]).norm());
    CHECK(st.iteration == 10);
    CHECK(worst < 1e-8);
}

TEST_CASE("L_beta decreases strictly and the trace records every step") {
    FlowState st = initial_state(bumpy(), euclidean_c2(), Beta(1.0));
    for (int k = 0; k < 40; ++k) st = flow_step(st, euclidean_c2(), Beta(1.0));
    REQUIRE(st.trace.size() == 41);
    for (std::size_t k = 1; k < st.trace.size(); ++k) {
        CHECK(st.trace[k].l_beta < st.trace[k - 1].l_beta);
        CHECK(st.trace[k].tau > 0.0);
        CHECK(st.trace[k].iteration == static_cast<int>(k));
    }
    CHECK(st.res_linf < st.trace.front().res_linf);
}

TEST_CASE("flow step without cached geometry matches the cached path") {
    const FlowState st = initial_state(bumpy(), euclidean_c2(), Beta(2.0));
    FlowState bare = st;
    bare.geometry.reset();
    const FlowState a = flow_step(st, euclidean_c2(), Beta(2.0));
    const FlowState b = flow_step(bare, euclidean_c2(), Beta(2.0));
    CHECK(a.tau == b.tau);
    CHECK(a.surface.periodic_part == b.surface.periodic_part);
}

TEST_CASE("stall, caps and early exit") {
    FlowOptions o;
    o.tau_min = 1.0;  // above any trial step
    const FlowState st = initial_state(bumpy(), euclidean_c2(), Beta(1.0), o);
    CHECK_THROWS_AS(flow_step(st, euclidean_c2(), Beta(1.0), o), FlowStalled);
    const FlowResult stalled = run_flow(bumpy(), euclidean_c2(), Beta(1.0), o);
    CHECK(stalled.outcome == FlowOutcome::stalled);
    CHECK(stalled.diagnostic.find("stalled") != std::string::npos);
    CHECK(stalled.state.iteration == 0);

    FlowOptions capped;
    capped.max_iterations = 3;
    const FlowResult r = run_flow(bumpy(), euclidean_c2(), Beta(1.0), capped);
    CHECK(r.outcome == FlowOutcome::max_iterations);
    CHECK(r.state.iteration == 3);

    FlowOptions loose;
    loose.residual_tol = std::numeric_limits<double>::infinity();
    const FlowResult done = run_flow(bumpy(), euclidean_c2(), Beta(1.0), loose);
    CHECK(done.outcome == FlowOutcome::converged);
    CHECK(done.state.iteration == 0);
    CHECK(to_string(FlowOutcome::stalled) == "stalled");
}

TEST_CASE("snapshots fire on schedule") {
    FlowOptions o;
    o.max_iterations = 6;
    o.snapshot_every = 2;
    std::vector<int> seen;
    o.on_snapshot = [&](const FlowState& s) { seen.push_back(s.iteration); };
    run_flow(bumpy(), euclidean_c2(), Beta(1.0), o);
    CHECK(seen == std::vector<int>{0, 2, 4, 6});
}

TEST_CASE("flow input validation") {
    CHECK_THROWS_AS(initial_state(lagrangian_torus(16, 16), euclidean_c2(), Beta(1.0)), NotSymplectic);
    CHECK_THROWS_AS(run_flow(lagrangian_torus(16, 16), euclidean_c2(), Beta(1.0)), NotSymplectic);
    CHECK_THROWS_AS(initial_state(bumpy(), euclidean_c2(), Beta(-0.5)), InvalidArgument);
}
