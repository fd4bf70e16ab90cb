// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference values come from closed forms or from computations written here,
// not from the library routines under test.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "kahlab/ambient.hpp"
#include "kahlab/flow.hpp"
#include "kahlab/functional.hpp"
#include "kahlab/generators.hpp"
#include "kahlab/verify.hpp"

using namespace kahlab;

namespace {

// Pinned tolerances.
constexpr double kCosTol = 1e-10;
constexpr double kLBetaTol = 1e-8;
constexpr double kVariationRelTol = 1e-3;
// Cases whose exact variation vanishes would leave the delta-order undefined.
constexpr double kNontrivialVariation = 1e-6;
constexpr double kMinOrder = 1.9;
constexpr double kIdentityTol = 1e-3;
constexpr double kJTermTol = 1e-12;
constexpr double kELConsistencyTol = 1e-8;
constexpr double kHolomorphicTol = 1e-10;
constexpr double kFrameTol = 1e-8;
constexpr double kConditionTol = 1e-12;
constexpr double kDOmegaTol = 1e-6;
constexpr double kFlowResidual = 1e-3;
constexpr double kCriticalMinSin = 1e-4;
constexpr double kCurvatureTol = 1e-6;
constexpr double kChristoffelTol = 1e-8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    fmt::print("criterion {}: {} - {} ({})\n", id, pass ? "PASS" : "FAIL", title, detail);
    std::fflush(stdout);
    if (!pass) ++failures;
}

struct Sample {
    std::string name;
    double c;
    Perturbation p;
};

// Perturbed-graph suite shared by several criteria.
std::vector<Sample> graph_suite() {
    return {{"c=0.5 eps=0.1 m=(1,1)", 0.5, {0.1, 1, 1}},
            {"c=0.25 eps=0.15 m=(2,1)", 0.25, {0.15, 2, 1}},
            {"c=0.5 eps=0.1 m=(1,2)", 0.5, {0.1, 1, 2}}};
}

Vec4 std_j(const Vec4& v) { return standard_complex_structure() * v; }

// Fourth-order central difference of a scalar expression.
Vec4 fd_gradient(const Expression& e, const Vec4& p, double h = 1e-3) {
    Vec4 g;
    for (int a = 0; a < 4; ++a) {
        Vec4 d = Vec4::Zero();
        d[a] = h;
        g[a] = (-e(p + 2 * d) + 8 * e(p + d) - 8 * e(p - d) + e(p - 2 * d)) / (12 * h);
    }
    return g;
}

std::vector<std::string> conformal_factors() {
    return {"0.1*sin(p1) + 0.1*cos(p2)", "0.1*sin(p1 + p2) + 0.05*cos(p3 - 0.5*p1)",
            "0.08*cos(p1)*sin(p2) + 0.05*sin(p4 + 0.5*p2)"};
}

// 1. cos(alpha) and L_beta of {(z, c conj z)} against closed forms.
void criterion_1() {
    const auto t0 = Clock::now();
    double cos_err = 0.0, l_err = 0.0;
    for (double c : {0.0, 0.25, 0.5, 0.75}) {
        const SurfaceGeometry g = compute_geometry(conj_graph(64, 64, c), euclidean_c2());
        const double exact = (1 - c * c) / (1 + c * c);
        for (double v : g.cos_alpha) cos_err = std::max(cos_err, std::abs(v - exact));
        for (double b : {0.0, 1.0, 2.0}) {
            const double l = 4 * kPi * kPi * std::pow(1 + c * c, b + 1) / std::pow(1 - c * c, b);
            l_err = std::max(l_err, std::abs(l_beta(g, Beta(b)) - l));
        }
    }
    const double t = seconds_since(t0);
    report(1, "Kahler angle closed forms", cos_err < kCosTol && l_err < kLBetaTol && t < 1.0,
           fmt::format("max cos err {:.2e} < {:.0e}, max L_beta err {:.2e} < {:.0e}, {:.2f} s < 1 s",
                       cos_err, kCosTol, l_err, kLBetaTol, t));
}

// 2. Analytic first variation against finite differences of L_beta.
void criterion_2() {
    bool pass = true;
    double worst_rel = 0.0, worst_order = 1e300, worst_time = 0.0, min_analytic = 1e300;
    int cases = 0;
    for (const Sample& s : graph_suite()) {
        const ImmersedSurface surf = perturbed_graph(64, 64, s.c, s.p);
        const SurfaceGeometry g = compute_geometry(surf, euclidean_c2());
        for (double b : {0.0, 1.0, 2.0})
            for (const VariationField& f : standard_variation_fields()) {
                const auto t0 = Clock::now();
                VariationOptions o;
                o.delta = 1e-4;
                o.tolerance = kVariationRelTol;
                o.min_order = kMinOrder;
                const Report r =
                    verify_first_variation(surf, euclidean_c2(), Beta(b), normal_field(g, f.coefficients), o);
                const double t = seconds_since(t0);
                const double rel = r.number("rel_error_two_point");
                const double order = r.number("delta_order_two_point");
                const double analytic = std::abs(r.number("analytic"));
                min_analytic = std::min(min_analytic, analytic);
                worst_rel = std::max(worst_rel, rel);
                worst_order = std::min(worst_order, order);
                worst_time = std::max(worst_time, t);
                ++cases;
                if (!(rel < kVariationRelTol && order >= kMinOrder && t < 10.0 &&
                      analytic > kNontrivialVariation)) {
                    pass = false;
                    fmt::print("  variation case failed: {} beta={} {}: analytic {:.2e} rel {:.2e} order "
                               "{:.2f} {:.2f} s\n",
                               s.name, b, f.name, analytic, rel, order, t);
                }
            }
    }
    report(2, "first variation", pass,
           fmt::format("{} cases, worst rel err {:.2e} < {:.0e}, min delta-order {:.3f} >= {}, "
                       "min |variation| {:.2e} > {:.0e}, slowest case {:.2f} s < 10 s",
                       cases, worst_rel, kVariationRelTol, worst_order, kMinOrder, min_analytic,
                       kNontrivialVariation, worst_time));
}

std::string orders(const Report& r) {
    std::string out;
    for (std::size_t k = 1; k < r.refinement.size(); ++k)
        out += (k > 1 ? "," : "") + fmt::format("{:.2f}", r.refinement[k].order_linf);
    return out;
}

SurfaceFamily suite_family() {
    return [](int n) { return perturbed_graph(n, n, 0.5, {0.1, 1, 1}); };
}

// 3. Laplacian identity: refinement order in flat and conformal ambients.
void criterion_3() {
    const auto t0 = Clock::now();
    VerifyOptions o;
    o.tolerance = kIdentityTol;
    o.min_order = kMinOrder;
    const std::vector<int> levels = {32, 64, 128};
    const Report flat = verify_laplacian_identity(suite_family(), euclidean_c2(), levels, o);
    const AmbientManifold m = conformal(conformal_factors()[1]);
    const Report conf = verify_laplacian_identity(suite_family(), m, levels, o);
    const double jterms = std::max(flat.number("linf_j_second"), flat.number("linf_j_cross"));
    const double t = seconds_since(t0);
    report(3, "Laplacian identity", flat.pass && conf.pass && jterms < kJTermTol && t < 30.0,
           fmt::format("flat orders [{}] linf {:.2e}; conformal orders [{}] linf {:.2e}; flat J-terms "
                       "{:.1e} < {:.0e}; {:.1f} s < 30 s",
                       orders(flat), flat.linf, orders(conf), conf.linf, jterms, kJTermTol, t));
}

// 4. Gradient identities: same refinement criterion.
void criterion_4() {
    const auto t0 = Clock::now();
    VerifyOptions o;
    o.tolerance = kIdentityTol;
    o.min_order = kMinOrder;
    const std::vector<int> levels = {32, 64, 128};
    const Report flat = verify_gradient_identities(suite_family(), euclidean_c2(), levels, o);
    const Report conf = verify_gradient_identities(suite_family(), conformal(conformal_factors()[1]), levels, o);
    const double t = seconds_since(t0);
    report(4, "gradient identities", flat.pass && conf.pass && t < 30.0,
           fmt::format("flat orders [{}] linf {:.2e}; conformal orders [{}] linf {:.2e}; {:.1f} s", orders(flat),
                       flat.linf, orders(conf), conf.linf, t));
}

// 5. E-L field versus its frame components; holomorphic graphs are critical.
void criterion_5() {
    double worst = 0.0, holo = 0.0;
    std::vector<AmbientManifold> ambients = {euclidean_c2(), conformal(conformal_factors()[0])};
    for (const AmbientManifold& m : ambients)
        for (const Sample& s : graph_suite()) {
            const SurfaceGeometry g = compute_geometry(perturbed_graph(64, 64, s.c, s.p), m);
            for (double b : {0.0, 1.0, 2.0}) {
                const ELField f = el_operator(g, Beta(b));
                const ELComponents c = el_components(g, Beta(b));
                for (std::size_t n = 0; n < g.size(); ++n) {
                    if (!c.valid[n]) continue;
                    const double c3 = std::pow(g.cos_alpha[n], 3);
                    worst = std::max(worst, (f.normal[n] / c3 - c.residual[n]).cwiseAbs().maxCoeff());
                }
            }
        }
    for (const auto& a : {std::complex<double>(0, 0), {0.5, 0.0}, {0.3, -0.7}, {-1.2, 0.4}})
        for (double b : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            const ELField f = el_operator(holomorphic_graph(32, 32, a, {0.1, 0.2}), euclidean_c2(), Beta(b));
            holo = std::max(holo, f.linf);
        }
    report(5, "E-L consistency", worst < kELConsistencyTol && holo < kHolomorphicTol,
           fmt::format("field vs components max diff {:.2e} < {:.0e}; holomorphic residual {:.2e} < {:.0e}",
                       worst, kELConsistencyTol, holo, kHolomorphicTol));
}

// 6. x^2 + y^2 + z^2 = 1 and the adapted gauge on every test surface.
void criterion_6() {
    std::vector<ImmersedSurface> surfaces = {
        complex_line(32, 32),
        holomorphic_graph(32, 32, {0.3, -0.7}),
        conj_graph(32, 32, 0.5),
        perturbed_holomorphic_graph(32, 32, 0.0, {0.05, 1, 1}),
        lagrangian_torus(32, 32),
        round_torus(32, 32),
        clifford_torus(32, 32, 1.0, 0.7),
    };
    for (const Sample& s : graph_suite()) surfaces.push_back(perturbed_graph(32, 32, s.c, s.p));
    std::vector<AmbientManifold> ambients = {euclidean_c2()};
    for (const auto& f : conformal_factors()) ambients.push_back(conformal(f));
    double unit = 0.0, gauge = 0.0;
    std::size_t nodes = 0;
    for (const AmbientManifold& m : ambients)
        for (const ImmersedSurface& s : surfaces) {
            const SurfaceGeometry g = compute_geometry(s, m);
            for (const FrameNode& f : g.frame.nodes) {
                ++nodes;
                unit = std::max(unit, std::abs(f.x * f.x + f.y * f.y + f.z * f.z - 1.0));
                if (std::hypot(f.y, f.z) > 1e-6) gauge = std::max(gauge, std::abs(f.z));
            }
        }
    report(6, "frame invariant", unit < kFrameTol && gauge < kFrameTol,
           fmt::format("{} nodes, max |x^2+y^2+z^2-1| {:.2e}, max |z| {:.2e} (tol {:.0e})", nodes, unit, gauge,
                       kFrameTol));
}

// 7. Conditions on nabla J: zero when flat, d omega in a conformal ambient.
void criterion_7() {
    double flat = 0.0;
    for (const Sample& s : graph_suite()) {
        const SurfaceGeometry g = compute_geometry(perturbed_graph(32, 32, s.c, s.p), euclidean_c2());
        for (const Vec2& v : cyclic_condition_values(g, euclidean_c2())) flat = std::max(flat, v.cwiseAbs().maxCoeff());
        for (const auto& v : symmetric_condition_values(g))
            for (double x : v) flat = std::max(flat, std::abs(x));
    }
    // omega = exp(2 lambda) omega_0, so the cyclic sum equals 2 exp(2 lambda) (d lambda ^ omega_0).
    double worst = 0.0, scale = 0.0;
    for (const std::string& text : conformal_factors()) {
        const Expression lambda = Expression::parse(text);
        const AmbientManifold m = conformal(lambda);
        const SurfaceGeometry g = compute_geometry(perturbed_graph(32, 32, 0.5, {0.1, 1, 1}), m);
        const std::vector<Vec2> values = cyclic_condition_values(g, m);
        for (std::size_t n = 0; n < g.size(); ++n) {
            const Vec4& p = g.ambient.points[n];
            const Vec4 dl = fd_gradient(lambda, p);
            const auto& e = g.frame.nodes[n].e;
            auto w0 = [](const Vec4& u, const Vec4& v) { return std_j(u).dot(v); };
            for (int a = 0; a < 2; ++a) {
                const Vec4 &x = e[0], &y = e[1], &z = e[2 + a];
                const double d_omega = 2 * std::exp(2 * lambda(p)) *
                                       (dl.dot(x) * w0(y, z) - dl.dot(y) * w0(x, z) + dl.dot(z) * w0(x, y));
                worst = std::max(worst, std::abs(values[n][a] - d_omega));
                scale = std::max(scale, std::abs(d_omega));
            }
        }
    }
    report(7, "conditions on nabla J", flat < kConditionTol && worst < kDOmegaTol,
           fmt::format("flat max {:.1e} < {:.0e}; conformal cyclic vs d omega max diff {:.2e} < {:.0e} "
                       "(values up to {:.2e})",
                       flat, kConditionTol, worst, kDOmegaTol, scale));
}

// 8. Flow from a perturbed holomorphic graph to a critical surface.
void criterion_8() {
    const auto t0 = Clock::now();
    FlowOptions o;
    o.residual_tol = kFlowResidual;
    const FlowResult r = run_flow(perturbed_holomorphic_graph(64, 64, 0.0, {0.05, 1, 1}), euclidean_c2(),
                                  Beta(1.0), o);
    const auto& trace = r.state.trace;
    bool decreasing = true, cos_monotone = true;
    for (std::size_t k = 1; k < trace.size(); ++k) decreasing = decreasing && trace[k].l_beta < trace[k - 1].l_beta;
    for (std::size_t k = trace.size() / 2 + 1; k < trace.size(); ++k)
        cos_monotone = cos_monotone && trace[k].min_cos_alpha >= trace[k - 1].min_cos_alpha;
    CriticalOptions co;
    co.min_sin = kCriticalMinSin;
    co.bound_factor = 10.0;
    co.bound_constant = 1.0;
    const Report crit = verify_critical_identity(r.state.surface, euclidean_c2(), Beta(1.0), co);
    const double t = seconds_since(t0);
    const bool pass = r.outcome == FlowOutcome::converged && r.state.res_linf < kFlowResidual && decreasing &&
                      cos_monotone && crit.status == "pass" && t < 120.0;
    report(8, "flow to a critical surface", pass,
           fmt::format("{} after {} iterations, residual {:.2e} < {:.0e}, L_beta strictly decreasing: {}, "
                       "min cos non-decreasing over last half: {}, critical identity {} (linf {:.2e} <= bound "
                       "{:.2e}, {} nodes with sin <= {:.0e} excluded), {:.1f} s < 120 s",
                       to_string(r.outcome), r.state.iteration, r.state.res_linf, kFlowResidual,
                       decreasing ? "yes" : "no", cos_monotone ? "yes" : "no", crit.status, crit.linf,
                       crit.tolerance, crit.excluded, kCriticalMinSin, t));
}

// 9. Curvature symmetries on the FD path and the conformal Christoffel closed form.
void criterion_9() {
    std::mt19937 rng(20261015);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    double sym = 0.0, chris = 0.0;
    for (const std::string& text : conformal_factors()) {
        const Expression lambda = Expression::parse(text);
        const AmbientManifold fd = conformal(lambda, {1e-3, false});
        const AmbientManifold exact = conformal(lambda);
        for (int k = 0; k < 100; ++k) {
            const Vec4 p(u(rng), u(rng), u(rng), u(rng));
            const CurvatureData K = curvature_at(fd, p);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int c = 0; c < 4; ++c)
                        for (int d = 0; d < 4; ++d) {
                            const double v = K.lowered(a, b, c, d);
                            sym = std::max({sym, std::abs(v + K.lowered(b, a, c, d)),
                                            std::abs(v + K.lowered(a, b, d, c)),
                                            std::abs(v - K.lowered(c, d, a, b)),
                                            std::abs(v + K.lowered(a, c, d, b) + K.lowered(a, d, b, c))});
                        }
            // Gamma^a_bc = delta_ab l_c + delta_ac l_b - delta_bc l_a
            const Vec4 dl = fd_gradient(lambda, p);
            for (const AmbientManifold* m : {&fd, &exact}) {
                const ConnectionData G = christoffel_at(*m, p);
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        for (int c = 0; c < 4; ++c) {
                            const double e =
                                (a == b ? dl[c] : 0.0) + (a == c ? dl[b] : 0.0) - (b == c ? dl[a] : 0.0);
                            chris = std::max(chris, std::abs(G(a, b, c) - e));
                        }
            }
        }
    }
    report(9, "ambient curvature and connection", sym < kCurvatureTol && chris < kChristoffelTol,
           fmt::format("300 points, max symmetry/Bianchi residual {:.2e} < {:.0e}, max Christoffel err {:.2e} < "
                       "{:.0e}",
                       sym, kCurvatureTol, chris, kChristoffelTol));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria = {criterion_1, criterion_2, criterion_3,
                                                         criterion_4, criterion_5, criterion_6,
                                                         criterion_7, criterion_8, criterion_9};
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            criteria[k]();
        } catch (const std::exception& e) {
            report(static_cast<int>(k + 1), "exception", false, e.what());
        }
    }
    fmt::print("acceptance: {} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
