#include <doctest.h>

#include <cmath>
#include <random>

#include "kahlab/ambient.hpp"
#include "kahlab/errors.hpp"

using namespace kahlab;

namespace {

Vec4 random_point(std::mt19937& rng, double scale = 3.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return Vec4(u(rng), u(rng), u(rng), u(rng));
}

std::vector<AmbientManifold> builtins() {
    return {euclidean_c2(), conformal("0.2*sin(p1) + 0.1*p2*p3"),
            conformal("0.1*cos(p1 + 2*p4) + 0.05*p3^2"),
            conformal("0.15*sin(p1)*cos(p2) - 0.1*exp(0.2*p4)", {1e-3, false})};
}

// Gradient of lambda = 0.3 sin p1 + 0.2 p2 p3, written out by hand.
Vec4 lambda_gradient(const Vec4& p) {
    return Vec4(0.3 * std::cos(p[0]), 0.2 * p[2], 0.2 * p[1], 0.0);
}

}  // namespace

TEST_CASE("metric_at on builtin manifolds") {
    const Vec4 p(0.3, -1.0, 2.0, 0.5);
    CHECK((metric_at(euclidean_c2(), p) - Mat4::Identity()).norm() == 0.0);
    CHECK((metric_at(conformal("0"), p) - Mat4::Identity()).norm() == 0.0);
    const Mat4 g = metric_at(conformal("p1"), Vec4(1, 0, 0, 0));
    CHECK((g - std::exp(2.0) * Mat4::Identity()).norm() < 1e-14);
}

TEST_CASE("metric_at rejects non positive definite metrics") {
    AmbientManifold m = euclidean_c2();
    m.metric_field = [](const Vec4&) {
        Mat4 g = Mat4::Identity();
        g(2, 2) = -1.0;
        return g;
    };
    CHECK_THROWS_AS(metric_at(m, Vec4::Zero()), AmbientDegenerate);
}

TEST_CASE("j_at returns the standard structure and checks it") {
    const Mat4 j = j_at(euclidean_c2(), Vec4::Zero());
    CHECK(j(1, 0) == 1.0);
    CHECK(j(0, 1) == -1.0);
    CHECK(j(3, 2) == 1.0);
    CHECK(j(2, 3) == -1.0);
    const Mat4 jc = j_at(conformal("0.3*p1"), Vec4(1, 2, 3, 4));
    CHECK((jc - j).norm() == 0.0);
    const Mat4 g = metric_at(conformal("0.3*p1"), Vec4(1, 2, 3, 4));
    CHECK((jc.transpose() * g * jc - g).norm() < 1e-12);

    AmbientManifold bad = euclidean_c2();
    bad.j_field = [](const Vec4&) {
        Mat4 m = standard_complex_structure();
        m(1, 0) = 1.1;
        return m;
    };
    CHECK_THROWS_AS(j_at(bad, Vec4::Zero()), StructureViolation);
}

TEST_CASE("structure holds on 100 random points of every builtin") {
    std::mt19937 rng(7);
    for (const auto& m : builtins())
        for (int k = 0; k < 100; ++k) {
            const Vec4 p = random_point(rng);
            const Mat4 j = j_at(m, p), g = metric_at(m, p);
            CHECK((j * j + Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);
            CHECK((j.transpose() * g * j - g).cwiseAbs().maxCoeff() < 1e-10 * g.norm());
        }
}

TEST_CASE("christoffel symbols: flat, conformal closed form and FD agreement") {
    const Vec4 p(0.7, -0.4, 1.3, 0.2);
    const ConnectionData flat = christoffel_at(euclidean_c2(), p);
    for (int a = 0; a < 4; ++a) CHECK(flat.gamma[a].norm() == 0.0);

    const AmbientManifold m = conformal("0.3*sin(p1) + 0.2*p2*p3");
    const ConnectionData c = christoffel_at(m, p);
    const Vec4 dl = lambda_gradient(p);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int d = 0; d < 4; ++d) {
                const double expected =
                    (a == b ? dl[d] : 0.0) + (a == d ? dl[b] : 0.0) - (b == d ? dl[a] : 0.0);
                CHECK(c(a, b, d) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
                CHECK(c(a, b, d) == c(a, d, b));
            }

    const AmbientManifold fd = conformal("0.3*sin(p1) + 0.2*p2*p3", {1e-3, false});
    const ConnectionData cf = christoffel_at(fd, p);
    double diff = 0.0;
    for (int a = 0; a < 4; ++a) diff = std::max(diff, (cf.gamma[a] - c.gamma[a]).cwiseAbs().maxCoeff());
    CHECK(diff < 1e-9);
}

TEST_CASE("metric compatibility of the connection") {
    std::mt19937 rng(11);
    for (const auto& m : builtins()) {
        const bool analytic = static_cast<bool>(m.metric_derivative_field) || m.name == "euclidean_c2";
        for (int k = 0; k < 20; ++k) {
            const Vec4 p = random_point(rng);
            const Mat4 g = metric_at(m, p);
            const MatrixGradient dg = metric_derivative_at(m, p);
            const ConnectionData c = christoffel_at(m, p);
            double worst = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int cc = 0; cc < 4; ++cc) {
                        double r = dg[cc](a, b);
                        for (int d = 0; d < 4; ++d) r -= c(d, cc, a) * g(d, b) + c(d, cc, b) * g(a, d);
                        worst = std::max(worst, std::abs(r));
                    }
            CHECK(worst < (analytic ? 1e-12 : 1e-8));
        }
    }
}

TEST_CASE("curvature of a conformal metric at a critical point of the factor") {
    // lambda = eps p1^2: lambda = 0 and grad lambda = 0 at the origin, Hessian diag(2 eps, 0, 0, 0).
    const double eps = 0.3;
    const CurvatureData k = curvature_at(conformal("0.3*p1^2"), Vec4::Zero());
    Mat4 hess = Mat4::Zero();
    hess(0, 0) = 2 * eps;
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    const double expected = delta(d, b) * hess(c, a) - delta(c, b) * hess(d, a) -
                                            delta(d, a) * hess(c, b) + delta(c, a) * hess(d, b);
                    worst = std::max(worst, std::abs(k.lowered(a, b, c, d) - expected));
                }
    CHECK(worst < 1e-6);
    CHECK(k.lowered(0, 1, 1, 0) == doctest::Approx(-2 * eps).epsilon(1e-6));
}

TEST_CASE("curvature symmetries and first Bianchi identity") {
    std::mt19937 rng(3);
    const CurvatureData flat = curvature_at(euclidean_c2(), Vec4(1, 2, 3, 4));
    for (double v : flat.lowered_components) CHECK(v == 0.0);
    for (const auto& m : builtins()) {
        for (int n = 0; n < 10; ++n) {
            const CurvatureData k = curvature_at(m, random_point(rng, 2.0));
            double worst = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int c = 0; c < 4; ++c)
                        for (int d = 0; d < 4; ++d) {
                            const double v = k.lowered(a, b, c, d);
                            worst = std::max({worst, std::abs(v + k.lowered(b, a, c, d)),
                                              std::abs(v + k.lowered(a, b, d, c)),
                                              std::abs(v - k.lowered(c, d, a, b)),
                                              std::abs(v + k.lowered(a, c, d, b) + k.lowered(a, d, b, c))});
                        }
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("nabla J: flat zero, skew-adjoint, linear, matches the commutator oracle") {
    std::mt19937 rng(5);
    const Vec4 x(0.3, -0.2, 1.0, 0.5), y(-1.0, 0.4, 0.1, 2.0);
    CHECK(nabla_j_at(euclidean_c2(), Vec4(1, 1, 1, 1), x).norm() == 0.0);
    for (const auto& m : builtins()) {
        const Vec4 p = random_point(rng, 1.5);
        const Mat4 g = metric_at(m, p);
        const Mat4 dx = nabla_j_at(m, p, x);
        for (int t = 0; t < 5; ++t) {
            const Vec4 u = random_point(rng, 1.0), v = random_point(rng, 1.0);
            CHECK(std::abs((dx * u).dot(g * v) + u.dot(g * (dx * v))) < 1e-10);
        }
        const Mat4 lin = nabla_j_at(m, p, 2.0 * x - 0.5 * y);
        CHECK((lin - (2.0 * nabla_j_at(m, p, x) - 0.5 * nabla_j_at(m, p, y))).cwiseAbs().maxCoeff() <
              1e-13);
    }

    // Constant J: nabla_X J = [Gamma_X, J] with Gamma from the conformal formula and d lambda
    // from a central difference of the factor.
    const AmbientManifold m = conformal("p1");
    const Vec4 p = Vec4::Zero(), e3(0, 0, 1, 0);
    const Mat4 d = nabla_j_at(m, p, e3);
    const Expression lam = Expression::parse("p1");
    Vec4 dl;
    for (int a = 0; a < 4; ++a) {
        Vec4 h = Vec4::Zero();
        h[a] = 1e-5;
        dl[a] = (lam(p + h) - lam(p - h)) / 2e-5;
    }
    Mat4 gx = Mat4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                gx(a, b) += e3[c] * ((a == c ? dl[b] : 0.0) + (a == b ? dl[c] : 0.0) -
                                     (c == b ? dl[a] : 0.0));
    const Mat4 j = standard_complex_structure();
    const Mat4 expected = gx * j - j * gx;
    CHECK(d.norm() > 0.5);
    CHECK((d - expected).cwiseAbs().maxCoeff() < 1e-9);
}
