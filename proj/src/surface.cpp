#include "kahlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kahlab/errors.hpp"

namespace kahlab {

namespace {

double gdot(const Mat4& g, const Vec4& u, const Vec4& v) { return u.dot(g * v); }

// Relative test: finite differences leave round-off sized tangents where the map collapses.
bool degenerate(double e, double f, double gg) {
    const double scale = std::max(e, gg);
    return !(e * gg - f * f > 1e-20 * scale * scale);
}

[[noreturn]] void throw_not_immersed(std::vector<std::size_t> bad) {
    const std::string what = "induced metric degenerate at " + std::to_string(bad.size()) +
                             " node(s), first node " + std::to_string(bad.front());
    throw NotImmersed(what, std::move(bad));
}

void check_immersed(const SurfaceDerivatives& d, const AmbientSamples& a) {
    std::vector<std::size_t> bad;
    for (std::size_t n = 0; n < d.f_t.size(); ++n) {
        const Mat4& g = a.metric[n];
        const double e = gdot(g, d.f_t[n], d.f_t[n]);
        const double f = gdot(g, d.f_t[n], d.f_p[n]);
        const double gg = gdot(g, d.f_p[n], d.f_p[n]);
        if (degenerate(e, f, gg)) bad.push_back(n);
    }
    if (!bad.empty()) throw_not_immersed(std::move(bad));
}

}  // namespace

Vec4 ImmersedSurface::position(int i, int j) const {
    const GridShape g = shape();
    return linear_part * Vec2(theta(i), phi(j)) + periodic_part[g.index(i, j)];
}

std::vector<Vec4> ImmersedSurface::positions() const {
    std::vector<Vec4> out(node_count());
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) out[static_cast<std::size_t>(i) * n_phi + j] = position(i, j);
    return out;
}

void validate_surface(const ImmersedSurface& s) {
    if (s.n_theta < 8 || s.n_phi < 8)
        throw InvalidArgument("surface resolution must be at least 8 in each direction, got " +
                              std::to_string(s.n_theta) + "x" + std::to_string(s.n_phi));
    if (s.periodic_part.size() != s.node_count())
        throw InvalidArgument("periodic part has " + std::to_string(s.periodic_part.size()) +
                              " nodes, expected " + std::to_string(s.node_count()));
    if (!(s.period_theta > 0.0) || !(s.period_phi > 0.0))
        throw InvalidArgument("surface periods must be positive");
}

ImmersedSurface sample_surface(int n_theta, int n_phi, const Mat42& linear_part,
                               const std::function<Vec4(double, double)>& periodic,
                               double period_theta, double period_phi) {
    ImmersedSurface s;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.linear_part = linear_part;
    s.period_theta = period_theta;
    s.period_phi = period_phi;
    s.periodic_part.resize(s.node_count());
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            s.periodic_part[static_cast<std::size_t>(i) * n_phi + j] = periodic(s.theta(i), s.phi(j));
    validate_surface(s);
    return s;
}

SurfaceDerivatives derivatives(const ImmersedSurface& s) {
    validate_surface(s);
    SurfaceDerivatives d;
    d.shape = s.shape();
    const auto& p = s.periodic_part;
    d.f_t = diff_theta(p, d.shape);
    d.f_p = diff_phi(p, d.shape);
    d.f_tt = diff2_theta(p, d.shape);
    d.f_pp = diff2_phi(p, d.shape);
    d.f_tp = diff_phi(d.f_t, d.shape);
    const Vec4 l_t = s.linear_part.col(0);
    const Vec4 l_p = s.linear_part.col(1);
    for (std::size_t n = 0; n < d.f_t.size(); ++n) {
        d.f_t[n] += l_t;
        d.f_p[n] += l_p;
    }
    return d;
}

AmbientSamples sample_ambient(const ImmersedSurface& s, const AmbientManifold& m) {
    AmbientSamples a;
    a.points = s.positions();
    const std::size_t n = a.points.size();
    a.metric.resize(n);
    a.j.resize(n);
    a.connection.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        a.metric[k] = metric_at(m, a.points[k]);
        a.j[k] = j_at(m, a.points[k]);
        a.connection[k] = christoffel_at(m, a.points[k]);
    }
    return a;
}

std::vector<double> kahler_cos_alpha(const ImmersedSurface& s, const AmbientManifold& m) {
    const SurfaceDerivatives d = derivatives(s);
    const std::vector<Vec4> pts = s.positions();
    std::vector<double> out(pts.size());
    std::vector<std::size_t> bad;
    for (std::size_t n = 0; n < pts.size(); ++n) {
        const Mat4 g = metric_at(m, pts[n]);
        const Mat4 j = j_at(m, pts[n]);
        const double e = gdot(g, d.f_t[n], d.f_t[n]);
        const double f = gdot(g, d.f_t[n], d.f_p[n]);
        const double gg = gdot(g, d.f_p[n], d.f_p[n]);
        const double det = e * gg - f * f;
        if (degenerate(e, f, gg)) {
            bad.push_back(n);
            continue;
        }
        out[n] = gdot(g, j * d.f_t[n], d.f_p[n]) / std::sqrt(det);
    }
    if (!bad.empty()) throw_not_immersed(std::move(bad));
    return out;
}

std::size_t AdaptedFrame::unadapted_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const FrameNode& f) { return !f.adapted; }));
}

AdaptedFrame build_adapted_frame(const SurfaceDerivatives& d, const AmbientSamples& a,
                                 const FrameOptions& options) {
    check_immersed(d, a);
    AdaptedFrame frame;
    frame.shape = d.shape;
    frame.nodes.resize(d.f_t.size());
    const double ct = std::cos(options.normal_pre_rotation);
    const double st = std::sin(options.normal_pre_rotation);
    for (std::size_t n = 0; n < d.f_t.size(); ++n) {
        const Mat4& g = a.metric[n];
        const Mat4& j = a.j[n];
        FrameNode& node = frame.nodes[n];

        const double len_t = std::sqrt(gdot(g, d.f_t[n], d.f_t[n]));
        const Vec4 e1 = d.f_t[n] / len_t;
        const double proj = gdot(g, d.f_p[n], e1);
        const Vec4 u = d.f_p[n] - proj * e1;
        const double len_u = std::sqrt(gdot(g, u, u));
        const Vec4 e2 = u / len_u;
        node.coeff << 1.0 / len_t, -proj / (len_t * len_u), 0.0, 1.0 / len_u;

        // Initial normal pair: Gram-Schmidt on the best-conditioned chart axes.
        std::array<Vec4, 2> normals;
        std::array<Vec4, 2> basis_used;
        for (int k = 0; k < 2; ++k) {
            double best = -1.0;
            for (int axis = 0; axis < 4; ++axis) {
                Vec4 v = Vec4::Unit(axis);
                v -= gdot(g, v, e1) * e1;
                v -= gdot(g, v, e2) * e2;
                for (int prev = 0; prev < k; ++prev) v -= gdot(g, v, normals[prev]) * normals[prev];
                const double len = std::sqrt(std::max(0.0, gdot(g, v, v)));
                if (len > best) {
                    best = len;
                    basis_used[k] = v / len;
                }
            }
            normals[k] = basis_used[k];
        }
        Mat4 cols;
        cols << e1, e2, normals[0], normals[1];
        if (cols.determinant() < 0.0) normals[1] = -normals[1];

        Vec4 n3 = ct * normals[0] + st * normals[1];
        Vec4 n4 = -st * normals[0] + ct * normals[1];

        const Vec4 je1 = j * e1;
        const double y0 = gdot(g, je1, n3);
        const double z0 = gdot(g, je1, n4);
        const double s = std::hypot(y0, z0);
        if (s > options.frame_tol) {
            const Vec4 r3 = (y0 * n3 + z0 * n4) / s;
            const Vec4 r4 = (-z0 * n3 + y0 * n4) / s;
            n3 = r3;
            n4 = r4;
            node.adapted = true;
        }
        node.e = {e1, e2, n3, n4};
        node.x = gdot(g, je1, e2);
        node.y = gdot(g, je1, n3);
        node.z = gdot(g, je1, n4);
    }
    return frame;
}

AdaptedFrame build_adapted_frame(const ImmersedSurface& s, const AmbientManifold& m,
                                 const FrameOptions& options) {
    return build_adapted_frame(derivatives(s), sample_ambient(s, m), options);
}

namespace {

std::vector<SecondForm> second_form_from(const SurfaceDerivatives& d, const AmbientSamples& a,
                                         const AdaptedFrame& f) {
    std::vector<SecondForm> out(d.f_t.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const Mat4& g = a.metric[n];
        const ConnectionData& c = a.connection[n];
        const std::array<Vec4, 2> tangents = {d.f_t[n], d.f_p[n]};
        // covariant second derivatives nabla_{F_a} F_b
        Vec4 acc[2][2];
        acc[0][0] = d.f_tt[n] + c.contract(tangents[0], tangents[0]);
        acc[0][1] = d.f_tp[n] + c.contract(tangents[0], tangents[1]);
        acc[1][1] = d.f_pp[n] + c.contract(tangents[1], tangents[1]);
        acc[1][0] = acc[0][1];
        const Mat2& e = f.nodes[n].coeff;
        for (int alpha = 0; alpha < 2; ++alpha) {
            const Vec4& normal = f.nodes[n].e[2 + alpha];
            Mat2 par;
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) par(p, q) = gdot(g, acc[p][q], normal);
            out[n][alpha] = e.transpose() * par * e;
        }
    }
    return out;
}

std::vector<std::array<Mat4, 2>> nabla_j_from(const AmbientManifold& m, const AmbientSamples& a,
                                              const AdaptedFrame& f) {
    std::vector<std::array<Mat4, 2>> out(a.points.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const Mat4& g = a.metric[n];
        const auto& e = f.nodes[n].e;
        for (int k = 0; k < 2; ++k) {
            const Mat4 dj = nabla_j_at(m, a.points[n], e[k], a.connection[n]);
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) out[n][k](p, q) = gdot(g, dj * e[p], e[q]);
        }
    }
    return out;
}

std::vector<Vec2> curvature_from(const AmbientManifold& m, const AmbientSamples& a,
                                 const AdaptedFrame& f) {
    std::vector<Vec2> out(a.points.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const CurvatureData k = curvature_at(m, a.points[n]);
        const auto& e = f.nodes[n].e;
        out[n] = Vec2(k.contract(e[0], e[1], e[0], e[2]), k.contract(e[0], e[1], e[1], e[3]));
    }
    return out;
}

std::vector<double> cos_alpha_from(const SurfaceDerivatives& d, const AmbientSamples& a) {
    std::vector<double> out(d.f_t.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const Mat4& g = a.metric[n];
        const double e = gdot(g, d.f_t[n], d.f_t[n]);
        const double f = gdot(g, d.f_t[n], d.f_p[n]);
        const double gg = gdot(g, d.f_p[n], d.f_p[n]);
        out[n] = gdot(g, a.j[n] * d.f_t[n], d.f_p[n]) / std::sqrt(e * gg - f * f);
    }
    return out;
}

std::vector<Vec2> gradient_from(const GridShape& shape, const AdaptedFrame& f,
                                const std::vector<double>& field) {
    const std::vector<double> ft = diff_theta(field, shape);
    const std::vector<double> fp = diff_phi(field, shape);
    std::vector<Vec2> out(field.size());
    for (std::size_t n = 0; n < field.size(); ++n)
        out[n] = f.nodes[n].coeff.transpose() * Vec2(ft[n], fp[n]);
    return out;
}

}  // namespace

std::vector<SecondForm> second_fundamental_form(const ImmersedSurface& s,
                                                const AmbientManifold& m, const AdaptedFrame& f) {
    return second_form_from(derivatives(s), sample_ambient(s, m), f);
}

std::vector<Vec2> mean_curvature(const std::vector<SecondForm>& h) {
    std::vector<Vec2> out(h.size());
    for (std::size_t n = 0; n < h.size(); ++n)
        out[n] = Vec2(h[n][0].trace(), h[n][1].trace());
    return out;
}

std::vector<std::array<Mat4, 2>> nabla_j_components(const ImmersedSurface& s,
                                                    const AmbientManifold& m,
                                                    const AdaptedFrame& f) {
    return nabla_j_from(m, sample_ambient(s, m), f);
}

std::vector<Vec2> curvature_components(const ImmersedSurface& s, const AmbientManifold& m,
                                       const AdaptedFrame& f) {
    return curvature_from(m, sample_ambient(s, m), f);
}

std::vector<Vec2> tangential_gradient_cos_alpha(const ImmersedSurface& s,
                                                const AmbientManifold& m,
                                                const AdaptedFrame& f) {
    return gradient_from(s.shape(), f, kahler_cos_alpha(s, m));
}

double SurfaceGeometry::area() const {
    double sum = 0.0;
    for (double w : area_element) sum += w;
    return sum * cell_area();
}

Vec4 SurfaceGeometry::tangential(std::size_t n, const Vec4& v) const {
    const auto& e = frame.nodes[n].e;
    return inner(n, v, e[0]) * e[0] + inner(n, v, e[1]) * e[1];
}

SurfaceGeometry compute_geometry(const ImmersedSurface& s, const AmbientManifold& m,
                                 const GeometryOptions& options) {
    SurfaceGeometry geo;
    geo.shape = s.shape();
    geo.deriv = derivatives(s);
    geo.ambient = sample_ambient(s, m);
    geo.frame = build_adapted_frame(geo.deriv, geo.ambient, options.frame);

    const std::size_t count = geo.size();
    geo.metric.resize(count);
    geo.area_element.resize(count);
    geo.sin_alpha.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
        const Mat4& g = geo.ambient.metric[n];
        const Vec4& ft = geo.deriv.f_t[n];
        const Vec4& fp = geo.deriv.f_p[n];
        geo.metric[n] << gdot(g, ft, ft), gdot(g, ft, fp), gdot(g, fp, ft), gdot(g, fp, fp);
        geo.area_element[n] = std::sqrt(geo.metric[n].determinant());
        geo.sin_alpha[n] = std::hypot(geo.frame.nodes[n].y, geo.frame.nodes[n].z);
    }
    geo.cos_alpha = cos_alpha_from(geo.deriv, geo.ambient);
    geo.second_form = second_form_from(geo.deriv, geo.ambient, geo.frame);
    geo.mean_curvature = kahlab::mean_curvature(geo.second_form);
    geo.mean_curvature_vector.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
        const auto& e = geo.frame.nodes[n].e;
        geo.mean_curvature_vector[n] =
            geo.mean_curvature[n][0] * e[2] + geo.mean_curvature[n][1] * e[3];
    }
    geo.nabla_j = nabla_j_from(m, geo.ambient, geo.frame);
    if (options.curvature) geo.curvature = curvature_from(m, geo.ambient, geo.frame);
    geo.grad_cos = gradient_from(geo.shape, geo.frame, geo.cos_alpha);
    return geo;
}

std::vector<Vec2> frame_gradient(const SurfaceGeometry& g, const std::vector<double>& f) {
    return gradient_from(g.shape, g.frame, f);
}

std::array<std::vector<Vec4>, 2> frame_derivative(const SurfaceGeometry& g,
                                                  const std::vector<Vec4>& v) {
    const std::vector<Vec4> vt = diff_theta(v, g.shape);
    const std::vector<Vec4> vp = diff_phi(v, g.shape);
    std::array<std::vector<Vec4>, 2> out;
    out[0].resize(v.size());
    out[1].resize(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const Mat2& c = g.frame.nodes[n].coeff;
        for (int k = 0; k < 2; ++k) out[k][n] = c(0, k) * vt[n] + c(1, k) * vp[n];
    }
    return out;
}

std::vector<double> laplace_beltrami(const SurfaceGeometry& g, const std::vector<double>& f) {
    const std::vector<double> ft = diff_theta(f, g.shape);
    const std::vector<double> fp = diff_phi(f, g.shape);
    std::vector<double> flux_t(f.size()), flux_p(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        const Mat2 inv = g.metric[n].inverse();
        const double w = g.area_element[n];
        flux_t[n] = w * (inv(0, 0) * ft[n] + inv(0, 1) * fp[n]);
        flux_p[n] = w * (inv(1, 0) * ft[n] + inv(1, 1) * fp[n]);
    }
    const std::vector<double> div_t = diff_theta(flux_t, g.shape);
    const std::vector<double> div_p = diff_phi(flux_p, g.shape);
    std::vector<double> out(f.size());
    for (std::size_t n = 0; n < f.size(); ++n)
        out[n] = (div_t[n] + div_p[n]) / g.area_element[n];
    return out;
}

}  // namespace kahlab
