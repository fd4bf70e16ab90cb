#include "kahlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kahlab/errors.hpp"

namespace kahlab {

Beta::Beta(double value) : value_(value) {
    if (value == -1.0) throw InvalidArgument("beta must differ from -1");
    if (!std::isfinite(value)) throw InvalidArgument("beta must be finite");
}

void require_symplectic(const SurfaceGeometry& g, double cos_floor) {
    std::vector<std::size_t> bad;
    double min_cos = 1.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        min_cos = std::min(min_cos, g.cos_alpha[n]);
        if (!(g.cos_alpha[n] > cos_floor)) bad.push_back(n);
    }
    if (bad.empty()) return;
    std::ostringstream os;
    os << "surface is not symplectic: cos(alpha) <= " << cos_floor << " at " << bad.size()
       << " node(s) (min cos(alpha) = " << min_cos << "); nodes:";
    for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 8); ++k) {
        const std::size_t n = bad[k];
        os << " (" << n / static_cast<std::size_t>(g.shape.n_phi) << ","
           << n % static_cast<std::size_t>(g.shape.n_phi) << ")";
    }
    if (bad.size() > 8) os << " ...";
    throw NotSymplectic(os.str(), std::move(bad), min_cos);
}

double l_beta(const SurfaceGeometry& g, Beta beta, const FunctionalOptions& options) {
    require_symplectic(g, options.cos_floor);
    double sum = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        sum += std::pow(g.cos_alpha[n], -beta.value()) * g.area_element[n];
    return sum * g.cell_area();
}

double l_beta(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
              const FunctionalOptions& options) {
    return l_beta(compute_geometry(s, m), beta, options);
}

std::vector<Vec4> jj_gradient_term(const SurfaceGeometry& g) {
    std::vector<Vec4> out(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& e = g.frame.nodes[n].e;
        const Mat4& j = g.ambient.j[n];
        const Vec4 je1_perp = g.normal(n, j * e[0]);
        const Vec4 je2_perp = g.normal(n, j * e[1]);
        const Vec2& dc = g.grad_cos[n];
        out[n] = g.cos_alpha[n] * (dc[0] * je2_perp - dc[1] * je1_perp);
    }
    return out;
}

std::vector<Vec4> jj_gradient_term_projected(const SurfaceGeometry& g) {
    std::vector<Vec4> out(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& e = g.frame.nodes[n].e;
        const Mat4& j = g.ambient.j[n];
        const Vec4 grad = g.grad_cos[n][0] * e[0] + g.grad_cos[n][1] * e[1];
        out[n] = g.normal(n, j * g.tangential(n, j * grad));
    }
    return out;
}

double weighted_l2(const SurfaceGeometry& g, const std::vector<double>& values,
                   const std::vector<bool>& mask) {
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!mask.empty() && !mask[n]) continue;
        num += values[n] * values[n] * g.area_element[n];
        den += g.area_element[n];
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

ELField el_operator(const SurfaceGeometry& g, Beta beta, const FunctionalOptions& options) {
    require_symplectic(g, options.cos_floor);
    const std::vector<Vec4> w = jj_gradient_term(g);
    ELField field;
    field.vector.resize(g.size());
    field.normal.resize(g.size());
    field.magnitude.resize(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double c = g.cos_alpha[n];
        const Vec4 v = c * c * c * g.mean_curvature_vector[n] - beta.value() * w[n];
        const auto& e = g.frame.nodes[n].e;
        field.vector[n] = v;
        field.normal[n] = Vec2(g.inner(n, v, e[2]), g.inner(n, v, e[3]));
        field.magnitude[n] = std::sqrt(std::max(0.0, g.inner(n, v, v)));
        field.linf = std::max(field.linf, field.magnitude[n]);
    }
    field.l2 = weighted_l2(g, field.magnitude);
    return field;
}

ELField el_operator(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
                    const FunctionalOptions& options) {
    return el_operator(compute_geometry(s, m), beta, options);
}

ELComponents el_components(const SurfaceGeometry& g, Beta beta,
                           const FunctionalOptions& options) {
    require_symplectic(g, options.cos_floor);
    ELComponents out;
    out.residual.assign(g.size(), Vec2::Zero());
    out.valid.assign(g.size(), false);
    const double b = beta.value();
    for (std::size_t n = 0; n < g.size(); ++n) {
        const FrameNode& f = g.frame.nodes[n];
        if (!f.adapted) {
            ++out.skipped;
            continue;
        }
        const double c2 = g.cos_alpha[n] * g.cos_alpha[n];
        const Vec2& dc = g.grad_cos[n];
        const Vec2& h = g.mean_curvature[n];
        out.residual[n] = Vec2(h[0] + b / c2 * (f.y * dc[1] - f.z * dc[0]),
                               h[1] + b / c2 * (f.y * dc[0] + f.z * dc[1]));
        out.valid[n] = true;
        out.linf = std::max(out.linf, out.residual[n].cwiseAbs().maxCoeff());
    }
    return out;
}

ELComponents el_components(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
                           const FrameOptions& frame, const FunctionalOptions& options) {
    GeometryOptions go;
    go.frame = frame;
    return el_components(compute_geometry(s, m, go), beta, options);
}

}  // namespace kahlab
