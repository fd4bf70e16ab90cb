#include "kahlab/ambient.hpp"

#include <cmath>
#include <sstream>

#include "kahlab/errors.hpp"

namespace kahlab {

namespace {

std::string describe_point(const Vec4& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
    return os.str();
}

// G_C(A, D) = Gamma^A_{CD}
Mat4 connection_matrix(const ConnectionData& conn, int c) {
    Mat4 out;
    for (int a = 0; a < 4; ++a)
        for (int d = 0; d < 4; ++d) out(a, d) = conn.gamma[a](c, d);
    return out;
}

}  // namespace

Vec4 ConnectionData::contract(const Vec4& x, const Vec4& y) const {
    Vec4 out;
    for (int a = 0; a < 4; ++a) out[a] = x.dot(gamma[a] * y);
    return out;
}

double CurvatureData::contract(const Vec4& x, const Vec4& y, const Vec4& z,
                               const Vec4& w) const {
    double sum = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const double xy = x[a] * y[b];
            if (xy == 0.0) continue;
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) sum += xy * z[c] * w[d] * lowered(a, b, c, d);
        }
    return sum;
}

Mat4 central_difference(const std::function<Mat4(const Vec4&)>& field, const Vec4& p, int axis,
                        double step) {
    Vec4 dp = Vec4::Zero();
    dp[axis] = step;
    return (-field(p + 2.0 * dp) + 8.0 * field(p + dp) - 8.0 * field(p - dp) +
            field(p - 2.0 * dp)) /
           (12.0 * step);
}

Mat4 metric_at(const AmbientManifold& m, const Vec4& p) {
    const Mat4 g = m.metric_field(p);
    if (!g.allFinite()) throw AmbientDegenerate("metric is not finite at " + describe_point(p));
    const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
        throw AmbientDegenerate("metric is not symmetric at " + describe_point(p));
    Eigen::LLT<Mat4> llt(g);
    if (llt.info() != Eigen::Success)
        throw AmbientDegenerate("metric is not positive definite at " + describe_point(p));
    return g;
}

Mat4 j_at(const AmbientManifold& m, const Vec4& p) {
    const Mat4 j = m.j_field(p);
    const Mat4 g = metric_at(m, p);
    const double square_defect = (j * j + Mat4::Identity()).cwiseAbs().maxCoeff();
    const double compat_defect =
        (j.transpose() * g * j - g).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff());
    if (!(square_defect <= m.structure_tol) || !(compat_defect <= m.structure_tol)) {
        std::ostringstream os;
        os << "complex structure violated at " << describe_point(p)
           << ": ||J^2+I|| = " << square_defect << ", ||J^T g J - g|| = " << compat_defect;
        throw StructureViolation(os.str(), square_defect, compat_defect);
    }
    return j;
}

MatrixGradient metric_derivative_at(const AmbientManifold& m, const Vec4& p) {
    if (m.metric_derivative_field) return m.metric_derivative_field(p);
    MatrixGradient out;
    for (int c = 0; c < 4; ++c) out[c] = central_difference(m.metric_field, p, c, m.fd_step);
    return out;
}

MatrixGradient j_derivative_at(const AmbientManifold& m, const Vec4& p) {
    if (m.j_derivative_field) return m.j_derivative_field(p);
    MatrixGradient out;
    for (int c = 0; c < 4; ++c) out[c] = central_difference(m.j_field, p, c, m.fd_step);
    return out;
}

ConnectionData christoffel_at(const AmbientManifold& m, const Vec4& p) {
    const Mat4 g = metric_at(m, p);
    const Mat4 g_inv = g.inverse();
    const MatrixGradient dg = metric_derivative_at(m, p);
    // first-kind symbols: lower(D, B, C) = 1/2 (d_B g_DC + d_C g_DB - d_D g_BC)
    std::array<Mat4, 4> lower;
    for (int d = 0; d < 4; ++d)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                lower[d](b, c) = 0.5 * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
    ConnectionData conn;
    for (int a = 0; a < 4; ++a) {
        conn.gamma[a].setZero();
        for (int d = 0; d < 4; ++d) conn.gamma[a] += g_inv(a, d) * lower[d];
    }
    return conn;
}

CurvatureData curvature_at(const AmbientManifold& m, const Vec4& p) {
    const ConnectionData conn = christoffel_at(m, p);
    const Mat4 g = metric_at(m, p);

    // dgamma[e][f](b, c) = d_e Gamma^f_{bc}
    std::array<std::array<Mat4, 4>, 4> dgamma;
    const double h = m.fd_step;
    for (int e = 0; e < 4; ++e) {
        Vec4 dp = Vec4::Zero();
        dp[e] = h;
        const ConnectionData c_p2 = christoffel_at(m, p + 2.0 * dp);
        const ConnectionData c_p1 = christoffel_at(m, p + dp);
        const ConnectionData c_m1 = christoffel_at(m, p - dp);
        const ConnectionData c_m2 = christoffel_at(m, p - 2.0 * dp);
        for (int f = 0; f < 4; ++f)
            dgamma[e][f] = (-c_p2.gamma[f] + 8.0 * c_p1.gamma[f] - 8.0 * c_m1.gamma[f] +
                            c_m2.gamma[f]) /
                           (12.0 * h);
    }

    CurvatureData k;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int f = 0; f < 4; ++f) {
                    double r = dgamma[a][f](b, c) - dgamma[b][f](a, c);
                    for (int e = 0; e < 4; ++e)
                        r += conn(e, b, c) * conn(f, a, e) - conn(e, a, c) * conn(f, b, e);
                    k.mixed_components[CurvatureData::index(a, b, c, f)] = r;
                }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double s = 0.0;
                    for (int f = 0; f < 4; ++f) s += k.mixed(a, b, c, f) * g(f, d);
                    k.lowered_components[CurvatureData::index(a, b, c, d)] = s;
                }
    return k;
}

Mat4 nabla_j_at(const AmbientManifold& m, const Vec4& p, const Vec4& x,
                const ConnectionData& connection) {
    const Mat4 j = j_at(m, p);
    const MatrixGradient dj = j_derivative_at(m, p);
    Mat4 out = Mat4::Zero();
    for (int c = 0; c < 4; ++c) {
        if (x[c] == 0.0) continue;
        const Mat4 gc = connection_matrix(connection, c);
        out += x[c] * (dj[c] + gc * j - j * gc);
    }
    return out;
}

Mat4 nabla_j_at(const AmbientManifold& m, const Vec4& p, const Vec4& x) {
    return nabla_j_at(m, p, x, christoffel_at(m, p));
}

Mat4 standard_complex_structure() {
    Mat4 j = Mat4::Zero();
    j(1, 0) = 1.0;
    j(0, 1) = -1.0;
    j(3, 2) = 1.0;
    j(2, 3) = -1.0;
    return j;
}

AmbientManifold euclidean_c2() {
    AmbientManifold m;
    m.name = "euclidean_c2";
    m.metric_field = [](const Vec4&) { return Mat4::Identity().eval(); };
    m.j_field = [](const Vec4&) { return standard_complex_structure(); };
    m.metric_derivative_field = [](const Vec4&) {
        MatrixGradient z;
        for (auto& d : z) d.setZero();
        return z;
    };
    m.j_derivative_field = m.metric_derivative_field;
    return m;
}

AmbientManifold conformal(const Expression& lambda, const ConformalOptions& options) {
    AmbientManifold m;
    m.name = "conformal(" + lambda.text() + ")";
    m.fd_step = options.fd_step;
    m.conformal_factor = lambda;
    m.metric_field = [lambda](const Vec4& p) {
        return (std::exp(2.0 * lambda(p)) * Mat4::Identity()).eval();
    };
    m.j_field = [](const Vec4&) { return standard_complex_structure(); };
    m.j_derivative_field = [](const Vec4&) {
        MatrixGradient z;
        for (auto& d : z) d.setZero();
        return z;
    };
    if (options.analytic_derivatives) {
        m.metric_derivative_field = [lambda](const Vec4& p) {
            const Jet2 l = lambda.jet(p);
            const double w = 2.0 * std::exp(2.0 * l.value);
            MatrixGradient out;
            for (int c = 0; c < 4; ++c) out[c] = (w * l.grad[c]) * Mat4::Identity();
            return out;
        };
    }
    return m;
}

AmbientManifold conformal(const std::string& lambda, const ConformalOptions& options) {
    return conformal(Expression::parse(lambda), options);
}

}  // namespace kahlab
