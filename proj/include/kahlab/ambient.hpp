#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "kahlab/expression.hpp"
#include "kahlab/types.hpp"

namespace kahlab {

/// Partial derivatives of a matrix field: entry C holds d/dp_C of the matrix.
using MatrixGradient = std::array<Mat4, 4>;

/// Four-dimensional Hermitian manifold described on a single chart.
///
/// J is stored as the matrix J^A_B acting on column vectors, so the image of
/// the coordinate vector d_B is column B. Derivative fields are optional; when
/// absent, fourth-order central differences with step `fd_step` are used.
struct AmbientManifold {
    std::string name;
    std::function<Mat4(const Vec4&)> metric_field;
    std::function<Mat4(const Vec4&)> j_field;
    std::function<MatrixGradient(const Vec4&)> metric_derivative_field;
    std::function<MatrixGradient(const Vec4&)> j_derivative_field;
    double fd_step = 1e-3;
    /// Tolerance on ||J^2 + I|| and ||J^T g J - g|| (max-abs entry).
    double structure_tol = 1e-10;
    /// Conformal factor, kept for reporting when the manifold is conformal.
    std::optional<Expression> conformal_factor;
};

/// Levi-Civita connection: gamma[A](B, C) = Gamma^A_{BC}.
struct ConnectionData {
    std::array<Mat4, 4> gamma{};

    double operator()(int a, int b, int c) const { return gamma[a](b, c); }
    /// Gamma(X, Y)^A = Gamma^A_{BC} X^B Y^C.
    Vec4 contract(const Vec4& x, const Vec4& y) const;
};

/// Riemann tensor of the chart metric.
///
/// Convention: K(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// `mixed(a,b,c,d)` is the d-th chart component of K(d_a, d_b) d_c and
/// `lowered(a,b,c,d)` = <K(d_a, d_b) d_c, d_d>.
struct CurvatureData {
    std::array<double, 256> mixed_components{};
    std::array<double, 256> lowered_components{};

    static constexpr int index(int a, int b, int c, int d) { return ((a * 4 + b) * 4 + c) * 4 + d; }
    double mixed(int a, int b, int c, int d) const { return mixed_components[index(a, b, c, d)]; }
    double lowered(int a, int b, int c, int d) const {
        return lowered_components[index(a, b, c, d)];
    }
    /// <K(X,Y)Z, W> for chart vectors.
    double contract(const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& w) const;
};

Mat4 metric_at(const AmbientManifold& m, const Vec4& p);
Mat4 j_at(const AmbientManifold& m, const Vec4& p);
MatrixGradient metric_derivative_at(const AmbientManifold& m, const Vec4& p);
MatrixGradient j_derivative_at(const AmbientManifold& m, const Vec4& p);
ConnectionData christoffel_at(const AmbientManifold& m, const Vec4& p);
CurvatureData curvature_at(const AmbientManifold& m, const Vec4& p);
/// Endomorphism nabla_X J at p, as a matrix acting on chart vectors.
Mat4 nabla_j_at(const AmbientManifold& m, const Vec4& p, const Vec4& x);
/// Same, reusing connection data already evaluated at p.
Mat4 nabla_j_at(const AmbientManifold& m, const Vec4& p, const Vec4& x,
                const ConnectionData& connection);

/// Standard complex structure d1 -> d2, d3 -> d4.
Mat4 standard_complex_structure();

/// Flat C^2 with the standard complex structure.
AmbientManifold euclidean_c2();

struct ConformalOptions {
    double fd_step = 1e-3;
    /// Supply exact metric derivatives from the jet of the conformal factor.
    bool analytic_derivatives = true;
};

/// Metric exp(2 lambda(p)) delta with the standard complex structure.
AmbientManifold conformal(const Expression& lambda, const ConformalOptions& options = {});
AmbientManifold conformal(const std::string& lambda, const ConformalOptions& options = {});

/// Fourth-order central difference of a matrix field along coordinate `axis`.
Mat4 central_difference(const std::function<Mat4(const Vec4&)>& field, const Vec4& p, int axis,
                        double step);

}  // namespace kahlab
