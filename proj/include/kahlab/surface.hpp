#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "kahlab/ambient.hpp"
#include "kahlab/grid.hpp"
#include "kahlab/types.hpp"

namespace kahlab {

/// Closed surface given as a doubly periodic grid F(theta, phi) = L (theta, phi) + P(theta, phi).
///
/// Node (i, j) sits at theta = i * T_theta / n_theta, phi = j * T_phi / n_phi. The seam
/// is not duplicated, so periodicity of P holds by storage.
struct ImmersedSurface {
    int n_theta = 0;
    int n_phi = 0;
    Mat42 linear_part = Mat42::Zero();
    std::vector<Vec4> periodic_part;
    double period_theta = kTwoPi;
    double period_phi = kTwoPi;

    GridShape shape() const {
        return {n_theta, n_phi, period_theta / n_theta, period_phi / n_phi};
    }
    std::size_t node_count() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    double theta(int i) const { return i * period_theta / n_theta; }
    double phi(int j) const { return j * period_phi / n_phi; }
    Vec4 position(int i, int j) const;
    std::vector<Vec4> positions() const;
};

/// Throws InvalidArgument unless resolutions are at least 8 and storage matches.
void validate_surface(const ImmersedSurface& s);

ImmersedSurface sample_surface(int n_theta, int n_phi, const Mat42& linear_part,
                               const std::function<Vec4(double, double)>& periodic,
                               double period_theta = kTwoPi, double period_phi = kTwoPi);

/// Parametric derivatives at every node.
struct SurfaceDerivatives {
    GridShape shape;
    std::vector<Vec4> f_t, f_p, f_tt, f_tp, f_pp;
};

SurfaceDerivatives derivatives(const ImmersedSurface& s);

/// Metric, complex structure and connection sampled at the surface nodes.
struct AmbientSamples {
    std::vector<Vec4> points;
    std::vector<Mat4> metric;
    std::vector<Mat4> j;
    std::vector<ConnectionData> connection;
};

AmbientSamples sample_ambient(const ImmersedSurface& s, const AmbientManifold& m);

/// cos(alpha) = omega(F_theta, F_phi) / sqrt(det g) at every node.
std::vector<double> kahler_cos_alpha(const ImmersedSurface& s, const AmbientManifold& m);

/// Orthonormal frame at one node; e[0], e[1] tangent, e[2], e[3] normal.
struct FrameNode {
    std::array<Vec4, 4> e;
    /// e_k = coeff(0, k) F_theta + coeff(1, k) F_phi for k = 0, 1.
    Mat2 coeff = Mat2::Zero();
    double x = 0.0;  ///< <J e1, e2>
    double y = 0.0;  ///< <J e1, e3>
    double z = 0.0;  ///< <J e1, e4>
    /// false where sin(alpha) <= frame_tol and the normal rotation is undetermined.
    bool adapted = false;
};

struct AdaptedFrame {
    GridShape shape;
    std::vector<FrameNode> nodes;

    std::size_t unadapted_count() const;
};

struct FrameOptions {
    double frame_tol = 1e-6;
    /// Rotation (radians) applied to the initial normal pair before adaptation.
    double normal_pre_rotation = 0.0;
};

AdaptedFrame build_adapted_frame(const ImmersedSurface& s, const AmbientManifold& m,
                                 const FrameOptions& options = {});
AdaptedFrame build_adapted_frame(const SurfaceDerivatives& d, const AmbientSamples& a,
                                 const FrameOptions& options = {});

/// h[alpha](i, j) = <nabla_{e_i} e_j, e_{alpha+3}>.
using SecondForm = std::array<Mat2, 2>;

std::vector<SecondForm> second_fundamental_form(const ImmersedSurface& s,
                                                const AmbientManifold& m, const AdaptedFrame& f);
std::vector<Vec2> mean_curvature(const std::vector<SecondForm>& h);
/// nabla_j[k](a, b) = <(nabla_{e_k} J) e_a, e_b>.
std::vector<std::array<Mat4, 2>> nabla_j_components(const ImmersedSurface& s,
                                                    const AmbientManifold& m,
                                                    const AdaptedFrame& f);
/// (K_1213, K_1224) in the frame.
std::vector<Vec2> curvature_components(const ImmersedSurface& s, const AmbientManifold& m,
                                       const AdaptedFrame& f);
/// (e_1 cos(alpha), e_2 cos(alpha)).
std::vector<Vec2> tangential_gradient_cos_alpha(const ImmersedSurface& s,
                                                const AmbientManifold& m,
                                                const AdaptedFrame& f);

struct GeometryOptions {
    FrameOptions frame;
    bool curvature = false;
};

/// Every per-node quantity the functional, verification and flow modules consume.
struct SurfaceGeometry {
    GridShape shape;
    SurfaceDerivatives deriv;
    AmbientSamples ambient;
    AdaptedFrame frame;
    std::vector<Mat2> metric;
    std::vector<double> area_element;
    std::vector<double> cos_alpha;
    std::vector<double> sin_alpha;
    std::vector<SecondForm> second_form;
    std::vector<Vec2> mean_curvature;
    std::vector<Vec4> mean_curvature_vector;
    std::vector<std::array<Mat4, 2>> nabla_j;
    std::vector<Vec2> curvature;  ///< empty unless requested
    std::vector<Vec2> grad_cos;

    std::size_t size() const { return shape.size(); }
    double cell_area() const { return shape.h_theta * shape.h_phi; }
    double area() const;
    /// Tangential projection of a chart vector at node n.
    Vec4 tangential(std::size_t n, const Vec4& v) const;
    Vec4 normal(std::size_t n, const Vec4& v) const { return v - tangential(n, v); }
    double inner(std::size_t n, const Vec4& u, const Vec4& v) const {
        return u.dot(ambient.metric[n] * v);
    }
};

SurfaceGeometry compute_geometry(const ImmersedSurface& s, const AmbientManifold& m,
                                 const GeometryOptions& options = {});

/// (e_1 f, e_2 f) for a scalar grid field.
std::vector<Vec2> frame_gradient(const SurfaceGeometry& g, const std::vector<double>& f);
/// (e_1 V, e_2 V) for a chart-vector grid field (componentwise).
std::array<std::vector<Vec4>, 2> frame_derivative(const SurfaceGeometry& g,
                                                  const std::vector<Vec4>& v);
/// Laplace-Beltrami operator of the induced metric, in divergence form.
std::vector<double> laplace_beltrami(const SurfaceGeometry& g, const std::vector<double>& f);

}  // namespace kahlab
