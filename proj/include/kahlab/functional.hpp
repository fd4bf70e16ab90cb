#pragma once

#include <cstddef>
#include <vector>

#include "kahlab/surface.hpp"

namespace kahlab {

/// Exponent of the functional; -1 is rejected.
class Beta {
public:
    explicit Beta(double value);
    double value() const { return value_; }

private:
    double value_;
};

struct FunctionalOptions {
    /// Symplectic operations fail where cos(alpha) <= cos_floor.
    double cos_floor = 1e-4;
};

/// Throws NotSymplectic listing every node with cos(alpha) <= cos_floor.
void require_symplectic(const SurfaceGeometry& g, double cos_floor);

/// Integral of cos(alpha)^(-beta) over the fundamental domain (periodic trapezoid rule).
double l_beta(const SurfaceGeometry& g, Beta beta, const FunctionalOptions& options = {});
double l_beta(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
              const FunctionalOptions& options = {});

/// (J (J grad cos alpha)^T)^perp assembled from cos(alpha) (e2 d1 cos - e1 d2 cos).
std::vector<Vec4> jj_gradient_term(const SurfaceGeometry& g);
/// The same normal field by applying J and the projections literally.
std::vector<Vec4> jj_gradient_term_projected(const SurfaceGeometry& g);

/// cos^3(alpha) H - beta (J (J grad cos alpha)^T)^perp at every node.
struct ELField {
    std::vector<Vec4> vector;  ///< chart components
    std::vector<Vec2> normal;  ///< components on (e3, e4)
    std::vector<double> magnitude;
    double l2 = 0.0;    ///< area-weighted RMS of the magnitude
    double linf = 0.0;  ///< max magnitude
};

ELField el_operator(const SurfaceGeometry& g, Beta beta, const FunctionalOptions& options = {});
ELField el_operator(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
                    const FunctionalOptions& options = {});

/// H^3 + beta/cos^2 (y d2 cos - z d1 cos) and H^4 + beta/cos^2 (y d1 cos + z d2 cos) on
/// adapted nodes. Unadapted nodes are skipped and counted.
struct ELComponents {
    std::vector<Vec2> residual;
    std::vector<bool> valid;
    std::size_t skipped = 0;
    double linf = 0.0;
};

ELComponents el_components(const SurfaceGeometry& g, Beta beta,
                           const FunctionalOptions& options = {});
ELComponents el_components(const ImmersedSurface& s, const AmbientManifold& m, Beta beta,
                           const FrameOptions& frame = {}, const FunctionalOptions& options = {});

/// Area-weighted RMS of a scalar field over the nodes where `mask` is true (all when empty).
double weighted_l2(const SurfaceGeometry& g, const std::vector<double>& values,
                   const std::vector<bool>& mask = {});

}  // namespace kahlab
