#pragma once

#include <complex>

#include "kahlab/surface.hpp"

namespace kahlab {

// Builtin test surfaces on the (2 pi)^2 parameter square. For graphs theta and phi are the
// real and imaginary parts of the first complex coordinate z.

/// {(z, 0)}.
ImmersedSurface complex_line(int n_theta, int n_phi);
/// {(z, a z)} plus the constant offset b; holomorphic for every complex a.
ImmersedSurface holomorphic_graph(int n_theta, int n_phi, std::complex<double> a,
                                  std::complex<double> b = 0.0);
/// {(z, c conj(z))}: constant cos(alpha) = (1 - c^2) / (1 + c^2).
ImmersedSurface conj_graph(int n_theta, int n_phi, double c);

/// Periodic perturbation eps (0, 0, sin(m_theta theta), cos(m_phi phi)).
struct Perturbation {
    double epsilon = 0.1;
    int m_theta = 1;
    int m_phi = 1;
};

/// {(z, c conj(z))} plus a perturbation.
ImmersedSurface perturbed_graph(int n_theta, int n_phi, double c, const Perturbation& p);
/// {(z, a z)} plus a perturbation.
ImmersedSurface perturbed_holomorphic_graph(int n_theta, int n_phi, std::complex<double> a,
                                            const Perturbation& p);
/// (r cos theta, r sin theta, r cos phi, r sin phi): cos(alpha) = 0.
ImmersedSurface lagrangian_torus(int n_theta, int n_phi, double r = 1.0);
/// ((a + b cos phi) cos theta, (a + b cos phi) sin theta, b sin phi, 0).
ImmersedSurface round_torus(int n_theta, int n_phi, double a = 2.0, double b = 1.0);
/// (r1 cos theta, r1 sin theta, r2 cos phi, r2 sin phi).
ImmersedSurface clifford_torus(int n_theta, int n_phi, double r1 = 1.0, double r2 = 1.0);

}  // namespace kahlab
