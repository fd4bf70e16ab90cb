#include "kahlab/generators.hpp"

#include <cmath>

namespace kahlab {

namespace {

Vec4 zero_part(double, double) { return Vec4::Zero(); }

Mat42 holomorphic_linear(std::complex<double> a) {
    Mat42 l;
    l << 1.0, 0.0,
         0.0, 1.0,
         a.real(), -a.imag(),
         a.imag(), a.real();
    return l;
}

Vec4 perturbation_at(const Perturbation& p, double t, double f) {
    return Vec4(0.0, 0.0, p.epsilon * std::sin(p.m_theta * t), p.epsilon * std::cos(p.m_phi * f));
}

}  // namespace

ImmersedSurface complex_line(int n_theta, int n_phi) {
    return holomorphic_graph(n_theta, n_phi, 0.0);
}

ImmersedSurface holomorphic_graph(int n_theta, int n_phi, std::complex<double> a,
                                  std::complex<double> b) {
    const Vec4 offset(0.0, 0.0, b.real(), b.imag());
    return sample_surface(n_theta, n_phi, holomorphic_linear(a),
                          [offset](double, double) { return offset; });
}

ImmersedSurface conj_graph(int n_theta, int n_phi, double c) {
    Mat42 l;
    l << 1.0, 0.0,
         0.0, 1.0,
         c, 0.0,
         0.0, -c;
    return sample_surface(n_theta, n_phi, l, zero_part);
}

ImmersedSurface perturbed_graph(int n_theta, int n_phi, double c, const Perturbation& p) {
    ImmersedSurface s = conj_graph(n_theta, n_phi, c);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            s.periodic_part[s.shape().index(i, j)] = perturbation_at(p, s.theta(i), s.phi(j));
    return s;
}

ImmersedSurface perturbed_holomorphic_graph(int n_theta, int n_phi, std::complex<double> a,
                                            const Perturbation& p) {
    return sample_surface(n_theta, n_phi, holomorphic_linear(a),
                          [p](double t, double f) { return perturbation_at(p, t, f); });
}

ImmersedSurface lagrangian_torus(int n_theta, int n_phi, double r) {
    return sample_surface(n_theta, n_phi, Mat42::Zero(), [r](double t, double f) {
        return Vec4(r * std::cos(t), r * std::sin(t), r * std::cos(f), r * std::sin(f));
    });
}

ImmersedSurface round_torus(int n_theta, int n_phi, double a, double b) {
    return sample_surface(n_theta, n_phi, Mat42::Zero(), [a, b](double t, double f) {
        const double rho = a + b * std::cos(f);
        return Vec4(rho * std::cos(t), rho * std::sin(t), b * std::sin(f), 0.0);
    });
}

ImmersedSurface clifford_torus(int n_theta, int n_phi, double r1, double r2) {
    return sample_surface(n_theta, n_phi, Mat42::Zero(), [r1, r2](double t, double f) {
        return Vec4(r1 * std::cos(t), r1 * std::sin(t), r2 * std::cos(f), r2 * std::sin(f));
    });
}

}  // namespace kahlab
