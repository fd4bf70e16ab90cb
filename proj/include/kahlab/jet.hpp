#pragma once

#include <cmath>

#include "kahlab/types.hpp"

namespace kahlab {

/// Second-order forward-mode jet in four variables: value, gradient and Hessian.
struct Jet2 {
    double value = 0.0;
    Vec4 grad = Vec4::Zero();
    Mat4 hess = Mat4::Zero();

    Jet2() = default;
    Jet2(double v) : value(v) {}  // NOLINT: implicit constants are intended
    Jet2(double v, const Vec4& g, const Mat4& h) : value(v), grad(g), hess(h) {}

    static Jet2 variable(double v, int index) {
        Jet2 j(v);
        j.grad[index] = 1.0;
        return j;
    }
};

// f(u) given f, f', f'' at u.value.
inline Jet2 chain(const Jet2& u, double f0, double f1, double f2) {
    return {f0, f1 * u.grad, f2 * u.grad * u.grad.transpose() + f1 * u.hess};
}

inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.grad, -a.hess}; }
inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.value * b.value, a.value * b.grad + b.value * a.grad,
            a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
                b.grad * a.grad.transpose()};
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double inv = 1.0 / b.value;
    return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 sin(const Jet2& u) {
    const double s = std::sin(u.value), c = std::cos(u.value);
    return chain(u, s, c, -s);
}
inline Jet2 cos(const Jet2& u) {
    const double s = std::sin(u.value), c = std::cos(u.value);
    return chain(u, c, -s, -c);
}
inline Jet2 tan(const Jet2& u) {
    const double t = std::tan(u.value), sec2 = 1.0 + t * t;
    return chain(u, t, sec2, 2.0 * t * sec2);
}
inline Jet2 exp(const Jet2& u) {
    const double e = std::exp(u.value);
    return chain(u, e, e, e);
}
inline Jet2 log(const Jet2& u) {
    const double inv = 1.0 / u.value;
    return chain(u, std::log(u.value), inv, -inv * inv);
}
inline Jet2 sqrt(const Jet2& u) {
    const double r = std::sqrt(u.value);
    return chain(u, r, 0.5 / r, -0.25 / (r * u.value));
}
inline Jet2 sinh(const Jet2& u) {
    const double s = std::sinh(u.value), c = std::cosh(u.value);
    return chain(u, s, c, s);
}
inline Jet2 cosh(const Jet2& u) {
    const double s = std::sinh(u.value), c = std::cosh(u.value);
    return chain(u, c, s, c);
}
inline Jet2 tanh(const Jet2& u) {
    const double t = std::tanh(u.value), d = 1.0 - t * t;
    return chain(u, t, d, -2.0 * t * d);
}
inline Jet2 pow(const Jet2& u, double k) {
    if (k == 0.0) return Jet2(1.0);
    const double v = u.value;
    return chain(u, std::pow(v, k), k * std::pow(v, k - 1.0),
                 k * (k - 1.0) * std::pow(v, k - 2.0));
}

}  // namespace kahlab
