#pragma once
/**
 * @file analytic.hpp
 * @brief Closed-form moduli used as references: rectangles, circular-arc
 * quadrilaterals of Type A and Type B, plus the cross-ratio, the complete
 * elliptic integral K and the Grötzsch ring modulus.
 */

#include <cmath>
#include <complex>
#include <numbers>

#include "rwos/errors.hpp"

namespace rwos {

/// Angles of the marked points e^{ia}, e^{ib}, e^{ic}, 1 on the unit circle.
struct ArcQuadAngles {
    double a = 0.0, b = 0.0, c = 0.0;

    void validate() const {
        if (!(0.0 < a && a < b && b < c && c < 2.0 * std::numbers::pi))
            throw SpecError("angles must satisfy 0 < a < b < c < 2pi");
    }
};

/// (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3)).
inline std::complex<double> cross_ratio(std::complex<double> z1, std::complex<double> z2,
                                        std::complex<double> z3, std::complex<double> z4) {
    if (z1 == z2 || z1 == z3 || z1 == z4 || z2 == z3 || z2 == z4 || z3 == z4)
        throw SpecError("cross-ratio needs four distinct points");
    return (z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3));
}

/// u = sin(b/2) sin((c-a)/2) / (sin(a/2) sin((c-b)/2)), which equals
/// |cross_ratio(1, e^{ic}, e^{ib}, e^{ia})|.
inline double unit_circle_u(const ArcQuadAngles& q) {
    q.validate();
    return std::sin(0.5 * q.b) * std::sin(0.5 * (q.c - q.a)) /
           (std::sin(0.5 * q.a) * std::sin(0.5 * (q.c - q.b)));
}

/// Modulus of the Type A quadrilateral: half the modulus of the annulus
/// with radii 1 and t, t = 2u - 1 + 2 sqrt(u^2 - u).
inline double type_a_modulus(const ArcQuadAngles& q) {
    const double u = unit_circle_u(q);
    if (!(u > 1.0)) throw NumericError("type A modulus needs u > 1");
    const double t = 2.0 * u - 1.0 + 2.0 * std::sqrt(u * u - u);
    return std::numbers::pi / std::log(t);
}

/// Arithmetic-geometric mean, iterated until the terms agree to 1e-15.
inline double agm(double x, double y) {
    if (!(x >= 0.0 && y >= 0.0)) throw NumericError("AGM needs nonnegative arguments");
    for (int i = 0; i < 64 && std::abs(x - y) > 1e-15 * std::abs(x); ++i) {
        const double m = 0.5 * (x + y);
        y = std::sqrt(x * y);
        x = m;
    }
    return x;
}

/// Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k')).
inline double elliptic_K(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw NumericError("elliptic_K needs 0 <= k < 1");
    if (k == 0.0) return 0.5 * std::numbers::pi;
    return 0.5 * std::numbers::pi / agm(1.0, std::sqrt((1.0 - k) * (1.0 + k)));
}

/// Complementary integral K'(k) = K(sqrt(1 - k^2)) = pi / (2 AGM(1, k)),
/// accurate also for small k where sqrt(1 - k^2) rounds to 1.
inline double elliptic_K_complement(double k) {
    if (!(k > 0.0 && k <= 1.0)) throw NumericError("elliptic_K_complement needs 0 < k <= 1");
    return 0.5 * std::numbers::pi / agm(1.0, k);
}

/// Grötzsch ring modulus mu(r) = (pi/2) K'(r) / K(r), 0 < r < 1.
inline double grotzsch_mu(double r) {
    if (!(r > 0.0 && r < 1.0)) throw NumericError("grotzsch_mu needs 0 < r < 1");
    return 0.5 * std::numbers::pi * elliptic_K_complement(r) / elliptic_K(r);
}

/// Capacity of the Teichmüller ring with parameter t > 0.
inline double teichmuller_capacity(double t) {
    if (!(t > 0.0)) throw NumericError("Teichmüller capacity needs t > 0");
    return std::numbers::pi / grotzsch_mu(1.0 / std::sqrt(1.0 + t));
}

/// Modulus of the Type B quadrilateral (unit disk): tau(u - 1) / 2.
inline double type_b_modulus(const ArcQuadAngles& q) {
    const double u = unit_circle_u(q);
    if (!(u > 1.0)) throw NumericError("type B modulus needs u > 1");
    return 0.5 * teichmuller_capacity(u - 1.0);
}

/// The rectangle (0,1) x (0,h) with its standard marking has modulus h.
inline double rectangle_modulus(double h) {
    if (!(h > 0.0)) throw SpecError("rectangle height must be positive");
    return h;
}

}  // namespace rwos
