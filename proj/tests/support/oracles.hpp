// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Independent reference computations used by the tests. Nothing here calls
// into the library's integrators, Fresnel code or dipole patterns.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace nvsil::oracle {

inline constexpr double pi = std::numbers::pi;

/// Closed-form s/p intensities of a dipole lying in the surface plane, phi
/// measured from the dipole axis.
inline std::pair<double, double> in_plane_dipole_sp(double theta, double phi)
{
    const double c = 3.0 / (8.0 * pi);
    const double common = 1.0 - std::sin(theta) * std::sin(theta) * std::cos(phi) * std::cos(phi);
    return {c * common * std::sin(phi) * std::sin(phi), c * common * std::cos(phi) * std::cos(phi)};
}

/// Total intensity (3/8 pi)(1 - (k.d)^2) for unit k, d given as components.
inline double dipole_total(double kx, double ky, double kz, double dx, double dy, double dz)
{
    const double kd = kx * dx + ky * dy + kz * dz;
    return 3.0 / (8.0 * pi) * (1.0 - kd * kd);
}

/// int_0^theta_max int_0^2pi f(theta, phi) sin(theta) dphi dtheta with
/// composite Simpson in theta (n_theta even) and the trapezoid rule in phi.
template <class F>
double cone_integral(F&& f, double theta_max, int n_theta = 2000, int n_phi = 720)
{
    const double h = theta_max / n_theta;
    const double dphi = 2.0 * pi / n_phi;
    double total = 0.0;
    for (int i = 0; i <= n_theta; ++i) {
        const double theta = (i == n_theta) ? theta_max : h * i;
        const double w = (i == 0 || i == n_theta) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j)
            ring += f(theta, dphi * j);
        total += w * ring * dphi * std::sin(theta);
    }
    return total * h / 3.0;
}

template <class F>
double sphere_integral(F&& f, int n_theta = 2000, int n_phi = 720)
{
    return cone_integral(std::forward<F>(f), pi, n_theta, n_phi);
}

/// Fresnel power transmittance through the reflectance route,
/// T = 1 - |r|^2, with amplitude reflection coefficients
/// r_s = (n1 cos i - n2 cos t) / (n1 cos i + n2 cos t),
/// r_p = (n2 cos i - n1 cos t) / (n2 cos i + n1 cos t).
inline std::pair<double, double> fresnel_via_reflectance(double theta_i, double n1, double n2)
{
    const double s = n1 / n2 * std::sin(theta_i);
    if (s >= 1.0)
        return {0.0, 0.0};
    const double ci = std::cos(theta_i);
    const double ct = std::sqrt(1.0 - s * s);
    const double rs = (n1 * ci - n2 * ct) / (n1 * ci + n2 * ct);
    const double rp = (n2 * ci - n1 * ct) / (n2 * ci + n1 * ct);
    return {1.0 - rs * rs, 1.0 - rp * rp};
}

/// Uniformly distributed unit vector as (x, y, z).
struct UnitVector {
    double x, y, z;
};

template <class Rng>
UnitVector random_unit_vector(Rng& rng)
{
    std::normal_distribution<double> n{0.0, 1.0};
    for (;;) {
        const double x = n(rng), y = n(rng), z = n(rng);
        const double r = std::sqrt(x * x + y * y + z * z);
        if (r > 1e-6)
            return {x / r, y / r, z / r};
    }
}

} // namespace nvsil::oracle
