// SPDX-License-Identifier: Apache-2.0
#include "nvsil/dipole_radiation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nvsil {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double unit_tolerance = 1e-12;

double wrap_azimuth(double phi)
{
    double wrapped = std::fmod(phi, two_pi);
    if (wrapped < 0.0)
        wrapped += two_pi;
    // fmod of a value just below a multiple of 2 pi can round up to 2 pi
    if (wrapped >= two_pi)
        wrapped = 0.0;
    return wrapped;
}

} // namespace

Direction::Direction(double theta, double phi)
{
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw std::invalid_argument("Direction: theta must lie in [0, pi], got " + std::to_string(theta));
    if (!std::isfinite(phi))
        throw std::invalid_argument("Direction: phi must be finite");
    theta_ = theta;
    phi_ = wrap_azimuth(phi);
}

Direction Direction::from_vector(const Vec3& k)
{
    const double n = k.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("Direction::from_vector: zero or non-finite vector");
    const double cos_theta = std::clamp(k.z() / n, -1.0, 1.0);
    return Direction{std::acos(cos_theta), std::atan2(k.y(), k.x())};
}

Vec3 Direction::unit_vector() const
{
    const double st = std::sin(theta_);
    return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
}

DipoleAxis::DipoleAxis(const Vec3& v)
    : axis_{v}
{
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > unit_tolerance)
        throw std::invalid_argument("DipoleAxis: vector must have unit norm (|v| = "
            + std::to_string(v.norm()) + ")");
}

DipoleAxis DipoleAxis::normalized(const Vec3& v)
{
    const double n = v.norm();
    if (!(n > 1e-300) || !std::isfinite(n))
        throw std::invalid_argument("DipoleAxis::normalized: zero or non-finite vector");
    return DipoleAxis{v / n};
}

namespace {

SpIntensity intensity_sp(const Vec3& k, double k_phi, const DipoleAxis& dipole, PolarizationSplit split)
{
    const Vec3& d = dipole.vector();
    const double kd = k.dot(d);
    const double total = dipole_peak * std::max(0.0, 1.0 - kd * kd);

    if (split == PolarizationSplit::DipoleAzimuth) {
        const double dipole_phi = (d.x() == 0.0 && d.y() == 0.0) ? 0.0 : std::atan2(d.y(), d.x());
        const double rel = k_phi - dipole_phi;
        const double s2 = std::sin(rel) * std::sin(rel);
        return {total * s2, total * (1.0 - s2)};
    }

    const Vec3 z_cross_k{-k.y(), k.x(), 0.0};
    const double transverse = z_cross_k.norm();
    const Vec3 s_hat = transverse > 1e-15 ? Vec3{z_cross_k / transverse} : Vec3{0.0, 1.0, 0.0};
    const Vec3 p_hat = s_hat.cross(k);
    const double ds = d.dot(s_hat);
    const double dp = d.dot(p_hat);
    // ds^2 + dp^2 = 1 - (k.d)^2 up to rounding; keep the total exact
    const double norm = ds * ds + dp * dp;
    if (norm <= 0.0)
        return {};
    return {total * ds * ds / norm, total * dp * dp / norm};
}

} // namespace

SpIntensity dipole_intensity_sp(const Vec3& k, const DipoleAxis& dipole, PolarizationSplit split)
{
    return intensity_sp(k, std::atan2(k.y(), k.x()), dipole, split);
}

SpIntensity dipole_intensity_sp(const Direction& direction, const DipoleAxis& dipole, PolarizationSplit split)
{
    return intensity_sp(direction.unit_vector(), direction.phi(), dipole, split);
}

EmitterModel make_nv_emitter(SurfaceOrientation surface, int nv_axis_index, double strain_azimuth)
{
    if (surface != SurfaceOrientation::Cubic100)
        throw std::invalid_argument("make_nv_emitter: only [100] surfaces are supported");
    if (nv_axis_index < 0 || nv_axis_index >= nv_orientation_count)
        throw std::invalid_argument("make_nv_emitter: nv_axis_index must be in [0, 3], got "
            + std::to_string(nv_axis_index));
    if (!std::isfinite(strain_azimuth))
        throw std::invalid_argument("make_nv_emitter: strain_azimuth must be finite");

    // [111], [-1-11], [1-11], [-111]
    static constexpr double signs[nv_orientation_count][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    const Vec3 n = Vec3{signs[nv_axis_index][0], signs[nv_axis_index][1], 1.0}.normalized();

    const Vec3 x{1.0, 0.0, 0.0};
    const Vec3 e1 = (x - x.dot(n) * n).normalized();
    const Vec3 e2 = n.cross(e1);

    const double psi = wrap_azimuth(strain_azimuth);
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    return EmitterModel{
        .nv_axis = n,
        .strain_azimuth = psi,
        .dipole_pair = {DipoleAxis::normalized(c * e1 + s * e2), DipoleAxis::normalized(-s * e1 + c * e2)},
    };
}

SpIntensity pair_intensity_sp(const Vec3& k, const EmitterModel& emitter, PolarizationSplit split)
{
    const SpIntensity a = dipole_intensity_sp(k, emitter.dipole_pair[0], split);
    const SpIntensity b = dipole_intensity_sp(k, emitter.dipole_pair[1], split);
    return {0.5 * (a.s + b.s), 0.5 * (a.p + b.p)};
}

SpIntensity pair_intensity_sp(const Direction& direction, const EmitterModel& emitter, PolarizationSplit split)
{
    const SpIntensity a = dipole_intensity_sp(direction, emitter.dipole_pair[0], split);
    const SpIntensity b = dipole_intensity_sp(direction, emitter.dipole_pair[1], split);
    return {0.5 * (a.s + b.s), 0.5 * (a.p + b.p)};
}

} // namespace nvsil
