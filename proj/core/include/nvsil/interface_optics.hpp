// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Refraction and power transmission at the diamond / collection-medium
// boundary.
//---------------------------------------------------------------------------//
#pragma once

#include <optional>
#include <string_view>

namespace nvsil {

enum class Geometry { Planar, HemisphericalSIL };

std::string_view to_string(Geometry g);
/// Accepts "planar" and "sil"; throws std::invalid_argument otherwise.
Geometry parse_geometry(std::string_view name);

enum class Polarization { S, P };

/// Refractive indices on both sides of the exit surface. Requires
/// n_d > n_c > 0.
class InterfaceConfig {
public:
    static constexpr double default_n_diamond = 2.4;
    static constexpr double default_n_collection = 1.0;

    explicit InterfaceConfig(Geometry geometry,
        double n_diamond = default_n_diamond,
        double n_collection = default_n_collection);

    [[nodiscard]] double n_diamond() const { return n_d_; }
    [[nodiscard]] double n_collection() const { return n_c_; }
    [[nodiscard]] Geometry geometry() const { return geometry_; }

    /// arcsin(n_c / n_d).
    [[nodiscard]] double critical_angle() const;

private:
    double n_d_;
    double n_c_;
    Geometry geometry_;
};

/// Numerical aperture of the collection objective. 0 < NA; the upper bound
/// NA <= n_c is checked against an interface in max_internal_angle.
class CollectionOptics {
public:
    explicit CollectionOptics(double na);
    [[nodiscard]] double na() const { return na_; }

private:
    double na_;
};

/// Angle of the refracted ray in the collection medium for a planar
/// interface, or std::nullopt when the ray is totally internally reflected
/// (theta_i >= critical angle).
std::optional<double> refraction_angle(double theta_i, const InterfaceConfig& config);

/// Half-angle, inside the diamond, of the cone accepted by the objective:
/// arcsin(NA / n_d) for a planar surface, arcsin(NA / n_c) through a SIL.
double max_internal_angle(const CollectionOptics& optics, const InterfaceConfig& config);

/// 4 n_c n_d / (n_c + n_d)^2, the normal-incidence power transmittance.
double normal_incidence_transmittance(double n_diamond, double n_collection);

/// Power transmittance for a ray leaving the diamond at internal angle
/// theta_i in [0, pi/2]. Through a SIL every ray meets the curved surface at
/// normal incidence, so T is the normal-incidence value for both
/// polarizations.
double transmittance(double theta_i, Polarization pol, const InterfaceConfig& config);

struct SpTransmittance {
    double s = 0.0;
    double p = 0.0;
};

SpTransmittance transmittance_sp(double theta_i, const InterfaceConfig& config);

} // namespace nvsil
