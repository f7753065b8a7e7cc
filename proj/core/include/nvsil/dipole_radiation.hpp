// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Far-field emission of electric dipoles below a surface.
//
// Frame: z is the surface normal / optical axis pointing out of the diamond,
// x and y span the surface. Emission intensities are normalized so that the
// total power radiated into the full sphere is 1.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace nvsil {

using Vec3 = Eigen::Vector3d;

/// Peak value of a normalized dipole pattern, 3/(8 pi).
inline constexpr double dipole_peak = 3.0 / (8.0 * std::numbers::pi);

/// Emission direction: polar angle from +z and azimuth from +x.
class Direction {
public:
    /// Throws std::invalid_argument unless theta is in [0, pi]; phi is
    /// wrapped into [0, 2 pi).
    Direction(double theta, double phi);

    static Direction from_vector(const Vec3& k);

    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] double phi() const { return phi_; }
    [[nodiscard]] Vec3 unit_vector() const;

private:
    double theta_;
    double phi_;
};

/// Unit vector along a transition dipole.
class DipoleAxis {
public:
    /// Throws std::invalid_argument if |v| differs from 1 by more than 1e-12.
    explicit DipoleAxis(const Vec3& v);

    /// Normalizes v first; throws if v is (numerically) zero.
    static DipoleAxis normalized(const Vec3& v);

    [[nodiscard]] const Vec3& vector() const { return axis_; }

private:
    Vec3 axis_;
};

/// Power per steradian in the s and p polarizations.
struct SpIntensity {
    double s = 0.0;
    double p = 0.0;

    [[nodiscard]] double total() const { return s + p; }
};

/// How the emitted power in a direction is divided between s and p.
///
/// PlaneOfIncidence projects the dipole onto s = z x k / |z x k| and
/// p = s x k, the basis in which Fresnel coefficients are defined. At the
/// poles s is taken as +y.
///
/// DipoleAzimuth keeps the closed-form in-plane-dipole split
/// s : p = sin^2(phi') : cos^2(phi'), where phi' is the emission azimuth
/// measured from the projection of the dipole onto the surface (phi' = phi for
/// a dipole with no in-plane component).
///
/// Both give the same total (3/8 pi)(1 - (k.d)^2).
enum class PolarizationSplit { PlaneOfIncidence, DipoleAzimuth };

SpIntensity dipole_intensity_sp(const Direction& direction, const DipoleAxis& dipole,
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

/// Miller-index tag of the polished surface. Only [100] is modeled.
enum class SurfaceOrientation { Cubic100 };

/// NV centre: symmetry axis plus the two orthogonal transition dipoles in the
/// plane perpendicular to it.
struct EmitterModel {
    Vec3 nv_axis;
    double strain_azimuth = 0.0;
    std::array<DipoleAxis, 2> dipole_pair;
};

/// Number of distinct <111> NV axes.
inline constexpr int nv_orientation_count = 4;

/// Builds the emitter for NV axis `nv_axis_index`
/// (0: [111], 1: [-1-11], 2: [1-11], 3: [-111]) below a [100] surface.
///
/// The reference dipole pair is e1 = normalize(x - (x.n) n), e2 = n x e1;
/// the returned pair is that pair rotated about n by strain_azimuth.
/// Throws std::invalid_argument for an index outside [0, 3] or a
/// non-finite azimuth.
EmitterModel make_nv_emitter(SurfaceOrientation surface, int nv_axis_index, double strain_azimuth);

/// Mean of dipole_intensity_sp over the emitter's two dipoles.
SpIntensity pair_intensity_sp(const Direction& direction, const EmitterModel& emitter,
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

// Vector-direction overloads used by the integrators.
SpIntensity dipole_intensity_sp(const Vec3& k, const DipoleAxis& dipole, PolarizationSplit split);
SpIntensity pair_intensity_sp(const Vec3& k, const EmitterModel& emitter, PolarizationSplit split);

} // namespace nvsil
