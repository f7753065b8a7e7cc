// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Fraction of an emitter's total radiated power that leaves the diamond
// inside the acceptance cone of the collection objective:
//
//   eta = int_0^theta_m int_0^2pi [I_s T_s + I_p T_p] sin(theta) dphi dtheta
//
// evaluated either by tensor-product quadrature (Gauss-Legendre in theta,
// trapezoid in phi) or by Monte Carlo ray sampling. Only light emitted
// towards the exit surface (theta < pi/2) can be collected.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nvsil/dipole_radiation.hpp"
#include "nvsil/interface_optics.hpp"

namespace nvsil {

struct QuadratureConfig {
    int n_theta = 128;
    int n_phi = 256;
    double target_rel_tol = 1e-6;

    /// Throws std::invalid_argument unless n_theta, n_phi >= 8 and
    /// target_rel_tol > 0.
    void validate() const;
};

struct MonteCarloConfig {
    std::uint64_t n_rays = 1'000'000;
    std::uint64_t seed = 0;
    /// Rays are split across this many independent substreams, each run on
    /// its own thread. Results are reproducible for a fixed
    /// (seed, partitions) pair.
    unsigned partitions = 1;

    static constexpr std::uint64_t min_rays = 10'000;
    void validate() const;
};

enum class EfficiencyMethod { Quadrature, MonteCarlo };

enum class EmitterAveraging {
    SingleEmitter,
    /// Mean over the four <111> NV axes below a [100] surface and over
    /// uniformly spaced strain azimuths.
    Nv100Averaged,
};

struct EfficiencyConfig {
    Geometry geometry = Geometry::Planar;
    double n_diamond = InterfaceConfig::default_n_diamond;
    double n_collection = InterfaceConfig::default_n_collection;
    double na = 0.0;
    double theta_max = 0.0;
    EmitterAveraging averaging = EmitterAveraging::SingleEmitter;
    int n_strain_samples = 1;
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence;
    std::optional<QuadratureConfig> quadrature;
    std::optional<MonteCarloConfig> monte_carlo;
};

struct EfficiencyResult {
    double eta = 0.0;
    EfficiencyMethod method = EfficiencyMethod::Quadrature;
    /// Monte Carlo only.
    std::optional<double> std_error;
    /// Averaged quadrature only: max - min of the per-emitter efficiencies.
    std::optional<double> emitter_spread;
    EfficiencyConfig config;
};

struct CurveSample {
    double na = 0.0;
    double eta_planar = 0.0;
    double eta_sil = 0.0;
    /// eta_sil / eta_planar; absent when eta_planar == 0.
    std::optional<double> ratio;
};

struct EfficiencyCurve {
    std::vector<CurveSample> samples;
};

//---------------------------------------------------------------------------//
// Pattern-level integrators. These take the emission pattern and the
// interface transmission as callables so that test patterns (isotropic,
// index-matched, ...) can be integrated with the same machinery.

struct RadiationPattern {
    /// Intensity per steradian for a unit emission direction.
    std::function<SpIntensity(const Vec3&)> intensity;
    /// Upper bound on intensity(k).total() over the sphere.
    double peak = dipole_peak;
    /// Integral of the pattern over the full sphere.
    double total_power = 1.0;
};

using TransmissionModel = std::function<SpTransmittance(double theta)>;

RadiationPattern pair_pattern(const EmitterModel& emitter, PolarizationSplit split);
TransmissionModel interface_transmission(const InterfaceConfig& config);

/// Collected power for theta in [0, theta_max], theta_max in (0, pi/2].
double integrate_collected(const RadiationPattern& pattern, const TransmissionModel& transmission,
    double theta_max, const QuadratureConfig& quad);

struct MonteCarloEstimate {
    double eta = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of the collected power for an equal-weight mixture
/// of patterns. Each ray picks a mixture component, draws its direction by
/// rejection against the component's peak, is assigned s or p polarization
/// with probability I_s / (I_s + I_p) and survives the interface with
/// probability T(theta, polarization). All components must share the same
/// total_power.
MonteCarloEstimate sample_collected(std::span<const RadiationPattern> patterns,
    const TransmissionModel& transmission, double theta_max, const MonteCarloConfig& mc);

//---------------------------------------------------------------------------//
// Emitter-level efficiencies.

EfficiencyResult efficiency(const EmitterModel& emitter, const InterfaceConfig& interface,
    const CollectionOptics& optics, const QuadratureConfig& quad = {},
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

inline constexpr int default_strain_samples = 16;

/// Mean efficiency over the four NV orientations of a [100] sample and
/// n_strain_samples strain azimuths 2 pi k / n_strain_samples.
EfficiencyResult efficiency_100_averaged(const InterfaceConfig& interface, const CollectionOptics& optics,
    const QuadratureConfig& quad = {}, int n_strain_samples = default_strain_samples,
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

EfficiencyResult efficiency_monte_carlo(const EmitterModel& emitter, const InterfaceConfig& interface,
    const CollectionOptics& optics, const MonteCarloConfig& mc,
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

/// Monte Carlo over the same emitter ensemble as efficiency_100_averaged.
EfficiencyResult efficiency_monte_carlo_100_averaged(const InterfaceConfig& interface,
    const CollectionOptics& optics, const MonteCarloConfig& mc, int n_strain_samples = default_strain_samples,
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

/// Averaged planar and SIL efficiencies at `steps` evenly spaced apertures
/// from na_min to na_max inclusive.
EfficiencyCurve sweep_na(const InterfaceConfig& planar, const InterfaceConfig& sil, double na_min,
    double na_max, int steps, const QuadratureConfig& quad = {}, int n_strain_samples = default_strain_samples,
    PolarizationSplit split = PolarizationSplit::PlaneOfIncidence);

} // namespace nvsil
