// SPDX-License-Identifier: Apache-2.0
#include "nvsil/collection_efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "nvsil/quadrature.hpp"
#include "nvsil/random.hpp"

namespace nvsil {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_theta_max(double theta_max)
{
    if (!(theta_max >= 0.0 && theta_max <= 0.5 * std::numbers::pi))
        throw std::invalid_argument("collection cone half-angle must lie in [0, pi/2], got "
            + std::to_string(theta_max));
}

void check_strain_samples(int n)
{
    if (n < 1)
        throw std::invalid_argument("n_strain_samples must be >= 1, got " + std::to_string(n));
}

std::vector<EmitterModel> nv100_ensemble(int n_strain_samples)
{
    std::vector<EmitterModel> emitters;
    emitters.reserve(static_cast<std::size_t>(nv_orientation_count * n_strain_samples));
    for (int axis = 0; axis < nv_orientation_count; ++axis)
        for (int k = 0; k < n_strain_samples; ++k)
            emitters.push_back(make_nv_emitter(SurfaceOrientation::Cubic100, axis,
                two_pi * static_cast<double>(k) / static_cast<double>(n_strain_samples)));
    return emitters;
}

EfficiencyConfig base_config(const InterfaceConfig& interface, const CollectionOptics& optics,
    double theta_max, PolarizationSplit split)
{
    EfficiencyConfig c;
    c.geometry = interface.geometry();
    c.n_diamond = interface.n_diamond();
    c.n_collection = interface.n_collection();
    c.na = optics.na();
    c.theta_max = theta_max;
    c.split = split;
    return c;
}

std::uint64_t sample_partition(std::span<const RadiationPattern> patterns,
    const TransmissionModel& transmission, double cos_theta_max, double theta_max, std::uint64_t rays,
    Engine rng)
{
    const double n_components = static_cast<double>(patterns.size());
    std::uint64_t hits = 0;
    for (std::uint64_t r = 0; r < rays; ++r) {
        std::size_t component = 0;
        if (patterns.size() > 1)
            component = std::min(patterns.size() - 1, static_cast<std::size_t>(uniform01(rng) * n_components));
        const RadiationPattern& pattern = patterns[component];

        Vec3 k;
        SpIntensity intensity;
        for (;;) {
            const double z = 2.0 * uniform01(rng) - 1.0;
            const double phi = two_pi * uniform01(rng);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            k = {rho * std::cos(phi), rho * std::sin(phi), z};
            intensity = pattern.intensity(k);
            if (uniform01(rng) * pattern.peak < intensity.total())
                break;
        }

        if (k.z() < cos_theta_max)
            continue;
        const double theta = std::min(std::acos(std::clamp(k.z(), -1.0, 1.0)), theta_max);
        const SpTransmittance t = transmission(theta);
        const bool is_s = uniform01(rng) * intensity.total() < intensity.s;
        if (bernoulli(rng, is_s ? t.s : t.p))
            ++hits;
    }
    return hits;
}

} // namespace

void QuadratureConfig::validate() const
{
    if (n_theta < 8 || n_phi < 8)
        throw std::invalid_argument("QuadratureConfig: n_theta and n_phi must be >= 8");
    if (!(target_rel_tol > 0.0))
        throw std::invalid_argument("QuadratureConfig: target_rel_tol must be positive");
}

void MonteCarloConfig::validate() const
{
    if (n_rays < min_rays)
        throw std::invalid_argument("MonteCarloConfig: n_rays must be >= " + std::to_string(min_rays)
            + ", got " + std::to_string(n_rays));
    if (partitions == 0)
        throw std::invalid_argument("MonteCarloConfig: partitions must be >= 1");
}

RadiationPattern pair_pattern(const EmitterModel& emitter, PolarizationSplit split)
{
    return RadiationPattern{
        .intensity = [emitter, split](const Vec3& k) { return pair_intensity_sp(k, emitter, split); },
        .peak = dipole_peak,
        .total_power = 1.0,
    };
}

TransmissionModel interface_transmission(const InterfaceConfig& config)
{
    return [config](double theta) { return transmittance_sp(theta, config); };
}

double integrate_collected(const RadiationPattern& pattern, const TransmissionModel& transmission,
    double theta_max, const QuadratureConfig& quad)
{
    quad.validate();
    check_theta_max(theta_max);
    if (theta_max == 0.0)
        return 0.0;

    const QuadratureRule rule = gauss_legendre(static_cast<std::size_t>(quad.n_theta), 0.0, theta_max);
    const double dphi = two_pi / quad.n_phi;

    std::vector<double> cos_phi(static_cast<std::size_t>(quad.n_phi));
    std::vector<double> sin_phi(cos_phi.size());
    for (std::size_t j = 0; j < cos_phi.size(); ++j) {
        cos_phi[j] = std::cos(dphi * static_cast<double>(j));
        sin_phi[j] = std::sin(dphi * static_cast<double>(j));
    }

    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double theta = rule.nodes[i];
        const double st = std::sin(theta);
        const double ct = std::cos(theta);
        const SpTransmittance t = transmission(theta);
        double ring = 0.0;
        for (std::size_t j = 0; j < cos_phi.size(); ++j) {
            const SpIntensity in = pattern.intensity(Vec3{st * cos_phi[j], st * sin_phi[j], ct});
            ring += in.s * t.s + in.p * t.p;
        }
        total += rule.weights[i] * st * ring * dphi;
    }
    return total;
}

MonteCarloEstimate sample_collected(std::span<const RadiationPattern> patterns,
    const TransmissionModel& transmission, double theta_max, const MonteCarloConfig& mc)
{
    mc.validate();
    check_theta_max(theta_max);
    if (patterns.empty())
        throw std::invalid_argument("sample_collected: no patterns");
    const double total_power = patterns.front().total_power;
    for (const RadiationPattern& p : patterns) {
        if (!(p.peak > 0.0) || p.total_power != total_power)
            throw std::invalid_argument("sample_collected: patterns need positive peaks and equal total power");
    }

    const double cos_theta_max = std::cos(theta_max);
    const std::uint64_t parts = mc.partitions;
    std::vector<std::uint64_t> hits(parts, 0);
    auto run = [&](std::uint64_t part) {
        const std::uint64_t rays = mc.n_rays / parts + (part < mc.n_rays % parts ? 1 : 0);
        hits[part] = sample_partition(patterns, transmission, cos_theta_max, theta_max, rays,
            make_engine(mc.seed, part));
    };

    if (parts == 1) {
        run(0);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(parts);
        for (std::uint64_t part = 0; part < parts; ++part)
            workers.emplace_back(run, part);
    }

    std::uint64_t total_hits = 0;
    for (std::uint64_t h : hits)
        total_hits += h;
    const double n = static_cast<double>(mc.n_rays);
    const double fraction = static_cast<double>(total_hits) / n;
    return {
        .eta = fraction * total_power,
        .std_error = std::sqrt(fraction * (1.0 - fraction) / n) * total_power,
    };
}

EfficiencyResult efficiency(const EmitterModel& emitter, const InterfaceConfig& interface,
    const CollectionOptics& optics, const QuadratureConfig& quad, PolarizationSplit split)
{
    quad.validate();
    const double theta_max = max_internal_angle(optics, interface);
    EfficiencyResult result;
    result.method = EfficiencyMethod::Quadrature;
    result.config = base_config(interface, optics, theta_max, split);
    result.config.quadrature = quad;
    result.eta = integrate_collected(pair_pattern(emitter, split), interface_transmission(interface), theta_max, quad);
    return result;
}

EfficiencyResult efficiency_100_averaged(const InterfaceConfig& interface, const CollectionOptics& optics,
    const QuadratureConfig& quad, int n_strain_samples, PolarizationSplit split)
{
    quad.validate();
    check_strain_samples(n_strain_samples);
    const double theta_max = max_internal_angle(optics, interface);
    const TransmissionModel transmission = interface_transmission(interface);

    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::vector<EmitterModel> emitters = nv100_ensemble(n_strain_samples);
    for (const EmitterModel& emitter : emitters) {
        const double eta = integrate_collected(pair_pattern(emitter, split), transmission, theta_max, quad);
        sum += eta;
        lo = std::min(lo, eta);
        hi = std::max(hi, eta);
    }

    EfficiencyResult result;
    result.method = EfficiencyMethod::Quadrature;
    result.eta = sum / static_cast<double>(emitters.size());
    result.emitter_spread = hi - lo;
    result.config = base_config(interface, optics, theta_max, split);
    result.config.averaging = EmitterAveraging::Nv100Averaged;
    result.config.n_strain_samples = n_strain_samples;
    result.config.quadrature = quad;
    return result;
}

EfficiencyResult efficiency_monte_carlo(const EmitterModel& emitter, const InterfaceConfig& interface,
    const CollectionOptics& optics, const MonteCarloConfig& mc, PolarizationSplit split)
{
    const double theta_max = max_internal_angle(optics, interface);
    const RadiationPattern pattern = pair_pattern(emitter, split);
    const MonteCarloEstimate est = sample_collected(std::span{&pattern, 1}, interface_transmission(interface),
        theta_max, mc);

    EfficiencyResult result;
    result.method = EfficiencyMethod::MonteCarlo;
    result.eta = est.eta;
    result.std_error = est.std_error;
    result.config = base_config(interface, optics, theta_max, split);
    result.config.monte_carlo = mc;
    return result;
}

EfficiencyResult efficiency_monte_carlo_100_averaged(const InterfaceConfig& interface,
    const CollectionOptics& optics, const MonteCarloConfig& mc, int n_strain_samples, PolarizationSplit split)
{
    check_strain_samples(n_strain_samples);
    const double theta_max = max_internal_angle(optics, interface);
    std::vector<RadiationPattern> patterns;
    for (const EmitterModel& emitter : nv100_ensemble(n_strain_samples))
        patterns.push_back(pair_pattern(emitter, split));
    const MonteCarloEstimate est = sample_collected(patterns, interface_transmission(interface), theta_max, mc);

    EfficiencyResult result;
    result.method = EfficiencyMethod::MonteCarlo;
    result.eta = est.eta;
    result.std_error = est.std_error;
    result.config = base_config(interface, optics, theta_max, split);
    result.config.averaging = EmitterAveraging::Nv100Averaged;
    result.config.n_strain_samples = n_strain_samples;
    result.config.monte_carlo = mc;
    return result;
}

EfficiencyCurve sweep_na(const InterfaceConfig& planar, const InterfaceConfig& sil, double na_min,
    double na_max, int steps, const QuadratureConfig& quad, int n_strain_samples, PolarizationSplit split)
{
    if (planar.geometry() != Geometry::Planar || sil.geometry() != Geometry::HemisphericalSIL)
        throw std::invalid_argument("sweep_na: expected a planar and a SIL interface");
    if (steps < 2)
        throw std::invalid_argument("sweep_na: steps must be >= 2, got " + std::to_string(steps));
    const double na_limit = std::min(planar.n_collection(), sil.n_collection());
    if (!(na_min > 0.0 && na_min < na_max && na_max <= na_limit))
        throw std::invalid_argument("sweep_na: require 0 < na_min < na_max <= n_c");
    quad.validate();
    check_strain_samples(n_strain_samples);

    EfficiencyCurve curve;
    curve.samples.reserve(static_cast<std::size_t>(steps));
    const double step = (na_max - na_min) / (steps - 1);
    for (int i = 0; i < steps; ++i) {
        const double na = i == steps - 1 ? na_max : na_min + step * i;
        const CollectionOptics optics{na};
        CurveSample row;
        row.na = na;
        row.eta_planar = efficiency_100_averaged(planar, optics, quad, n_strain_samples, split).eta;
        row.eta_sil = efficiency_100_averaged(sil, optics, quad, n_strain_samples, split).eta;
        if (row.eta_planar > 0.0)
            row.ratio = row.eta_sil / row.eta_planar;
        curve.samples.push_back(row);
    }
    return curve;
}

} // namespace nvsil
