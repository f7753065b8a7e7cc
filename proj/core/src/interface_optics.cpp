// SPDX-License-Identifier: Apache-2.0
#include "nvsil/interface_optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nvsil {

namespace {

void check_internal_angle(double theta_i, const char* who)
{
    if (!(theta_i >= 0.0 && theta_i <= 0.5 * std::numbers::pi))
        throw std::invalid_argument(std::string(who) + ": theta_i must lie in [0, pi/2], got "
            + std::to_string(theta_i));
}

} // namespace

std::string_view to_string(Geometry g)
{
    return g == Geometry::Planar ? "planar" : "sil";
}

Geometry parse_geometry(std::string_view name)
{
    if (name == "planar")
        return Geometry::Planar;
    if (name == "sil")
        return Geometry::HemisphericalSIL;
    throw std::invalid_argument("unknown geometry '" + std::string(name) + "' (expected planar or sil)");
}

InterfaceConfig::InterfaceConfig(Geometry geometry, double n_diamond, double n_collection)
    : n_d_{n_diamond}
    , n_c_{n_collection}
    , geometry_{geometry}
{
    if (!std::isfinite(n_diamond) || !std::isfinite(n_collection) || !(n_collection > 0.0)
        || !(n_diamond > n_collection))
        throw std::invalid_argument("InterfaceConfig: require n_d > n_c > 0 (n_d = "
            + std::to_string(n_diamond) + ", n_c = " + std::to_string(n_collection) + ")");
}

double InterfaceConfig::critical_angle() const
{
    return std::asin(n_c_ / n_d_);
}

CollectionOptics::CollectionOptics(double na)
    : na_{na}
{
    if (!(na > 0.0) || !std::isfinite(na))
        throw std::invalid_argument("CollectionOptics: NA must be positive, got " + std::to_string(na));
}

std::optional<double> refraction_angle(double theta_i, const InterfaceConfig& config)
{
    check_internal_angle(theta_i, "refraction_angle");
    if (config.geometry() != Geometry::Planar)
        throw std::invalid_argument("refraction_angle: defined for the planar geometry only");
    const double sin_c = config.n_diamond() / config.n_collection() * std::sin(theta_i);
    if (theta_i >= config.critical_angle() || sin_c >= 1.0)
        return std::nullopt;
    return std::asin(sin_c);
}

double max_internal_angle(const CollectionOptics& optics, const InterfaceConfig& config)
{
    if (optics.na() > config.n_collection())
        throw std::invalid_argument("max_internal_angle: NA " + std::to_string(optics.na())
            + " exceeds the collection-medium index " + std::to_string(config.n_collection()));
    const double n = config.geometry() == Geometry::Planar ? config.n_diamond() : config.n_collection();
    return std::asin(optics.na() / n);
}

double normal_incidence_transmittance(double n_diamond, double n_collection)
{
    const double sum = n_diamond + n_collection;
    return 4.0 * n_diamond * n_collection / (sum * sum);
}

SpTransmittance transmittance_sp(double theta_i, const InterfaceConfig& config)
{
    check_internal_angle(theta_i, "transmittance");
    const double nd = config.n_diamond();
    const double nc = config.n_collection();

    if (config.geometry() == Geometry::HemisphericalSIL) {
        const double t = normal_incidence_transmittance(nd, nc);
        return {t, t};
    }

    const auto theta_c = refraction_angle(theta_i, config);
    if (!theta_c)
        return {0.0, 0.0};

    const double ci = std::cos(theta_i);
    const double cc = std::cos(*theta_c);
    // Power transmittance = (n_c cos theta_c) / (n_d cos theta_i) * |t|^2
    const double factor = (nc * cc) / (nd * ci);
    const double ts = 2.0 * nd * ci / (nd * ci + nc * cc);
    const double tp = 2.0 * nd * ci / (nd * cc + nc * ci);
    return {factor * ts * ts, factor * tp * tp};
}

double transmittance(double theta_i, Polarization pol, const InterfaceConfig& config)
{
    const SpTransmittance t = transmittance_sp(theta_i, config);
    return pol == Polarization::S ? t.s : t.p;
}

} // namespace nvsil
