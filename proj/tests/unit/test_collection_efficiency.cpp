// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "nvsil/collection_efficiency.hpp"
#include "oracles.hpp"

using namespace nvsil;

namespace {

constexpr double pi = std::numbers::pi;

// Values from an independent NumPy evaluation of the same integral
// (Gauss-Legendre 128 x trapezoid 256, plane-of-incidence s/p basis).
constexpr double reference_planar_085 = 0.026663570439421247;
constexpr double reference_sil_085 = 0.19649161758783207;

const InterfaceConfig planar{Geometry::Planar};
const InterfaceConfig sil{Geometry::HemisphericalSIL};

RadiationPattern isotropic_pattern()
{
    RadiationPattern p;
    p.intensity = [](const Vec3&) { return SpIntensity{1.0 / (8.0 * pi), 1.0 / (8.0 * pi)}; };
    p.peak = 1.0 / (4.0 * pi);
    p.total_power = 1.0;
    return p;
}

TransmissionModel lossless()
{
    return [](double) { return SpTransmittance{1.0, 1.0}; };
}

// s/p intensities of the NV pair written out directly from the projection
// onto s = z x k / |z x k| and p = s x k, then integrated by the Simpson
// oracle with the reflectance-route Fresnel oracle.
double oracle_pair_efficiency(const EmitterModel& e, double nd, double theta_max)
{
    const double c = 3.0 / (8.0 * pi);
    auto integrand = [&](double theta, double phi) {
        const double st = std::sin(theta), ct = std::cos(theta);
        const double k[3] = {st * std::cos(phi), st * std::sin(phi), ct};
        double s[3] = {0.0, 1.0, 0.0};
        if (st > 0.0)
            s[0] = -std::sin(phi), s[1] = std::cos(phi);
        const double p[3] = {s[1] * k[2] - s[2] * k[1], s[2] * k[0] - s[0] * k[2], s[0] * k[1] - s[1] * k[0]};
        double is = 0.0, ip = 0.0;
        for (const auto& axis : e.dipole_pair) {
            const Vec3& d = axis.vector();
            const double ds = d.x() * s[0] + d.y() * s[1] + d.z() * s[2];
            const double dp = d.x() * p[0] + d.y() * p[1] + d.z() * p[2];
            is += 0.5 * c * ds * ds;
            ip += 0.5 * c * dp * dp;
        }
        const auto [ts, tp] = oracle::fresnel_via_reflectance(theta, nd, 1.0);
        return is * ts + ip * tp;
    };
    return oracle::cone_integral(integrand, theta_max, 600, 360);
}

} // namespace

TEST_SUITE("collection_efficiency")
{
    TEST_CASE("configuration validation")
    {
        QuadratureConfig q;
        CHECK_NOTHROW(q.validate());
        q.n_theta = 7;
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);
        q = {};
        q.target_rel_tol = 0.0;
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);

        MonteCarloConfig mc;
        CHECK_NOTHROW(mc.validate());
        mc.n_rays = 9'999;
        CHECK_THROWS_AS(mc.validate(), std::invalid_argument);
        mc.n_rays = 100'000;
        mc.partitions = 0;
        CHECK_THROWS_AS(mc.validate(), std::invalid_argument);
    }

    TEST_CASE("isotropic emitter into a lossless hemisphere collects one half")
    {
        const RadiationPattern iso = isotropic_pattern();
        CHECK(integrate_collected(iso, lossless(), 0.5 * pi, {}) == doctest::Approx(0.5).epsilon(1e-12));
        // cap of half-angle a holds (1 - cos a) / 2
        CHECK(integrate_collected(iso, lossless(), 0.7, {}) == doctest::Approx(0.5 * (1.0 - std::cos(0.7))).epsilon(1e-12));

        MonteCarloConfig mc;
        mc.n_rays = 1'000'000;
        mc.seed = 5;
        const std::vector<RadiationPattern> patterns{iso};
        const MonteCarloEstimate est = sample_collected(patterns, lossless(), 0.5 * pi, mc);
        CHECK(std::abs(est.eta - 0.5) <= 3.0 * est.std_error);
        CHECK(est.std_error == doctest::Approx(std::sqrt(0.25 / 1e6)).epsilon(1e-2));
    }

    TEST_CASE("in-plane dipole, lossless hemisphere, matches the closed-form oracle")
    {
        const DipoleAxis x{Vec3{1.0, 0.0, 0.0}};
        RadiationPattern single;
        single.intensity = [x](const Vec3& k) { return dipole_intensity_sp(k, x, PolarizationSplit::PlaneOfIncidence); };
        const double got = integrate_collected(single, lossless(), 0.5 * pi, {});
        CHECK(got == doctest::Approx(0.5).epsilon(1e-12));

        for (double tmax : {0.2, 0.6, 1.1}) {
            const double ref = oracle::cone_integral(
                [](double t, double p) {
                    const auto [s, pp] = oracle::in_plane_dipole_sp(t, p);
                    return s + pp;
                },
                tmax);
            CHECK(integrate_collected(single, lossless(), tmax, {}) == doctest::Approx(ref).epsilon(1e-9));
        }
    }

    TEST_CASE("index-matched interface makes the planar case an open cone")
    {
        // n_d -> n_c with T = 1 reduces to the bare emission pattern
        const EmitterModel e = make_nv_emitter(SurfaceOrientation::Cubic100, 0, 0.3);
        const RadiationPattern pattern = pair_pattern(e, PolarizationSplit::PlaneOfIncidence);
        const double tmax = 0.9;
        const double ref = oracle::cone_integral(
            [&](double t, double p) {
                const Vec3 k{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
                double sum = 0.0;
                for (const auto& d : e.dipole_pair)
                    sum += 0.5 * oracle::dipole_total(k.x(), k.y(), k.z(), d.vector().x(), d.vector().y(), d.vector().z());
                return sum;
            },
            tmax);
        CHECK(integrate_collected(pattern, lossless(), tmax, {}) == doctest::Approx(ref).epsilon(1e-9));
    }

    TEST_CASE("single NV pair matches the independent Fresnel oracle")
    {
        for (int idx = 0; idx < nv_orientation_count; ++idx) {
            const EmitterModel e = make_nv_emitter(SurfaceOrientation::Cubic100, idx, 0.4 * idx);
            const double got = efficiency(e, planar, CollectionOptics{0.85}).eta;
            CHECK(got == doctest::Approx(oracle_pair_efficiency(e, 2.4, std::asin(0.85 / 2.4))).epsilon(1e-8));
            const double got_sil = efficiency(e, sil, CollectionOptics{0.85}).eta;
            const double ref_sil = oracle::cone_integral(
                [&](double t, double p) {
                    const Vec3 k{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
                    double sum = 0.0;
                    for (const auto& d : e.dipole_pair)
                        sum += 0.5 * oracle::dipole_total(k.x(), k.y(), k.z(), d.vector().x(), d.vector().y(), d.vector().z());
                    return sum * 4.0 * 2.4 / (3.4 * 3.4);
                },
                std::asin(0.85), 600, 360);
            CHECK(got_sil == doctest::Approx(ref_sil).epsilon(1e-8));
        }
    }

    TEST_CASE("averaged [100] efficiency at NA 0.85")
    {
        const EfficiencyResult p = efficiency_100_averaged(planar, CollectionOptics{0.85});
        const EfficiencyResult s = efficiency_100_averaged(sil, CollectionOptics{0.85});
        CHECK(p.eta == doctest::Approx(reference_planar_085).epsilon(1e-9));
        CHECK(s.eta == doctest::Approx(reference_sil_085).epsilon(1e-9));
        CHECK(std::abs(p.eta - 0.026) <= 0.003);
        CHECK(std::abs(s.eta - 0.196) <= 0.003);
        CHECK(std::abs(s.eta / p.eta - 7.5) <= 0.5);
        CHECK(p.method == EfficiencyMethod::Quadrature);
        REQUIRE(p.emitter_spread.has_value());
        CHECK(*p.emitter_spread < 1e-8);
        CHECK(p.config.theta_max == doctest::Approx(std::asin(0.85 / 2.4)));
        CHECK(s.config.averaging == EmitterAveraging::Nv100Averaged);
    }

    TEST_CASE("dipole-azimuth split gives a nearby planar efficiency")
    {
        const double a = efficiency_100_averaged(planar, CollectionOptics{0.85}, {}, 16, PolarizationSplit::DipoleAzimuth).eta;
        const double s = efficiency_100_averaged(sil, CollectionOptics{0.85}, {}, 16, PolarizationSplit::DipoleAzimuth).eta;
        CHECK(a == doctest::Approx(0.026610647).epsilon(1e-6));
        CHECK(s == doctest::Approx(reference_sil_085).epsilon(1e-9));
        CHECK(std::abs(a - 0.026) <= 0.003);
    }

    TEST_CASE("small aperture collects almost nothing")
    {
        CHECK(efficiency_100_averaged(planar, CollectionOptics{1e-4}).eta < 1e-8);
        CHECK(efficiency_100_averaged(sil, CollectionOptics{1e-4}).eta < 1e-8);
    }

    TEST_CASE("bounded by the transmitted upper-hemisphere power")
    {
        const double tmax = normal_incidence_transmittance(2.4, 1.0);
        for (double na : {0.3, 0.6, 0.95, 1.0}) {
            const double s = efficiency_100_averaged(sil, CollectionOptics{na}, {}, 4).eta;
            CHECK(s <= 0.5 * tmax + 1e-12);
            CHECK(efficiency_100_averaged(planar, CollectionOptics{na}, {}, 4).eta <= s);
        }
    }

    TEST_CASE("strain azimuth does not change the pair efficiency")
    {
        std::mt19937_64 rng{17};
        std::uniform_real_distribution<double> u{0.0, 2.0 * pi};
        for (const auto& iface : {planar, sil}) {
            for (int idx = 0; idx < nv_orientation_count; ++idx) {
                const double base = efficiency(make_nv_emitter(SurfaceOrientation::Cubic100, idx, 0.0), iface, CollectionOptics{0.85}).eta;
                for (int k = 0; k < 10; ++k) {
                    const double a = u(rng);
                    const double v = efficiency(make_nv_emitter(SurfaceOrientation::Cubic100, idx, a), iface, CollectionOptics{0.85}).eta;
                    CHECK(std::abs(v - base) < 1e-8);
                }
            }
            const double one = efficiency_100_averaged(iface, CollectionOptics{0.85}, {}, 1).eta;
            const double many = efficiency_100_averaged(iface, CollectionOptics{0.85}, {}, 64).eta;
            CHECK(std::abs(one - many) < 1e-8);
        }
    }

    TEST_CASE("four NV orientations are equivalent")
    {
        for (const auto& iface : {planar, sil}) {
            for (double na : {0.3, 0.85}) {
                const double first = efficiency(make_nv_emitter(SurfaceOrientation::Cubic100, 0, 0.2), iface, CollectionOptics{na}).eta;
                for (int idx = 1; idx < nv_orientation_count; ++idx) {
                    const double v = efficiency(make_nv_emitter(SurfaceOrientation::Cubic100, idx, 0.2), iface, CollectionOptics{na}).eta;
                    CHECK(std::abs(v - first) < 1e-8);
                }
            }
        }
    }

    TEST_CASE("doubling the grid changes the result by less than the tolerance")
    {
        QuadratureConfig base;
        QuadratureConfig fine;
        fine.n_theta *= 2;
        fine.n_phi *= 2;
        for (const auto& iface : {planar, sil}) {
            const double a = efficiency_100_averaged(iface, CollectionOptics{0.85}, base, 2).eta;
            const double b = efficiency_100_averaged(iface, CollectionOptics{0.85}, fine, 2).eta;
            CHECK(std::abs(a - b) / b < base.target_rel_tol);
        }
    }

    TEST_CASE("efficiency grows with aperture")
    {
        for (const auto& iface : {planar, sil}) {
            double previous = 0.0;
            for (int i = 1; i <= 20; ++i) {
                const double v = efficiency_100_averaged(iface, CollectionOptics{0.05 * i}, {}, 2).eta;
                CHECK(v >= previous);
                previous = v;
            }
        }
    }

    TEST_CASE("Monte Carlo agrees with quadrature on random configurations")
    {
        std::mt19937_64 rng{2024};
        std::uniform_real_distribution<double> u{0.0, 1.0};
        for (int trial = 0; trial < 5; ++trial) {
            const InterfaceConfig& iface = (trial % 2 == 0) ? planar : sil;
            const double na = 0.2 + 0.75 * u(rng);
            const int idx = static_cast<int>(u(rng) * 4.0) % 4;
            const EmitterModel e = make_nv_emitter(SurfaceOrientation::Cubic100, idx, 2.0 * pi * u(rng));
            MonteCarloConfig mc;
            mc.n_rays = 1'000'000;
            mc.seed = 100 + static_cast<std::uint64_t>(trial);
            mc.partitions = 4;
            const EfficiencyResult q = efficiency(e, iface, CollectionOptics{na});
            const EfficiencyResult m = efficiency_monte_carlo(e, iface, CollectionOptics{na}, mc);
            REQUIRE(m.std_error.has_value());
            CHECK(m.method == EfficiencyMethod::MonteCarlo);
            CHECK(std::abs(m.eta - q.eta) <= 3.0 * *m.std_error);
        }
    }

    TEST_CASE("averaged Monte Carlo agrees with averaged quadrature")
    {
        MonteCarloConfig mc;
        mc.n_rays = 1'000'000;
        mc.seed = 9;
        mc.partitions = 2;
        const EfficiencyResult m = efficiency_monte_carlo_100_averaged(sil, CollectionOptics{0.85}, mc);
        CHECK(std::abs(m.eta - reference_sil_085) <= 3.0 * *m.std_error);
    }

    TEST_CASE("Monte Carlo is reproducible for a fixed seed and partition count")
    {
        const EmitterModel e = make_nv_emitter(SurfaceOrientation::Cubic100, 2, 1.0);
        MonteCarloConfig mc;
        mc.n_rays = 50'000;
        mc.seed = 77;
        mc.partitions = 3;
        const EfficiencyResult a = efficiency_monte_carlo(e, planar, CollectionOptics{0.9}, mc);
        const EfficiencyResult b = efficiency_monte_carlo(e, planar, CollectionOptics{0.9}, mc);
        CHECK(a.eta == b.eta);
        CHECK(*a.std_error == *b.std_error);
        mc.seed = 78;
        CHECK(efficiency_monte_carlo(e, planar, CollectionOptics{0.9}, mc).eta != a.eta);

        mc.n_rays = 1000;
        CHECK_THROWS_AS(efficiency_monte_carlo(e, planar, CollectionOptics{0.9}, mc), std::invalid_argument);
    }

    TEST_CASE("aperture larger than the collection index is rejected")
    {
        const EmitterModel e = make_nv_emitter(SurfaceOrientation::Cubic100, 0, 0.0);
        CHECK_THROWS_AS(efficiency(e, planar, CollectionOptics{1.01}), std::invalid_argument);
        CHECK_THROWS_AS(efficiency_100_averaged(sil, CollectionOptics{0.5}, {}, 0), std::invalid_argument);
    }

    TEST_CASE("NA sweep")
    {
        const EfficiencyCurve two = sweep_na(planar, sil, 0.4, 0.85, 2, {}, 4);
        REQUIRE(two.samples.size() == 2);
        CHECK(two.samples[0].na == 0.4);
        CHECK(two.samples[1].na == 0.85);
        CHECK(two.samples[1].eta_planar == doctest::Approx(efficiency_100_averaged(planar, CollectionOptics{0.85}, {}, 4).eta).epsilon(1e-14));
        CHECK(two.samples[1].eta_sil == doctest::Approx(efficiency_100_averaged(sil, CollectionOptics{0.85}, {}, 4).eta).epsilon(1e-14));
        REQUIRE(two.samples[1].ratio.has_value());
        CHECK(std::abs(*two.samples[1].ratio - 7.5) <= 0.5);

        const EfficiencyCurve full = sweep_na(planar, sil, 0.05, 0.95, 19, {}, 2);
        REQUIRE(full.samples.size() == 19);
        for (std::size_t i = 1; i < full.samples.size(); ++i) {
            CHECK(full.samples[i].na > full.samples[i - 1].na);
            CHECK(full.samples[i].eta_sil >= full.samples[i - 1].eta_sil);
            CHECK(full.samples[i].eta_planar >= full.samples[i - 1].eta_planar);
        }

        CHECK_THROWS_AS(sweep_na(planar, sil, 0.4, 0.85, 1), std::invalid_argument);
        CHECK_THROWS_AS(sweep_na(planar, sil, 0.0, 0.85, 3), std::invalid_argument);
        CHECK_THROWS_AS(sweep_na(planar, sil, 0.9, 0.85, 3), std::invalid_argument);
        CHECK_THROWS_AS(sweep_na(planar, sil, 0.4, 1.2, 3), std::invalid_argument);
        CHECK_THROWS_AS(sweep_na(sil, planar, 0.4, 0.85, 3), std::invalid_argument);
    }
}
