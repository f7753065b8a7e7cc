// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "nvsil/correlation.hpp"
#include "nvsil/errors.hpp"

using namespace nvsil;

namespace {

TwoLevelEmitterParams bright_emitter()
{
    TwoLevelEmitterParams p;
    p.pump_rate = 5e7;
    p.decay_rate = 1.0 / 12e-9;
    p.detection_efficiency = 1.0;
    return p;
}

CoincidenceHistogram hbt(const TwoLevelEmitterParams& p, double duration, double bin, double tau_max, std::uint64_t seed)
{
    const PhotonStream s = simulate_two_level_stream(p, duration, seed);
    const auto [a, b] = hbt_split(s, seed + 1);
    return correlate(a, b, bin, tau_max);
}

} // namespace

TEST_SUITE("correlation")
{
    TEST_CASE("analytic two-level curve")
    {
        TwoLevelEmitterParams p = bright_emitter();
        CHECK(g2_two_level_analytic(0.0, p) == 0.0);
        CHECK(g2_two_level_analytic(1.0, p) == doctest::Approx(1.0));
        const double k = p.pump_rate + p.decay_rate;
        CHECK(g2_two_level_analytic(2e-9, p) == doctest::Approx(1.0 - std::exp(-k * 2e-9)));
        CHECK(g2_two_level_analytic(-2e-9, p) == g2_two_level_analytic(2e-9, p));

        p.background_rate = background_rate_for_signal_fraction(p, 0.95);
        CHECK(g2_two_level_analytic(0.0, p) == doctest::Approx(1.0 - 0.95 * 0.95).epsilon(1e-12));
        CHECK(g2_two_level_analytic(0.0, p) == doctest::Approx(0.0975).epsilon(1e-12));

        // bin average agrees with a fine midpoint sum, including across zero
        const double lo = -0.3e-9, hi = 0.5e-9;
        double sum = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i)
            sum += g2_two_level_analytic(lo + (hi - lo) * (i + 0.5) / n, p);
        CHECK(g2_two_level_bin_average(lo, hi, p) == doctest::Approx(sum / n).epsilon(1e-8));
        CHECK(g2_two_level_bin_average(1e-9, 1e-9, p) == doctest::Approx(g2_two_level_analytic(1e-9, p)));
    }

    TEST_CASE("hand-built histogram")
    {
        const PhotonStream a({1.0, 2.0}, 10.0, Channel::A);
        const PhotonStream b({2.0 - 1.1, 1.0 + 0.4, 5.0}, 10.0, Channel::B);
        const CoincidenceHistogram h = correlate(a, b, 1.0, 2.0);
        CHECK(h.half_bins == 2);
        REQUIRE(h.counts.size() == 5);
        CHECK(h.tau[2] == 0.0);
        CHECK(h.tau[0] == -2.0);
        // delays: 0.4, -0.1, -0.6, -1.1; 3.0, 4.0 fall outside
        CHECK(h.counts[2] == 2);
        CHECK(h.counts[1] == 2);
        CHECK(h.counts[0] + h.counts[3] + h.counts[4] == 0);
        CHECK(h.rate_a == doctest::Approx(0.2));
        CHECK(h.rate_b == doctest::Approx(0.3));
        CHECK(h.g2[2] == doctest::Approx(2.0 / h.poisson_level()));
    }

    TEST_CASE("invalid arguments")
    {
        const PhotonStream a({0.5}, 1.0, Channel::A);
        const PhotonStream empty({}, 1.0, Channel::B);
        CHECK_THROWS_AS(correlate(a, empty, 1e-3, 1e-2), NumericalError);
        CHECK_THROWS_AS(correlate(empty, a, 1e-3, 1e-2), NumericalError);
        CHECK_THROWS_AS(correlate(a, a, 0.0, 1e-2), std::invalid_argument);
        CHECK_THROWS_AS(correlate(a, a, 1e-2, 1e-3), std::invalid_argument);
    }

    TEST_CASE("independent Poisson streams are flat")
    {
        TwoLevelEmitterParams p;
        p.background_rate = 1e5;
        const PhotonStream a = simulate_two_level_stream(p, 1.0, 101);
        const PhotonStream b = simulate_two_level_stream(p, 1.0, 202);
        CHECK(a.size() > 99'000);
        const CoincidenceHistogram h = correlate(a, b, 1e-6, 1e-5);
        CHECK(h.g2.size() == 21);
        double mean = 0.0;
        for (double g : h.g2) {
            CHECK(g >= 0.0);
            CHECK(std::abs(g - 1.0) <= 0.05);
            mean += g;
        }
        mean /= static_cast<double>(h.g2.size());
        CHECK(mean >= 0.98);
        CHECK(mean <= 1.02);
    }

    TEST_CASE("ideal emitter is antibunched")
    {
        const TwoLevelEmitterParams p = bright_emitter();
        const double k = p.pump_rate + p.decay_rate;
        const double bin = 0.1 / k;
        const CoincidenceHistogram h = hbt(p, 0.01, bin, 100e-9, 7);
        CHECK(h.g2_zero() < 0.1);
        CHECK(h.g2_zero() < 0.5);
        // rises towards one at long delays on both sides
        CHECK(h.g2.front() == doctest::Approx(1.0).epsilon(0.05));
        CHECK(h.g2.back() == doctest::Approx(1.0).epsilon(0.05));
        for (double g : h.g2)
            CHECK(g >= 0.0);
    }

    TEST_CASE("emitter histogram follows the analytic curve bin by bin")
    {
        const TwoLevelEmitterParams p = bright_emitter();
        const double bin = 0.1 / (p.pump_rate + p.decay_rate);
        const CoincidenceHistogram h = hbt(p, 0.02, bin, 20 * bin, 13);
        const double level = h.poisson_level();
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const double expected
                = level * g2_two_level_bin_average(h.tau[i] - 0.5 * bin, h.tau[i] + 0.5 * bin, p);
            const double sigma = std::sqrt(std::max(expected, 1.0));
            CHECK(std::abs(static_cast<double>(h.counts[i]) - expected) <= 3.0 * sigma);
        }
    }

    TEST_CASE("background dilutes antibunching to 1 - rho^2")
    {
        TwoLevelEmitterParams p = bright_emitter();
        p.background_rate = background_rate_for_signal_fraction(p, 0.95);
        const double bin = 0.02 / (p.pump_rate + p.decay_rate);
        const CoincidenceHistogram h = hbt(p, 0.1, bin, 50e-9, 23);
        CHECK(std::abs(h.g2_zero() - (1.0 - 0.95 * 0.95)) <= 0.02);
        CHECK(h.g2_zero() == doctest::Approx(g2_two_level_bin_average(-0.5 * bin, 0.5 * bin, p)).epsilon(0.15));
    }

    TEST_CASE("histogram is symmetric within statistics")
    {
        TwoLevelEmitterParams p = bright_emitter();
        p.detection_efficiency = 0.5;
        const double bin = 1e-9;
        const CoincidenceHistogram h = hbt(p, 0.02, bin, 30e-9, 31);
        const std::size_t z = h.zero_bin();
        for (std::size_t j = 1; j <= static_cast<std::size_t>(h.half_bins); ++j) {
            const double l = static_cast<double>(h.counts[z - j]);
            const double r = static_cast<double>(h.counts[z + j]);
            CHECK(std::abs(l - r) <= 3.0 * std::sqrt(l + r + 1.0));
        }
        CHECK(h.tau[z - 3] == doctest::Approx(-h.tau[z + 3]));
    }

    TEST_CASE("correlation is deterministic")
    {
        const TwoLevelEmitterParams p = bright_emitter();
        const CoincidenceHistogram a = hbt(p, 0.001, 1e-9, 20e-9, 3);
        const CoincidenceHistogram b = hbt(p, 0.001, 1e-9, 20e-9, 3);
        CHECK(a.counts == b.counts);
        CHECK(a.g2 == b.g2);
    }
}
