// SPDX-License-Identifier: Apache-2.0
#include "nvsil/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nvsil/errors.hpp"

namespace nvsil {

CoincidenceHistogram correlate(const PhotonStream& a, const PhotonStream& b, double bin_width, double tau_max)
{
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw std::invalid_argument("correlate: bin_width must be positive");
    if (!(tau_max >= bin_width) || !std::isfinite(tau_max))
        throw std::invalid_argument("correlate: tau_max must be >= bin_width");
    if (a.empty() || b.empty())
        throw NumericalError("correlate: empty photon stream, count rates are undefined");

    const double duration = std::min(a.duration(), b.duration());
    if (!(duration > 0.0))
        throw NumericalError("correlate: streams have zero duration");

    CoincidenceHistogram h;
    h.bin_width = bin_width;
    h.half_bins = static_cast<int>(std::lround(tau_max / bin_width));
    h.duration = duration;
    h.rate_a = static_cast<double>(a.size()) / duration;
    h.rate_b = static_cast<double>(b.size()) / duration;

    const auto n_bins = static_cast<std::size_t>(2 * h.half_bins + 1);
    h.counts.assign(n_bins, 0);
    const double reach = (h.half_bins + 0.5) * bin_width;

    const std::vector<double>& ta = a.timestamps();
    const std::vector<double>& tb = b.timestamps();
    std::size_t first = 0;
    for (const double t0 : ta) {
        while (first < tb.size() && tb[first] - t0 < -reach)
            ++first;
        for (std::size_t j = first; j < tb.size(); ++j) {
            const double tau = tb[j] - t0;
            if (tau >= reach)
                break;
            const auto k = static_cast<long>(std::floor(tau / bin_width + 0.5)) + h.half_bins;
            if (k >= 0 && k < static_cast<long>(n_bins))
                ++h.counts[static_cast<std::size_t>(k)];
        }
    }

    const double level = h.poisson_level();
    h.tau.resize(n_bins);
    h.g2.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        h.tau[i] = (static_cast<double>(i) - h.half_bins) * bin_width;
        h.g2[i] = static_cast<double>(h.counts[i]) / level;
    }
    return h;
}

double g2_two_level_analytic(double tau, const TwoLevelEmitterParams& params)
{
    const double rho = params.signal_fraction();
    const double ideal = 1.0 - std::exp(-(params.pump_rate + params.decay_rate) * std::abs(tau));
    return 1.0 - rho * rho + rho * rho * ideal;
}

double g2_two_level_bin_average(double lo, double hi, const TwoLevelEmitterParams& params)
{
    if (!(hi > lo))
        return g2_two_level_analytic(lo, params);
    const double gamma = params.pump_rate + params.decay_rate;
    // odd antiderivative of exp(-gamma |tau|)
    const auto F = [gamma](double t) { return std::copysign(-std::expm1(-gamma * std::abs(t)) / gamma, t); };
    const double ideal = 1.0 - (F(hi) - F(lo)) / (hi - lo);
    const double rho = params.signal_fraction();
    return 1.0 - rho * rho + rho * rho * ideal;
}

} // namespace nvsil
