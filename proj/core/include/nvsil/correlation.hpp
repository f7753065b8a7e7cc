// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Hanbury Brown-Twiss cross-correlation of two detector channels and the
// two-level-emitter reference curve.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <vector>

#include "nvsil/photon_stream.hpp"

namespace nvsil {

/// Delay histogram of tau = t_B - t_A over all pairs. Bin k covers
/// [(k - 1/2) w, (k + 1/2) w) for k = -K..K, so the bins are symmetric and
/// one bin is centred on zero delay.
struct CoincidenceHistogram {
    double bin_width = 0.0;
    int half_bins = 0;
    double duration = 0.0;
    double rate_a = 0.0;
    double rate_b = 0.0;
    std::vector<double> tau;
    std::vector<std::uint64_t> counts;
    /// counts / (rate_a rate_b bin_width duration)
    std::vector<double> g2;

    [[nodiscard]] std::size_t zero_bin() const { return static_cast<std::size_t>(half_bins); }
    [[nodiscard]] double g2_zero() const { return g2.at(zero_bin()); }
    /// Coincidences expected per bin for uncorrelated streams.
    [[nodiscard]] double poisson_level() const { return rate_a * rate_b * bin_width * duration; }
};

/// All-pairs delay histogram with K = round(tau_max / bin_width) bins on
/// each side of zero. Requires bin_width > 0 and tau_max >= bin_width.
/// Throws NumericalError if either stream is empty, since the normalizing
/// rates are then undefined. The common duration is the shorter of the two.
CoincidenceHistogram correlate(const PhotonStream& a, const PhotonStream& b, double bin_width, double tau_max);

/// 1 - rho^2 + rho^2 (1 - exp(-(pump + decay) |tau|)), rho = signal fraction.
double g2_two_level_analytic(double tau, const TwoLevelEmitterParams& params);

/// Mean of g2_two_level_analytic over [lo, hi], for comparison with binned
/// histograms.
double g2_two_level_bin_average(double lo, double hi, const TwoLevelEmitterParams& params);

} // namespace nvsil
