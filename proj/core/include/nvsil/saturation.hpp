// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Saturation behaviour of the detected count rate,
//
//   R(I) = R_inf I / (I + I_sat)   [+ c I with the optional linear term]
//
// with intensities in microwatts and rates in counts per second.
//---------------------------------------------------------------------------//
#pragma once

#include <optional>
#include <vector>

namespace nvsil {

struct SaturationPoint {
    double intensity_uw = 0.0;
    double rate_cps = 0.0;
    std::optional<double> rate_err_cps;
};

struct SaturationDataset {
    std::vector<SaturationPoint> points;

    /// True when every point carries a rate error (weighted fit).
    [[nodiscard]] bool has_errors() const;
};

/// r_inf * intensity / (intensity + i_sat). Throws std::invalid_argument on
/// negative intensity or non-positive r_inf / i_sat.
double saturation_rate(double intensity_uw, double r_inf_cps, double i_sat_uw);

struct SaturationFitOptions {
    /// Adds a linear background term c * I to the model.
    bool linear_background = false;
    int max_iterations = 200;
    double relative_step_tolerance = 1e-10;
};

struct SaturationFit {
    double r_infinity = 0.0;
    double i_sat = 0.0;
    double r_infinity_err = 0.0;
    double i_sat_err = 0.0;
    /// Present with SaturationFitOptions::linear_background.
    std::optional<double> background_slope;
    std::optional<double> background_slope_err;
    /// Correlation between R_inf and I_sat.
    double correlation = 0.0;

    /// Sum of squared weighted residuals ((R_i - model) / sigma_i)^2.
    double chi_squared = 0.0;
    /// Sum of squared raw residuals (R_i - model)^2.
    double residual_sum_squares = 0.0;
    /// Raw residuals R_i - model(I_i), in input order.
    std::vector<double> residuals;
    int iterations = 0;
    bool weighted = false;
    /// Whether the data straddle the fitted I_sat.
    bool knee_bracketed = false;

    [[nodiscard]] double rate(double intensity_uw) const;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) least squares. Weighted by
/// 1/sigma^2 when every point has a rate error; parameter uncertainties then
/// come straight from the inverse normal matrix, otherwise it is scaled by
/// the residual variance.
///
/// Throws std::invalid_argument for fewer than three points or invalid
/// values, and FitError for degenerate data (fewer than three distinct
/// intensities, rates that never increase) or a fit that does not converge
/// to positive parameters.
SaturationFit fit_saturation(const SaturationDataset& data, const SaturationFitOptions& options = {});

struct RatioEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// fit_a.R_inf / fit_b.R_inf with first-order error propagation.
RatioEstimate enhancement_ratio(const SaturationFit& fit_a, const SaturationFit& fit_b);

/// fit_b.I_sat / fit_a.I_sat: the factor by which the saturation intensity
/// of `a` is lower than that of `b`.
RatioEstimate saturation_intensity_reduction(const SaturationFit& fit_a, const SaturationFit& fit_b);

} // namespace nvsil
