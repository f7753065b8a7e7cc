// SPDX-License-Identifier: Apache-2.0
#include "nvsil/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nvsil/errors.hpp"

namespace nvsil {

namespace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Problem {
    Vector x;
    Vector y;
    Vector inv_sigma;
    bool linear_background;

    [[nodiscard]] Eigen::Index n_params() const { return linear_background ? 3 : 2; }

    [[nodiscard]] double model(const Vector& beta, double xi) const
    {
        double r = beta[0] * xi / (xi + beta[1]);
        if (linear_background)
            r += beta[2] * xi;
        return r;
    }

    [[nodiscard]] Vector weighted_residuals(const Vector& beta) const
    {
        Vector r(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            r[i] = (y[i] - model(beta, x[i])) * inv_sigma[i];
        return r;
    }

    /// Jacobian of the weighted model.
    [[nodiscard]] Matrix jacobian(const Vector& beta) const
    {
        Matrix J(x.size(), n_params());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            const double denom = xi + beta[1];
            J(i, 0) = xi / denom * inv_sigma[i];
            J(i, 1) = -beta[0] * xi / (denom * denom) * inv_sigma[i];
            if (linear_background)
                J(i, 2) = xi * inv_sigma[i];
        }
        return J;
    }
};

bool admissible(const Vector& beta)
{
    return beta.allFinite() && beta[0] > 0.0 && beta[1] > 0.0;
}

} // namespace

bool SaturationDataset::has_errors() const
{
    return !points.empty()
        && std::all_of(points.begin(), points.end(), [](const SaturationPoint& p) { return p.rate_err_cps.has_value(); });
}

double saturation_rate(double intensity_uw, double r_inf_cps, double i_sat_uw)
{
    if (!(intensity_uw >= 0.0) || !std::isfinite(intensity_uw))
        throw std::invalid_argument("saturation_rate: intensity must be >= 0");
    if (!(r_inf_cps > 0.0) || !(i_sat_uw > 0.0) || !std::isfinite(r_inf_cps) || !std::isfinite(i_sat_uw))
        throw std::invalid_argument("saturation_rate: r_inf and i_sat must be positive");
    return r_inf_cps * intensity_uw / (intensity_uw + i_sat_uw);
}

double SaturationFit::rate(double intensity_uw) const
{
    double r = saturation_rate(intensity_uw, r_infinity, i_sat);
    if (background_slope)
        r += *background_slope * intensity_uw;
    return r;
}

SaturationFit fit_saturation(const SaturationDataset& data, const SaturationFitOptions& options)
{
    const auto& pts = data.points;
    if (pts.size() < 3)
        throw std::invalid_argument("fit_saturation: need at least 3 data points, got " + std::to_string(pts.size()));
    const bool weighted = data.has_errors();
    for (const SaturationPoint& p : pts) {
        if (!(p.intensity_uw >= 0.0) || !std::isfinite(p.intensity_uw) || !std::isfinite(p.rate_cps))
            throw std::invalid_argument("fit_saturation: intensities must be finite and >= 0, rates finite");
        if (p.rate_err_cps && !(*p.rate_err_cps > 0.0 && std::isfinite(*p.rate_err_cps)))
            throw std::invalid_argument("fit_saturation: rate errors must be positive");
    }
    if (options.max_iterations < 1 || !(options.relative_step_tolerance > 0.0))
        throw std::invalid_argument("fit_saturation: invalid options");

    std::set<double> distinct;
    for (const SaturationPoint& p : pts)
        distinct.insert(p.intensity_uw);
    if (distinct.size() < 3)
        throw FitError("fit_saturation: degenerate data, need at least 3 distinct intensities (got "
            + std::to_string(distinct.size()) + ")");

    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
        [&](std::size_t l, std::size_t r) { return pts[l].intensity_uw < pts[r].intensity_uw; });
    bool increases = false;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const SaturationPoint& lo = pts[order[i - 1]];
        const SaturationPoint& hi = pts[order[i]];
        if (hi.intensity_uw > lo.intensity_uw && hi.rate_cps > lo.rate_cps)
            increases = true;
    }
    if (!increases)
        throw FitError("fit_saturation: degenerate data, rate never increases with intensity");

    const auto n = static_cast<Eigen::Index>(pts.size());
    Problem prob{Vector(n), Vector(n), Vector(n), options.linear_background};
    for (Eigen::Index i = 0; i < n; ++i) {
        const SaturationPoint& p = pts[static_cast<std::size_t>(i)];
        prob.x[i] = p.intensity_uw;
        prob.y[i] = p.rate_cps;
        prob.inv_sigma[i] = weighted ? 1.0 / *p.rate_err_cps : 1.0;
    }

    const Eigen::Index n_par = prob.n_params();
    Vector beta = Vector::Zero(n_par);
    beta[0] = 1.2 * prob.y.maxCoeff();
    {
        // intensity whose measured rate is closest to half the initial R_inf
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (std::abs(prob.y[i] - 0.5 * beta[0]) < std::abs(prob.y[best] - 0.5 * beta[0]))
                best = i;
        beta[1] = prob.x[best] > 0.0 ? prob.x[best] : *std::next(distinct.begin());
    }
    if (!admissible(beta))
        throw FitError("fit_saturation: no positive starting point (max rate <= 0)");

    Vector residual = prob.weighted_residuals(beta);
    double chi2 = residual.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < options.max_iterations && !converged; ++iter) {
        const Matrix J = prob.jacobian(beta);
        const Matrix JtJ = J.transpose() * J;
        const Vector gradient = J.transpose() * residual;

        for (;;) {
            Matrix A = JtJ;
            for (Eigen::Index k = 0; k < n_par; ++k)
                A(k, k) += lambda * std::max(JtJ(k, k), 1e-300);
            const Vector step = A.ldlt().solve(gradient);
            const Vector trial = beta + step;
            const double trial_chi2 = admissible(trial) ? prob.weighted_residuals(trial).squaredNorm()
                                                        : std::numeric_limits<double>::infinity();
            if (step.allFinite() && trial_chi2 <= chi2) {
                bool small = true;
                for (Eigen::Index k = 0; k < n_par; ++k)
                    small = small
                        && std::abs(step[k]) <= options.relative_step_tolerance
                                * (std::abs(beta[k]) + options.relative_step_tolerance);
                beta = trial;
                residual = prob.weighted_residuals(beta);
                chi2 = trial_chi2;
                lambda = std::max(lambda * 0.1, 1e-12);
                converged = small || chi2 == 0.0;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e16) {
                // No descent direction left: beta is a minimum to working precision.
                converged = true;
                break;
            }
        }
    }
    if (!converged)
        throw FitError("fit_saturation: no convergence after " + std::to_string(options.max_iterations)
            + " iterations");
    if (!admissible(beta))
        throw FitError("fit_saturation: fit converged to non-positive parameters");

    const Matrix J = prob.jacobian(beta);
    Matrix cov = (J.transpose() * J).ldlt().solve(Matrix::Identity(n_par, n_par));
    if (!weighted) {
        const double dof = static_cast<double>(n - n_par);
        cov *= dof > 0.0 ? chi2 / dof : std::numeric_limits<double>::quiet_NaN();
    }

    SaturationFit fit;
    fit.r_infinity = beta[0];
    fit.i_sat = beta[1];
    fit.r_infinity_err = std::sqrt(std::max(0.0, cov(0, 0)));
    fit.i_sat_err = std::sqrt(std::max(0.0, cov(1, 1)));
    const double denom = fit.r_infinity_err * fit.i_sat_err;
    fit.correlation = denom > 0.0 ? cov(0, 1) / denom : 0.0;
    if (options.linear_background) {
        fit.background_slope = beta[2];
        fit.background_slope_err = std::sqrt(std::max(0.0, cov(2, 2)));
    }
    fit.chi_squared = chi2;
    fit.residuals.resize(pts.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = prob.y[i] - prob.model(beta, prob.x[i]);
        fit.residuals[static_cast<std::size_t>(i)] = r;
        fit.residual_sum_squares += r * r;
    }
    fit.iterations = iter;
    fit.weighted = weighted;
    fit.knee_bracketed = *distinct.begin() < fit.i_sat && fit.i_sat < *distinct.rbegin();
    return fit;
}

namespace {

RatioEstimate ratio(double num, double num_err, double den, double den_err)
{
    if (!(num > 0.0) || !(den > 0.0))
        throw std::invalid_argument("ratio of fit parameters requires successful fits with positive values");
    const double value = num / den;
    const double rel = std::hypot(num_err / num, den_err / den);
    return {value, value * rel};
}

} // namespace

RatioEstimate enhancement_ratio(const SaturationFit& fit_a, const SaturationFit& fit_b)
{
    return ratio(fit_a.r_infinity, fit_a.r_infinity_err, fit_b.r_infinity, fit_b.r_infinity_err);
}

RatioEstimate saturation_intensity_reduction(const SaturationFit& fit_a, const SaturationFit& fit_b)
{
    return ratio(fit_b.i_sat, fit_b.i_sat_err, fit_a.i_sat, fit_a.i_sat_err);
}

} // namespace nvsil
