// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nvsil/collection_efficiency.hpp"
#include "nvsil/correlation.hpp"
#include "nvsil/csv.hpp"
#include "nvsil/errors.hpp"
#include "nvsil/photon_stream.hpp"
#include "nvsil/saturation.hpp"

namespace nvsil::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double rad_to_deg = 180.0 / std::numbers::pi;

enum class Format { Csv, Json };

struct OutputOptions {
    std::string path;
    std::string format;

    [[nodiscard]] Format resolve(Format fallback) const
    {
        if (format.empty())
            return fallback;
        return format == "json" ? Format::Json : Format::Csv;
    }
};

/// Writes to --out when given, otherwise to stdout.
void emit(const std::string& text, const OutputOptions& output, std::ostream& out)
{
    if (output.path.empty() || output.path == "-") {
        out << text;
        return;
    }
    std::ofstream file(output.path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot open '" + output.path + "' for writing");
    file << text;
    file.flush();
    if (!file)
        throw IoError("failed writing '" + output.path + "'");
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::string report(const json& config, const json& result, const json& diagnostics)
{
    json doc;
    doc["config"] = config;
    doc["result"] = result;
    doc["diagnostics"] = diagnostics;
    return doc.dump(2) + "\n";
}

std::string_view split_name(PolarizationSplit s)
{
    return s == PolarizationSplit::PlaneOfIncidence ? "incidence" : "dipole";
}

PolarizationSplit parse_split(const std::string& s)
{
    return s == "dipole" ? PolarizationSplit::DipoleAzimuth : PolarizationSplit::PlaneOfIncidence;
}

void add_output_options(CLI::App* sub, OutputOptions& output)
{
    sub->add_option("--out", output.path, "Output file (default: stdout)");
    sub->add_option("--format", output.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

//---------------------------------------------------------------------------//

struct IndexOptions {
    double nd = InterfaceConfig::default_n_diamond;
    double nc = InterfaceConfig::default_n_collection;
};

void add_index_options(CLI::App* sub, IndexOptions& idx)
{
    sub->add_option("--nd", idx.nd, "Refractive index of diamond")->capture_default_str();
    sub->add_option("--nc", idx.nc, "Refractive index of the collection medium")->capture_default_str();
}

struct QuadOptions {
    int n_theta = QuadratureConfig{}.n_theta;
    int n_phi = QuadratureConfig{}.n_phi;
    int strain_samples = default_strain_samples;
    std::string split = "incidence";

    [[nodiscard]] QuadratureConfig config() const { return {n_theta, n_phi, QuadratureConfig{}.target_rel_tol}; }
};

void add_quad_options(CLI::App* sub, QuadOptions& q)
{
    sub->add_option("--n-theta", q.n_theta, "Gauss-Legendre nodes in theta")->capture_default_str();
    sub->add_option("--n-phi", q.n_phi, "Trapezoid nodes in phi")->capture_default_str();
    sub->add_option("--strain-samples", q.strain_samples, "Strain azimuths per NV orientation")
        ->capture_default_str();
    sub->add_option("--split", q.split, "s/p split convention")
        ->check(CLI::IsMember({"incidence", "dipole"}))
        ->capture_default_str();
}

json quad_json(const QuadOptions& q)
{
    return {{"n_theta", q.n_theta}, {"n_phi", q.n_phi}, {"strain_samples", q.strain_samples}, {"split", q.split}};
}

//---------------------------------------------------------------------------//

struct TirOptions {
    IndexOptions idx;
    OutputOptions output;
};

int cmd_tir(const TirOptions& o, std::ostream& out)
{
    const InterfaceConfig iface{Geometry::Planar, o.idx.nd, o.idx.nc};
    const double angle = iface.critical_angle();
    if (o.output.resolve(Format::Json) == Format::Csv) {
        emit("critical_angle_rad,critical_angle_deg\n" + csv::format_double(angle) + ","
                + csv::format_double(angle * rad_to_deg) + "\n",
            o.output, out);
        return exit_ok;
    }
    emit(report({{"nd", o.idx.nd}, {"nc", o.idx.nc}},
             {{"critical_angle_rad", angle}, {"critical_angle_deg", angle * rad_to_deg}}, json::object()),
        o.output, out);
    return exit_ok;
}

//---------------------------------------------------------------------------//

struct SweepOptions {
    double na_min = 0.05;
    double na_max = 0.95;
    int steps = 19;
    IndexOptions idx;
    QuadOptions quad;
    OutputOptions output;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out)
{
    const InterfaceConfig planar{Geometry::Planar, o.idx.nd, o.idx.nc};
    const InterfaceConfig sil{Geometry::HemisphericalSIL, o.idx.nd, o.idx.nc};
    const EfficiencyCurve curve = sweep_na(planar, sil, o.na_min, o.na_max, o.steps, o.quad.config(),
        o.quad.strain_samples, parse_split(o.quad.split));

    if (o.output.resolve(Format::Csv) == Format::Csv) {
        std::ostringstream text;
        csv::write_curve(text, curve);
        emit(text.str(), o.output, out);
        return exit_ok;
    }

    json rows = json::array();
    for (const CurveSample& s : curve.samples) {
        rows.push_back({{"na", s.na}, {"eta_planar", s.eta_planar}, {"eta_sil", s.eta_sil},
            {"ratio", s.ratio ? json(*s.ratio) : json(nullptr)}});
    }
    json config = {{"na_min", o.na_min}, {"na_max", o.na_max}, {"steps", o.steps}, {"nd", o.idx.nd},
        {"nc", o.idx.nc}, {"quadrature", quad_json(o.quad)}};
    emit(report(config, {{"curve", rows}},
             {{"critical_angle_deg", planar.critical_angle() * rad_to_deg}}),
        o.output, out);
    return exit_ok;
}

//---------------------------------------------------------------------------//

struct EfficiencyOptions {
    std::string geometry = "sil";
    double na = 0.85;
    std::string method = "quad";
    std::uint64_t rays = 1'000'000;
    std::uint64_t seed = 0;
    unsigned partitions = 1;
    IndexOptions idx;
    QuadOptions quad;
    OutputOptions output;
};

int cmd_efficiency(const EfficiencyOptions& o, std::ostream& out)
{
    const InterfaceConfig iface{parse_geometry(o.geometry), o.idx.nd, o.idx.nc};
    const CollectionOptics optics{o.na};
    const PolarizationSplit split = parse_split(o.quad.split);

    EfficiencyResult r;
    if (o.method == "quad") {
        r = efficiency_100_averaged(iface, optics, o.quad.config(), o.quad.strain_samples, split);
    } else {
        const MonteCarloConfig mc{o.rays, o.seed, o.partitions};
        r = efficiency_monte_carlo_100_averaged(iface, optics, mc, o.quad.strain_samples, split);
    }

    if (o.output.resolve(Format::Json) == Format::Csv) {
        emit("geometry,na,method,eta,std_error\n" + o.geometry + "," + csv::format_double(o.na) + "," + o.method
                + "," + csv::format_double(r.eta) + "," + (r.std_error ? csv::format_double(*r.std_error) : "")
                + "\n",
            o.output, out);
        return exit_ok;
    }

    json config = {{"geometry", o.geometry}, {"na", o.na}, {"nd", o.idx.nd}, {"nc", o.idx.nc},
        {"method", o.method}, {"averaging", "nv100"}, {"strain_samples", o.quad.strain_samples},
        {"split", std::string(split_name(split))}};
    if (o.method == "quad") {
        config["n_theta"] = o.quad.n_theta;
        config["n_phi"] = o.quad.n_phi;
    } else {
        config["rays"] = o.rays;
        config["seed"] = o.seed;
        config["partitions"] = o.partitions;
    }
    json result = {{"eta", r.eta}, {"method", o.method},
        {"std_error", r.std_error ? json(*r.std_error) : json(nullptr)}};
    json diagnostics = {{"theta_max_deg", r.config.theta_max * rad_to_deg}};
    if (r.emitter_spread)
        diagnostics["emitter_spread"] = *r.emitter_spread;
    emit(report(config, result, diagnostics), o.output, out);
    return exit_ok;
}

//---------------------------------------------------------------------------//

struct FitOptions {
    std::string input;
    bool background = false;
    std::string compare;
    OutputOptions output;
};

json fit_result_json(const SaturationFit& fit)
{
    json r = {{"R_infinity", fit.r_infinity}, {"R_infinity_err", fit.r_infinity_err}, {"I_sat", fit.i_sat},
        {"I_sat_err", fit.i_sat_err}, {"correlation", fit.correlation}};
    if (fit.background_slope) {
        r["background_slope"] = *fit.background_slope;
        r["background_slope_err"] = *fit.background_slope_err;
    }
    return r;
}

SaturationFit fit_from_report(const std::string& path)
{
    std::ifstream in = open_input(path);
    json doc;
    try {
        doc = json::parse(in);
        const json& r = doc.at("result");
        SaturationFit fit;
        fit.r_infinity = r.at("R_infinity").get<double>();
        fit.r_infinity_err = r.at("R_infinity_err").get<double>();
        fit.i_sat = r.at("I_sat").get<double>();
        fit.i_sat_err = r.at("I_sat_err").get<double>();
        return fit;
    } catch (const json::exception& e) {
        throw std::invalid_argument("malformed fit report '" + path + "': " + e.what());
    }
}

int cmd_fit_sat(const FitOptions& o, std::ostream& out)
{
    std::ifstream in = open_input(o.input);
    const SaturationDataset data = csv::read_saturation(in);
    SaturationFitOptions options;
    options.linear_background = o.background;
    const SaturationFit fit = fit_saturation(data, options);

    json result = fit_result_json(fit);
    if (!o.compare.empty()) {
        const SaturationFit other = fit_from_report(o.compare);
        const RatioEstimate r_ratio = enhancement_ratio(fit, other);
        const RatioEstimate i_ratio = saturation_intensity_reduction(fit, other);
        result["comparison"] = {{"reference", o.compare}, {"R_infinity_ratio", r_ratio.value},
            {"R_infinity_ratio_err", r_ratio.std_error}, {"I_sat_reduction", i_ratio.value},
            {"I_sat_reduction_err", i_ratio.std_error}};
    }

    json config = {{"input", o.input}, {"background", o.background}, {"points", data.points.size()},
        {"weighted", fit.weighted}};
    json diagnostics = {{"chi_squared", fit.chi_squared}, {"residual_sum_squares", fit.residual_sum_squares},
        {"residuals", fit.residuals}, {"iterations", fit.iterations}, {"knee_bracketed", fit.knee_bracketed}};
    emit(report(config, result, diagnostics), o.output, out);
    return exit_ok;
}

//---------------------------------------------------------------------------//

struct EmitterOptions {
    double pump_rate = 5e7;
    double decay_rate = 1.0 / 12e-9;
    double detection_efficiency = 1.0;
    double background_rate = 0.0;
    std::optional<double> signal_fraction;
    double duration = 1.0;

    [[nodiscard]] TwoLevelEmitterParams params() const
    {
        TwoLevelEmitterParams p{pump_rate, decay_rate, detection_efficiency, background_rate};
        if (signal_fraction)
            p.background_rate = background_rate_for_signal_fraction(p, *signal_fraction);
        return p;
    }
};

void add_emitter_options(CLI::App* sub, EmitterOptions& e)
{
    sub->add_option("--pump-rate", e.pump_rate, "Excitation rate (1/s)")->capture_default_str();
    sub->add_option("--decay-rate", e.decay_rate, "Spontaneous decay rate (1/s)")->capture_default_str();
    sub->add_option("--detection-efficiency", e.detection_efficiency, "Click probability per photon")
        ->capture_default_str();
    auto* bg = sub->add_option("--background-rate", e.background_rate, "Poissonian background (cps)")
                   ->capture_default_str();
    sub->add_option("--signal-fraction", e.signal_fraction, "Set the background so this fraction of clicks is signal")
        ->excludes(bg);
    sub->add_option("--duration", e.duration, "Acquisition time (s)")->capture_default_str();
}

json emitter_json(const TwoLevelEmitterParams& p, double duration)
{
    return {{"pump_rate", p.pump_rate}, {"decay_rate", p.decay_rate},
        {"detection_efficiency", p.detection_efficiency}, {"background_rate", p.background_rate},
        {"duration", duration}};
}

struct SimulateOptions {
    EmitterOptions emitter;
    std::uint64_t seed = 0;
    std::string out_b;
    OutputOptions output;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out)
{
    const PhotonStream stream = simulate_two_level_stream(o.emitter.params(), o.emitter.duration, o.seed);
    std::ostringstream a;
    if (o.out_b.empty()) {
        csv::write_stream(a, stream);
        emit(a.str(), o.output, out);
        return exit_ok;
    }
    const auto [sa, sb] = hbt_split(stream, o.seed);
    std::ostringstream b;
    csv::write_stream(a, sa);
    csv::write_stream(b, sb);
    emit(a.str(), o.output, out);
    emit(b.str(), OutputOptions{o.out_b, "csv"}, out);
    return exit_ok;
}

struct HbtOptions {
    EmitterOptions emitter;
    std::string stream_a;
    std::string stream_b;
    std::optional<double> stream_duration;
    double bin_width_ns = 0.1;
    double tau_max_ns = 100.0;
    std::uint64_t seed = 0;
    OutputOptions output;
};

int cmd_hbt(const HbtOptions& o, std::ostream& out, std::ostream& err)
{
    if (o.stream_a.empty() != o.stream_b.empty())
        throw std::invalid_argument("--stream-a and --stream-b must be given together");

    PhotonStream a;
    PhotonStream b;
    json config;
    std::optional<TwoLevelEmitterParams> params;
    if (!o.stream_a.empty()) {
        std::ifstream in_a = open_input(o.stream_a);
        std::ifstream in_b = open_input(o.stream_b);
        a = csv::read_stream(in_a, o.stream_duration, Channel::A);
        b = csv::read_stream(in_b, o.stream_duration, Channel::B);
        config = {{"stream_a", o.stream_a}, {"stream_b", o.stream_b}};
    } else {
        params = o.emitter.params();
        const PhotonStream stream = simulate_two_level_stream(*params, o.emitter.duration, o.seed);
        std::tie(a, b) = hbt_split(stream, o.seed);
        config = {{"emitter", emitter_json(*params, o.emitter.duration)}, {"seed", o.seed}};
    }
    config["bin_width_ns"] = o.bin_width_ns;
    config["tau_max_ns"] = o.tau_max_ns;

    const CoincidenceHistogram h = correlate(a, b, o.bin_width_ns * 1e-9, o.tau_max_ns * 1e-9);

    std::ostream& summary = (o.output.path.empty() || o.output.path == "-") ? err : out;
    summary << "g2(0) = " << csv::format_double(h.g2_zero()) << "\n";

    if (o.output.resolve(Format::Csv) == Format::Csv) {
        std::ostringstream text;
        csv::write_histogram(text, h);
        emit(text.str(), o.output, out);
        return exit_ok;
    }
    json bins = json::array();
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        bins.push_back({{"tau_seconds", h.tau[i]}, {"counts", h.counts[i]}, {"g2", h.g2[i]}});
    json diagnostics = {{"events_a", a.size()}, {"events_b", b.size()}, {"rate_a", h.rate_a},
        {"rate_b", h.rate_b}, {"poisson_level", h.poisson_level()}};
    if (params) {
        diagnostics["signal_fraction"] = params->signal_fraction();
        diagnostics["g2_zero_analytic"] = g2_two_level_bin_average(-0.5 * h.bin_width, 0.5 * h.bin_width, *params);
    }
    emit(report(config, {{"g2_zero", h.g2_zero()}, {"histogram", bins}}, diagnostics), o.output, out);
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Collection efficiency and photon statistics of NV centres under planar and SIL surfaces",
        "nvsil"};
    app.require_subcommand(1);

    TirOptions tir;
    auto* tir_cmd = app.add_subcommand("tir", "Critical angle for total internal reflection");
    add_index_options(tir_cmd, tir.idx);
    add_output_options(tir_cmd, tir.output);

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Averaged planar and SIL efficiency versus NA");
    sweep_cmd->add_option("--na-min", sweep.na_min, "Smallest NA")->capture_default_str();
    sweep_cmd->add_option("--na-max", sweep.na_max, "Largest NA")->capture_default_str();
    sweep_cmd->add_option("--steps", sweep.steps, "Number of NA samples")->capture_default_str();
    add_index_options(sweep_cmd, sweep.idx);
    add_quad_options(sweep_cmd, sweep.quad);
    add_output_options(sweep_cmd, sweep.output);

    EfficiencyOptions eff;
    auto* eff_cmd = app.add_subcommand("efficiency", "Averaged NV efficiency at one NA");
    eff_cmd->add_option("--geometry", eff.geometry, "Exit surface")
        ->check(CLI::IsMember({"planar", "sil"}))
        ->capture_default_str();
    eff_cmd->add_option("--na", eff.na, "Numerical aperture")->capture_default_str();
    eff_cmd->add_option("--method", eff.method, "Quadrature or Monte Carlo")
        ->check(CLI::IsMember({"quad", "mc"}))
        ->capture_default_str();
    eff_cmd->add_option("--rays", eff.rays, "Monte Carlo rays")->capture_default_str();
    eff_cmd->add_option("--seed", eff.seed, "Monte Carlo seed")->capture_default_str();
    eff_cmd->add_option("--partitions", eff.partitions, "Monte Carlo substreams / threads")->capture_default_str();
    add_index_options(eff_cmd, eff.idx);
    add_quad_options(eff_cmd, eff.quad);
    add_output_options(eff_cmd, eff.output);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit-sat", "Fit R = R_inf I / (I + I_sat) to count-rate data");
    fit_cmd->add_option("--input", fit.input, "CSV intensity_uW,rate_cps[,rate_err_cps]")->required();
    fit_cmd->add_flag("--background", fit.background, "Add a linear background term c*I");
    fit_cmd->add_option("--compare", fit.compare, "Fit report (JSON) to compare against");
    add_output_options(fit_cmd, fit.output);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a two-level emitter photon stream");
    add_emitter_options(sim_cmd, sim.emitter);
    sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    sim_cmd->add_option("--out-b", sim.out_b, "Split through a 50/50 beamsplitter; detector B stream file");
    add_output_options(sim_cmd, sim.output);

    HbtOptions hbt;
    auto* hbt_cmd = app.add_subcommand("hbt", "Coincidence histogram and g2(tau)");
    add_emitter_options(hbt_cmd, hbt.emitter);
    hbt_cmd->add_option("--stream-a", hbt.stream_a, "Detector A stream CSV (instead of simulating)");
    hbt_cmd->add_option("--stream-b", hbt.stream_b, "Detector B stream CSV");
    hbt_cmd->add_option("--stream-duration", hbt.stream_duration, "Acquisition time of the stream files (s)");
    hbt_cmd->add_option("--bin-width-ns", hbt.bin_width_ns, "Histogram bin width (ns)")->capture_default_str();
    hbt_cmd->add_option("--tau-max-ns", hbt.tau_max_ns, "Largest |delay| (ns)")->capture_default_str();
    hbt_cmd->add_option("--seed", hbt.seed, "Random seed")->capture_default_str();
    add_output_options(hbt_cmd, hbt.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "nvsil: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (tir_cmd->parsed())
            return cmd_tir(tir, out);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep, out);
        if (eff_cmd->parsed())
            return cmd_efficiency(eff, out);
        if (fit_cmd->parsed())
            return cmd_fit_sat(fit, out);
        if (sim_cmd->parsed())
            return cmd_simulate(sim, out);
        if (hbt_cmd->parsed())
            return cmd_hbt(hbt, out, err);
    } catch (const IoError& e) {
        err << "nvsil: " << e.what() << "\n";
        return exit_io;
    } catch (const NumericalError& e) {
        err << "nvsil: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "nvsil: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "nvsil: internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_usage;
}

} // namespace nvsil::cli
