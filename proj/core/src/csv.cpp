// SPDX-License-Identifier: Apache-2.0
#include "nvsil/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace nvsil::csv {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in)
        : in_{in}
    {
    }

    bool next(std::string& line)
    {
        while (std::getline(in_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty())
                return true;
        }
        return false;
    }

    [[nodiscard]] int number() const { return number_; }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("csv line " + std::to_string(number_) + ": " + what);
    }

private:
    std::istream& in_;
    int number_ = 0;
};

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

void expect_header(LineReader& reader, std::string_view expected)
{
    std::string line;
    if (!reader.next(line))
        reader.fail("missing header '" + std::string(expected) + "'");
    if (trim(line) != expected)
        reader.fail("expected header '" + std::string(expected) + "', got '" + line + "'");
}

double field_double(const LineReader& reader, std::string_view text)
{
    try {
        return parse_double(text);
    } catch (const std::invalid_argument& e) {
        reader.fail(e.what());
    }
}

std::uint64_t field_count(const LineReader& reader, std::string_view text)
{
    text = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        reader.fail("invalid count '" + std::string(text) + "'");
    return v;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw std::invalid_argument("invalid number '" + std::string(text) + "'");
    return v;
}

void write_stream(std::ostream& out, const PhotonStream& stream)
{
    out << "t_seconds\n";
    for (double t : stream.timestamps())
        out << format_double(t) << '\n';
}

PhotonStream read_stream(std::istream& in, std::optional<double> duration, Channel channel)
{
    LineReader reader{in};
    expect_header(reader, "t_seconds");
    std::vector<double> ts;
    std::string line;
    while (reader.next(line)) {
        if (split(line).size() != 1)
            reader.fail("expected a single column");
        const double t = field_double(reader, line);
        if (!ts.empty() && !(t > ts.back()))
            reader.fail("timestamps must be strictly increasing");
        if (t < 0.0)
            reader.fail("negative timestamp");
        ts.push_back(t);
    }
    const double d = duration.value_or(ts.empty() ? 0.0 : ts.back());
    return PhotonStream{std::move(ts), d, channel};
}

void write_histogram(std::ostream& out, const CoincidenceHistogram& histogram)
{
    out << "tau_seconds,counts,g2\n";
    for (std::size_t i = 0; i < histogram.counts.size(); ++i)
        out << format_double(histogram.tau[i]) << ',' << histogram.counts[i] << ','
            << format_double(histogram.g2[i]) << '\n';
}

CoincidenceHistogram read_histogram(std::istream& in)
{
    LineReader reader{in};
    expect_header(reader, "tau_seconds,counts,g2");
    CoincidenceHistogram h;
    std::string line;
    while (reader.next(line)) {
        const auto f = split(line);
        if (f.size() != 3)
            reader.fail("expected 3 columns");
        h.tau.push_back(field_double(reader, f[0]));
        h.counts.push_back(field_count(reader, f[1]));
        h.g2.push_back(field_double(reader, f[2]));
    }
    if (h.tau.size() % 2 == 0)
        throw std::invalid_argument("histogram must have an odd number of symmetric bins");
    h.half_bins = static_cast<int>(h.tau.size() / 2);
    if (h.tau.size() > 1)
        h.bin_width = h.tau[1] - h.tau[0];
    return h;
}

void write_curve(std::ostream& out, const EfficiencyCurve& curve)
{
    out << "na,eta_planar,eta_sil,ratio\n";
    for (const CurveSample& s : curve.samples) {
        out << format_double(s.na) << ',' << format_double(s.eta_planar) << ',' << format_double(s.eta_sil) << ',';
        if (s.ratio)
            out << format_double(*s.ratio);
        out << '\n';
    }
}

EfficiencyCurve read_curve(std::istream& in)
{
    LineReader reader{in};
    expect_header(reader, "na,eta_planar,eta_sil,ratio");
    EfficiencyCurve curve;
    std::string line;
    while (reader.next(line)) {
        const auto f = split(line);
        if (f.size() != 4)
            reader.fail("expected 4 columns");
        CurveSample s;
        s.na = field_double(reader, f[0]);
        s.eta_planar = field_double(reader, f[1]);
        s.eta_sil = field_double(reader, f[2]);
        if (!trim(f[3]).empty())
            s.ratio = field_double(reader, f[3]);
        if (!curve.samples.empty() && !(s.na > curve.samples.back().na))
            reader.fail("na must be strictly increasing");
        curve.samples.push_back(s);
    }
    return curve;
}

void write_saturation(std::ostream& out, const SaturationDataset& data)
{
    const bool errors = data.has_errors();
    out << (errors ? "intensity_uW,rate_cps,rate_err_cps\n" : "intensity_uW,rate_cps\n");
    for (const SaturationPoint& p : data.points) {
        out << format_double(p.intensity_uw) << ',' << format_double(p.rate_cps);
        if (errors)
            out << ',' << format_double(*p.rate_err_cps);
        out << '\n';
    }
}

SaturationDataset read_saturation(std::istream& in)
{
    LineReader reader{in};
    std::string line;
    if (!reader.next(line))
        reader.fail("missing header 'intensity_uW,rate_cps[,rate_err_cps]'");
    const std::string header{trim(line)};
    bool with_errors = false;
    if (header == "intensity_uW,rate_cps,rate_err_cps")
        with_errors = true;
    else if (header != "intensity_uW,rate_cps")
        reader.fail("expected header 'intensity_uW,rate_cps[,rate_err_cps]', got '" + line + "'");

    SaturationDataset data;
    const std::size_t columns = with_errors ? 3 : 2;
    while (reader.next(line)) {
        const auto f = split(line);
        if (f.size() != columns)
            reader.fail("expected " + std::to_string(columns) + " columns");
        SaturationPoint p;
        p.intensity_uw = field_double(reader, f[0]);
        p.rate_cps = field_double(reader, f[1]);
        if (with_errors)
            p.rate_err_cps = field_double(reader, f[2]);
        if (p.intensity_uw < 0.0)
            reader.fail("negative intensity");
        data.points.push_back(p);
    }
    return data;
}

} // namespace nvsil::csv
