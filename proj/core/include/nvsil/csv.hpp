// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Plain CSV files exchanged by the command-line tools.
//
//   photon stream      t_seconds
//   histogram          tau_seconds,counts,g2
//   efficiency curve   na,eta_planar,eta_sil,ratio    (ratio empty if absent)
//   saturation data    intensity_uW,rate_cps[,rate_err_cps]
//
// Floats are written in the shortest form that round-trips, so reading a
// file written here and writing it again reproduces the same bytes.
// Readers throw std::invalid_argument with a line number on malformed input.
//---------------------------------------------------------------------------//
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "nvsil/collection_efficiency.hpp"
#include "nvsil/correlation.hpp"
#include "nvsil/photon_stream.hpp"
#include "nvsil/saturation.hpp"

namespace nvsil::csv {

std::string format_double(double v);
double parse_double(std::string_view text);

void write_stream(std::ostream& out, const PhotonStream& stream);
/// Duration defaults to the last timestamp when not given.
PhotonStream read_stream(std::istream& in, std::optional<double> duration = std::nullopt,
    Channel channel = Channel::Combined);

void write_histogram(std::ostream& out, const CoincidenceHistogram& histogram);
/// Restores tau, counts, g2, bin_width and half_bins; rates and duration are
/// not stored in the file and are left at zero.
CoincidenceHistogram read_histogram(std::istream& in);

void write_curve(std::ostream& out, const EfficiencyCurve& curve);
EfficiencyCurve read_curve(std::istream& in);

void write_saturation(std::ostream& out, const SaturationDataset& data);
SaturationDataset read_saturation(std::istream& in);

} // namespace nvsil::csv
