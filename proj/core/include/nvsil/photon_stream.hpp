// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
// Detection-time streams from a continuously pumped two-level emitter.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace nvsil {

/// Rates in 1/s. detection_efficiency is the probability that an emitted
/// photon produces a click; background_rate is an independent Poissonian
/// click rate added on top.
struct TwoLevelEmitterParams {
    double pump_rate = 0.0;
    double decay_rate = 1.0;
    double detection_efficiency = 1.0;
    double background_rate = 0.0;

    void validate() const;

    /// Mean detected emitter click rate, eff * pump * decay / (pump + decay).
    [[nodiscard]] double signal_rate() const;
    /// Fraction of all clicks that come from the emitter (0 with no light).
    [[nodiscard]] double signal_fraction() const;
};

/// Background rate that makes signal_fraction() equal rho, rho in (0, 1].
double background_rate_for_signal_fraction(const TwoLevelEmitterParams& params, double rho);

enum class Channel { Combined, A, B };

/// Strictly increasing detection times (s) inside [0, duration].
class PhotonStream {
public:
    PhotonStream() = default;
    /// Throws std::invalid_argument if timestamps are not strictly
    /// increasing or fall outside [0, duration].
    PhotonStream(std::vector<double> timestamps, double duration, Channel channel = Channel::Combined);

    [[nodiscard]] const std::vector<double>& timestamps() const { return timestamps_; }
    [[nodiscard]] double duration() const { return duration_; }
    [[nodiscard]] Channel channel() const { return channel_; }
    [[nodiscard]] std::size_t size() const { return timestamps_.size(); }
    [[nodiscard]] bool empty() const { return timestamps_.empty(); }
    [[nodiscard]] double mean_rate() const;

    friend bool operator==(const PhotonStream&, const PhotonStream&) = default;

private:
    std::vector<double> timestamps_;
    double duration_ = 0.0;
    Channel channel_ = Channel::Combined;
};

/// Alternating Exp(pump) excitation and Exp(decay) emission waits starting
/// in the ground state at t = 0, each emission kept with probability
/// detection_efficiency, merged with Poissonian background clicks.
/// Emitter and background use separate substreams of `seed`.
PhotonStream simulate_two_level_stream(const TwoLevelEmitterParams& params, double duration, std::uint64_t seed);

/// Routes each event independently to detector A or B with probability 1/2.
std::pair<PhotonStream, PhotonStream> hbt_split(const PhotonStream& stream, std::uint64_t seed);

} // namespace nvsil
