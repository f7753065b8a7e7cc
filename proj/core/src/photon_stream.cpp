// SPDX-License-Identifier: Apache-2.0
#include "nvsil/photon_stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nvsil/random.hpp"

namespace nvsil {

namespace {

// Substream indices derived from the user seed.
constexpr std::uint64_t emitter_substream = 0;
constexpr std::uint64_t background_substream = 1;
constexpr std::uint64_t splitter_substream = 2;

bool non_negative_rate(double r)
{
    return std::isfinite(r) && r >= 0.0;
}

} // namespace

void TwoLevelEmitterParams::validate() const
{
    if (!non_negative_rate(pump_rate) || !non_negative_rate(background_rate))
        throw std::invalid_argument("TwoLevelEmitterParams: rates must be finite and >= 0");
    if (!(decay_rate > 0.0) || !std::isfinite(decay_rate))
        throw std::invalid_argument("TwoLevelEmitterParams: decay_rate must be positive");
    if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0))
        throw std::invalid_argument("TwoLevelEmitterParams: detection_efficiency must lie in (0, 1]");
}

double TwoLevelEmitterParams::signal_rate() const
{
    return detection_efficiency * pump_rate * decay_rate / (pump_rate + decay_rate);
}

double TwoLevelEmitterParams::signal_fraction() const
{
    const double s = signal_rate();
    const double all = s + background_rate;
    return all > 0.0 ? s / all : 0.0;
}

double background_rate_for_signal_fraction(const TwoLevelEmitterParams& params, double rho)
{
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("signal fraction must lie in (0, 1]");
    return params.signal_rate() * (1.0 - rho) / rho;
}

PhotonStream::PhotonStream(std::vector<double> timestamps, double duration, Channel channel)
    : timestamps_{std::move(timestamps)}
    , duration_{duration}
    , channel_{channel}
{
    if (!(duration >= 0.0) || !std::isfinite(duration))
        throw std::invalid_argument("PhotonStream: duration must be finite and >= 0");
    for (std::size_t i = 0; i < timestamps_.size(); ++i) {
        const double t = timestamps_[i];
        if (!(t >= 0.0 && t <= duration_))
            throw std::invalid_argument("PhotonStream: timestamp " + std::to_string(i) + " outside [0, duration]");
        if (i > 0 && !(t > timestamps_[i - 1]))
            throw std::invalid_argument("PhotonStream: timestamps must be strictly increasing (index "
                + std::to_string(i) + ")");
    }
}

double PhotonStream::mean_rate() const
{
    return duration_ > 0.0 ? static_cast<double>(timestamps_.size()) / duration_ : 0.0;
}

PhotonStream simulate_two_level_stream(const TwoLevelEmitterParams& params, double duration, std::uint64_t seed)
{
    params.validate();
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw std::invalid_argument("simulate_two_level_stream: duration must be positive");

    std::vector<double> signal;
    if (params.pump_rate > 0.0) {
        Engine rng = make_engine(seed, emitter_substream);
        signal.reserve(static_cast<std::size_t>(params.signal_rate() * duration * 1.1) + 16);
        double t = 0.0;
        for (;;) {
            t += exponential(rng, params.pump_rate);
            t += exponential(rng, params.decay_rate);
            if (t > duration)
                break;
            if (bernoulli(rng, params.detection_efficiency))
                signal.push_back(t);
        }
    }

    std::vector<double> background;
    if (params.background_rate > 0.0) {
        Engine rng = make_engine(seed, background_substream);
        background.reserve(static_cast<std::size_t>(params.background_rate * duration * 1.1) + 16);
        for (double t = exponential(rng, params.background_rate); t <= duration;
             t += exponential(rng, params.background_rate))
            background.push_back(t);
    }

    std::vector<double> merged(signal.size() + background.size());
    std::merge(signal.begin(), signal.end(), background.begin(), background.end(), merged.begin());

    // Exact ties between the two sources are vanishingly rare but would break
    // strict ordering; nudge them by one ulp.
    std::size_t kept = 0;
    for (double t : merged) {
        if (kept > 0 && t <= merged[kept - 1])
            t = std::nextafter(merged[kept - 1], std::numeric_limits<double>::infinity());
        if (t > duration)
            break;
        merged[kept++] = t;
    }
    merged.resize(kept);
    return PhotonStream{std::move(merged), duration};
}

std::pair<PhotonStream, PhotonStream> hbt_split(const PhotonStream& stream, std::uint64_t seed)
{
    Engine rng = make_engine(seed, splitter_substream);
    std::vector<double> a;
    std::vector<double> b;
    a.reserve(stream.size() / 2 + 16);
    b.reserve(stream.size() / 2 + 16);
    for (double t : stream.timestamps())
        (bernoulli(rng, 0.5) ? a : b).push_back(t);
    return {PhotonStream{std::move(a), stream.duration(), Channel::A},
        PhotonStream{std::move(b), stream.duration(), Channel::B}};
}

} // namespace nvsil
