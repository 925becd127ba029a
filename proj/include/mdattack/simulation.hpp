#pragma once

// End-to-end run of one scenario: preamble symbols -> attack pre-coding ->
// reflection channel -> AWGN -> sensing receiver -> spectrogram.

#include "mdattack/attack.hpp"
#include "mdattack/channel.hpp"
#include "mdattack/receiver.hpp"
#include "mdattack/target_kinematics.hpp"

#include <cstdint>
#include <optional>

namespace mdattack
{

struct SimulationOptions
{
    StftParams stft;
    Constellation constellation = Constellation::QPSK;
    /// When set, the noise variance is chosen so that mean received power
    /// over noise power equals this value; otherwise cfg.noise_variance.
    std::optional<double> snr_db;
    std::uint64_t symbol_seed = 0;
    std::uint64_t noise_seed = 0;
};

struct SimulationResult
{
    SymbolMatrix<double> symbols;
    ZMatrix<double> z;
    CVector<double> series;
    Spectrogram<double> spectrogram;
    double noise_variance = 0.0;
};

SimulationResult simulate(const Scenario& scenario, const AttackSchedule& schedule, const OfdmConfig& cfg,
                          const SimulationOptions& options);

} // namespace mdattack
