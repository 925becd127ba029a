#include "mdattack/ofdm_waveform.hpp"

#include <cmath>
#include <string>

namespace mdattack
{

namespace
{

bool close_rel(double a, double b, double tol = 1e-9)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

} // namespace

void validate(const OfdmConfig& cfg)
{
    if (cfg.n_subcarriers < 2)
        throw ConfigError("OfdmConfig: n_subcarriers >= 2 violated (N = " + std::to_string(cfg.n_subcarriers) + ")");
    if (cfg.n_frames < 2)
        throw ConfigError("OfdmConfig: n_frames >= 2 violated (M = " + std::to_string(cfg.n_frames) + ")");
    if (!(cfg.subcarrier_spacing > 0.0))
        throw ConfigError("OfdmConfig: subcarrier_spacing > 0 violated");
    if (!(cfg.noise_variance >= 0.0))
        throw ConfigError("OfdmConfig: noise_variance >= 0 violated");
    if (!(cfg.carrier_freq > 0.0))
        throw ConfigError("OfdmConfig: carrier_freq > 0 violated");
    if (!close_rel(cfg.sample_rate, cfg.n_subcarriers * cfg.subcarrier_spacing))
        throw ConfigError("OfdmConfig: sample_rate = n_subcarriers * subcarrier_spacing violated");
    if (!close_rel(cfg.symbol_duration, cfg.n_subcarriers / cfg.sample_rate))
        throw ConfigError("OfdmConfig: symbol_duration = n_subcarriers / sample_rate violated");
    if (cfg.slow_time_step < cfg.symbol_duration * (1.0 - 1e-12))
        throw ConfigError("OfdmConfig: slow_time_step >= symbol_duration violated");
}

OfdmConfig make_config(ConfigPreset preset)
{
    switch (preset)
    {
    case ConfigPreset::Wifi20MHz:
        break;
    }
    OfdmConfig cfg;
    cfg.n_subcarriers = 64;
    cfg.subcarrier_spacing = 312.5e3;
    cfg.sample_rate = 20.0e6;
    cfg.symbol_duration = 64.0 / 20.0e6;
    cfg.carrier_freq = 5.18e9;
    cfg.slow_time_step = 1.0e-3;
    cfg.n_frames = 5000;
    cfg.bandwidth = 20.0e6;
    validate(cfg);
    return cfg;
}

OfdmConfig make_config(const OfdmConfig& fields)
{
    validate(fields);
    return fields;
}

std::string_view to_string(Constellation c)
{
    return c == Constellation::QPSK ? "QPSK" : "QAM16";
}

Constellation constellation_from_string(std::string_view name)
{
    if (name == "QPSK")
        return Constellation::QPSK;
    if (name == "QAM16")
        return Constellation::QAM16;
    throw ConfigError("unknown constellation '" + std::string(name) + "'");
}

} // namespace mdattack
