#include "mdattack/simulation.hpp"

#include <cmath>

namespace mdattack
{

SimulationResult simulate(const Scenario& scenario, const AttackSchedule& schedule, const OfdmConfig& cfg,
                          const SimulationOptions& options)
{
    validate(cfg);
    if (static_cast<int>(schedule.per_frame.size()) != cfg.n_frames)
        throw DimensionError("simulate: attack schedule covers " + std::to_string(schedule.per_frame.size()) +
                             " frames, config has " + std::to_string(cfg.n_frames));

    SimulationResult r;
    r.symbols = generate_symbols<double>(cfg, options.constellation, options.symbol_seed);
    const auto transmitted = apply_precoding(r.symbols, schedule, cfg);
    auto cube = propagate_frames(
        transmitted, [&](int m) { return scatterer_states(scenario, cfg, m); }, cfg);

    r.noise_variance = cfg.noise_variance;
    if (options.snr_db)
        r.noise_variance = cube.samples.squaredNorm() / static_cast<double>(cube.samples.size()) /
                           std::pow(10.0, *options.snr_db / 10.0);
    cube = add_awgn(std::move(cube), r.noise_variance, options.noise_seed);

    r.z = remove_symbols(demodulate_fd(cube), r.symbols, cfg);
    r.series = aggregate_subcarriers(r.z);
    r.spectrogram = stft_spectrogram(r.series, options.stft, cfg.slow_time_step);
    return r;
}

} // namespace mdattack
