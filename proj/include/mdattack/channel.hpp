#pragma once

// Multipath reflection channel: each frame's OFDM symbol is scaled per
// subcarrier by the sum of the scatterer paths, taken back to fast time by the
// IDFT, and optionally corrupted by receiver AWGN.
//
// Doppler is a frame-constant phasor per path. There is no intra-symbol
// Doppler and therefore no channel-induced inter-carrier interference.

#include "mdattack/common.hpp"
#include "mdattack/ofdm_waveform.hpp"
#include "mdattack/target_kinematics.hpp"

#include <cmath>
#include <concepts>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mdattack
{

/// Fast-time x slow-time received samples y[n, m].
template <typename Scalar = double>
struct DataCube
{
    CMatrix<Scalar> samples;
    OfdmConfig cfg;

    bool all_finite() const { return samples.allFinite(); }
};

/// Per-subcarrier gain of frame `frame`:
/// H[k] = sum_l a_l e^{j 2 pi f_D,l m T_slow} e^{-j 2 pi f_k R_l / c}.
template <typename Scalar = double>
CVector<Scalar> channel_diagonal(std::span<const ScattererState> states, const OfdmConfig& cfg, int frame)
{
    if (states.empty())
        throw std::invalid_argument("channel_diagonal: empty scatterer list");
    if (frame < 0 || frame >= cfg.n_frames)
        throw std::out_of_range("channel_diagonal: frame " + std::to_string(frame) + " out of range");

    const double slow_time = frame * cfg.slow_time_step;
    std::vector<std::complex<double>> acc(cfg.n_subcarriers, {0.0, 0.0});
    for (const auto& s : states)
    {
        const std::complex<double> frame_gain = s.amplitude * phasor(s.doppler * slow_time);
        const double delay_cycles = cfg.subcarrier_spacing * s.bistatic_range / kSpeedOfLight;
        for (int k = 0; k < cfg.n_subcarriers; ++k)
        {
            const double c = k * delay_cycles;
            acc[k] += frame_gain * phasor(-(c - std::floor(c)));
        }
    }
    CVector<Scalar> h(cfg.n_subcarriers);
    for (int k = 0; k < cfg.n_subcarriers; ++k)
        h(k) = Complex<Scalar>(static_cast<Scalar>(acc[k].real()), static_cast<Scalar>(acc[k].imag()));
    return h;
}

/// Column m = IDFT(H_m .* P_m .* X[:, m]), with P_m the optional per-frame
/// pre-coder column. `states_of(m)` yields the scatterer list of frame m.
template <typename Scalar, std::invocable<int> StatesFn>
DataCube<Scalar> propagate_frames(const SymbolMatrix<Scalar>& symbols, StatesFn&& states_of, const OfdmConfig& cfg,
                                  const CMatrix<Scalar>* attack_diag = nullptr)
{
    const auto& x = symbols.entries;
    if (x.rows() != cfg.n_subcarriers || x.cols() != cfg.n_frames)
        throw DimensionError("propagate_frames: symbol matrix is " + std::to_string(x.rows()) + "x" +
                             std::to_string(x.cols()) + ", config wants " + std::to_string(cfg.n_subcarriers) +
                             "x" + std::to_string(cfg.n_frames));
    if (attack_diag && (attack_diag->rows() != x.rows() || attack_diag->cols() != x.cols()))
        throw DimensionError("propagate_frames: pre-coder shape does not match the symbol matrix");

    CMatrix<Scalar> freq(x.rows(), x.cols());
    for (int m = 0; m < cfg.n_frames; ++m)
    {
        const auto& states = states_of(m);
        freq.col(m) = channel_diagonal<Scalar>(std::span<const ScattererState>(states), cfg, m).cwiseProduct(x.col(m));
        if (attack_diag)
            freq.col(m) = freq.col(m).cwiseProduct(attack_diag->col(m));
    }
    return {idft_modulate_columns(freq), cfg};
}

/// Overload for precomputed per-frame state lists.
template <typename Scalar>
DataCube<Scalar> propagate_frames(const SymbolMatrix<Scalar>& symbols,
                                  const std::vector<std::vector<ScattererState>>& per_frame, const OfdmConfig& cfg,
                                  const CMatrix<Scalar>* attack_diag = nullptr)
{
    if (static_cast<int>(per_frame.size()) != cfg.n_frames)
        throw DimensionError("propagate_frames: need scatterer states for all " + std::to_string(cfg.n_frames) +
                             " frames, got " + std::to_string(per_frame.size()));
    return propagate_frames(
        symbols, [&](int m) -> const std::vector<ScattererState>& { return per_frame[m]; }, cfg, attack_diag);
}

/// i.i.d. circularly-symmetric complex Gaussian noise of variance `variance`
/// per sample. Column m draws from its own stream seeded by (seed, m).
template <typename Scalar>
DataCube<Scalar> add_awgn(DataCube<Scalar> cube, double variance, std::uint64_t seed)
{
    if (!(variance >= 0.0))
        throw std::invalid_argument("add_awgn: negative noise variance");
    if (variance == 0.0)
        return cube;
    const double sigma = std::sqrt(variance / 2.0);
    for (Eigen::Index m = 0; m < cube.samples.cols(); ++m)
    {
        std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(m)}));
        std::normal_distribution<double> g(0.0, sigma);
        for (Eigen::Index n = 0; n < cube.samples.rows(); ++n)
        {
            const double re = g(rng);
            const double im = g(rng);
            cube.samples(n, m) += Complex<Scalar>(static_cast<Scalar>(re), static_cast<Scalar>(im));
        }
    }
    return cube;
}

} // namespace mdattack
