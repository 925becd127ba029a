#pragma once

// Transmitter side of the simulator: waveform constants, QAM symbol
// generation and the unitary IDFT that turns a subcarrier vector into one
// OFDM symbol of fast-time samples.

#include "mdattack/common.hpp"

#include <unsupported/Eigen/FFT>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace mdattack
{

/// Waveform and sampling constants shared by every stage of the pipeline.
///
/// The slow-time step is the interval between the sampled symbols of two
/// successive frames. It is decoupled from the symbol duration so that the
/// Doppler grid (PRF = 1/slow_time_step) can be sized for walking targets.
struct OfdmConfig
{
    int n_subcarriers = 64;
    double subcarrier_spacing = 312.5e3;
    double sample_rate = 20.0e6;
    double carrier_freq = 5.18e9;
    double symbol_duration = 3.2e-6;
    double slow_time_step = 1.0e-3;
    int n_frames = 5000;
    double noise_variance = 0.0;
    std::uint64_t rng_seed = 0;
    double bandwidth = 20.0e6;

    double prf() const { return 1.0 / slow_time_step; }
    double duration() const { return n_frames * slow_time_step; }
    /// Baseband frequency f_k = k * subcarrier_spacing.
    double subcarrier_freq(int k) const { return k * subcarrier_spacing; }
};

enum class ConfigPreset
{
    Wifi20MHz,
};

/// Throws ConfigError naming the first violated relation.
void validate(const OfdmConfig& cfg);

/// 802.11 20 MHz channel, 64 subcarriers, 1 kHz slow-time rate, 5 s.
OfdmConfig make_config(ConfigPreset preset);

/// Validated copy of explicitly supplied fields.
OfdmConfig make_config(const OfdmConfig& fields);

enum class Constellation
{
    QPSK,
    QAM16,
};

std::string_view to_string(Constellation c);
Constellation constellation_from_string(std::string_view name);

/// Unit-average-energy alphabet, indexed by the Gray-coded bit label.
///
/// QPSK (label b1b0): 00 -> (1+j)/sqrt2, 01 -> (-1+j)/sqrt2,
///                    11 -> (-1-j)/sqrt2, 10 -> (1-j)/sqrt2.
/// QAM16 (label i1i0q1q0): each axis Gray-maps 00 -> -3, 01 -> -1, 11 -> +1,
/// 10 -> +3, scaled by 1/sqrt10.
template <typename Scalar = double>
std::vector<Complex<Scalar>> alphabet(Constellation c)
{
    if (c == Constellation::QPSK)
    {
        const Scalar a = static_cast<Scalar>(1.0 / std::sqrt(2.0));
        return {{a, a}, {-a, a}, {a, -a}, {-a, -a}};
    }
    constexpr std::array<double, 4> level{-3.0, -1.0, 3.0, 1.0}; // index = 2-bit Gray label
    const double s = 1.0 / std::sqrt(10.0);
    std::vector<Complex<Scalar>> pts;
    pts.reserve(16);
    for (int label = 0; label < 16; ++label)
        pts.emplace_back(static_cast<Scalar>(level[label >> 2] * s), static_cast<Scalar>(level[label & 3] * s));
    return pts;
}

/// Index of the alphabet point nearest to `z` (hard decision).
template <typename Scalar>
int slice(std::span<const Complex<Scalar>> points, Complex<Scalar> z)
{
    int best = 0;
    Scalar best_d = std::norm(z - points[0]);
    for (int i = 1; i < static_cast<int>(points.size()); ++i)
    {
        const Scalar d = std::norm(z - points[i]);
        if (d < best_d)
        {
            best_d = d;
            best = i;
        }
    }
    return best;
}

/// N x M matrix of known preamble symbols, one column per frame.
template <typename Scalar = double>
struct SymbolMatrix
{
    CMatrix<Scalar> entries;
    Constellation constellation = Constellation::QPSK;

    Eigen::Index n_subcarriers() const { return entries.rows(); }
    Eigen::Index n_frames() const { return entries.cols(); }
};

/// i.i.d. uniform draws from the constellation; deterministic in `seed`.
template <typename Scalar = double>
SymbolMatrix<Scalar> generate_symbols(const OfdmConfig& cfg, Constellation constellation, std::uint64_t seed)
{
    const auto pts = alphabet<Scalar>(constellation);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pts.size()) - 1);

    SymbolMatrix<Scalar> out;
    out.constellation = constellation;
    out.entries.resize(cfg.n_subcarriers, cfg.n_frames);
    for (Eigen::Index m = 0; m < out.entries.cols(); ++m)
        for (Eigen::Index k = 0; k < out.entries.rows(); ++k)
            out.entries(k, m) = pts[pick(rng)];
    return out;
}

/// x[n] = (1/sqrt N) sum_k X[k] e^{j 2 pi n k / N}, applied to every column.
template <typename Derived>
CMatrix<typename Derived::RealScalar> idft_modulate_columns(const Eigen::MatrixBase<Derived>& freq)
{
    using Scalar = typename Derived::RealScalar;
    const Eigen::Index n = freq.rows();
    Eigen::FFT<Scalar> fft;
    CMatrix<Scalar> time(n, freq.cols());
    CVector<Scalar> in(n), out(n);
    const Scalar scale = std::sqrt(static_cast<Scalar>(n));
    for (Eigen::Index m = 0; m < freq.cols(); ++m)
    {
        in = freq.col(m);
        fft.inv(out, in);
        time.col(m) = out * scale;
    }
    return time;
}

/// Unitary DFT of every column; the inverse of idft_modulate_columns.
template <typename Derived>
CMatrix<typename Derived::RealScalar> dft_columns(const Eigen::MatrixBase<Derived>& time)
{
    using Scalar = typename Derived::RealScalar;
    const Eigen::Index n = time.rows();
    Eigen::FFT<Scalar> fft;
    CMatrix<Scalar> freq(n, time.cols());
    CVector<Scalar> in(n), out(n);
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n));
    for (Eigen::Index m = 0; m < time.cols(); ++m)
    {
        in = time.col(m);
        fft.fwd(out, in);
        freq.col(m) = out * scale;
    }
    return freq;
}

/// One OFDM symbol from one subcarrier vector of length N.
template <typename Derived>
CVector<typename Derived::RealScalar> idft_modulate(const OfdmConfig& cfg, const Eigen::MatrixBase<Derived>& symbols)
{
    if (symbols.cols() != 1 || symbols.rows() != cfg.n_subcarriers)
        throw DimensionError("idft_modulate: expected a length-" + std::to_string(cfg.n_subcarriers) +
                             " vector, got " + std::to_string(symbols.rows()) + "x" +
                             std::to_string(symbols.cols()));
    return idft_modulate_columns(symbols);
}

} // namespace mdattack
