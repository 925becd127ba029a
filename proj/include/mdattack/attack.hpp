#pragma once

// Transmitter-side micro-Doppler attack. Every symbol of frame m is multiplied
// by a diagonal pre-coder with entries
//
//     P_m[k] = e^{j 2 pi f_sp,m m T_slow} * e^{-j 2 pi f_k R_sp,m / c}
//
// which injects a fake Doppler f_sp and a fake range R_sp into the sensing
// receiver's view of every reflector. The slow-time term is constant within a
// frame, so the nominal link sees a unit-modulus flat gain per subcarrier.

#include "mdattack/common.hpp"
#include "mdattack/ofdm_waveform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdattack
{

enum class AttackScheme
{
    NONE,
    CONSTANT,
    RANDOM,
};

inline constexpr std::array<AttackScheme, 3> kAllSchemes{AttackScheme::NONE, AttackScheme::CONSTANT,
                                                         AttackScheme::RANDOM};

std::string_view to_string(AttackScheme scheme);
AttackScheme scheme_from_string(std::string_view name);

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;
};

struct SpoofParams
{
    double doppler = 0.0; // f_sp, Hz
    double range = 0.0;   // R_sp, m

    friend bool operator==(const SpoofParams&, const SpoofParams&) = default;
};

struct AttackParams
{
    SpoofParams constant{100.0, 50.0};
    Interval doppler_range{50.0, 200.0};
    Interval range_range{10.0, 200.0};
};

struct AttackSchedule
{
    AttackScheme scheme = AttackScheme::NONE;
    std::vector<SpoofParams> per_frame;
    std::uint64_t rng_seed = 0;
    Interval doppler_range{50.0, 200.0};
    Interval range_range{10.0, 200.0};
};

/// NONE: all zeros. CONSTANT: params.constant on every frame. RANDOM: f_sp and
/// R_sp drawn independently and uniformly per frame. Throws ConfigError on an
/// inverted interval.
AttackSchedule make_schedule(AttackScheme scheme, const OfdmConfig& cfg, const AttackParams& params,
                             std::uint64_t seed);

template <typename Scalar = double>
CVector<Scalar> precoder_diagonal(const AttackSchedule& schedule, const OfdmConfig& cfg, int frame)
{
    if (frame < 0 || frame >= static_cast<int>(schedule.per_frame.size()))
        throw std::out_of_range("precoder_diagonal: frame " + std::to_string(frame) + " out of range");
    const SpoofParams sp = schedule.per_frame[frame];
    const double slow_cycles = sp.doppler * frame * cfg.slow_time_step;
    const std::complex<double> frame_term = phasor(slow_cycles - std::floor(slow_cycles));
    const double delay_cycles = cfg.subcarrier_spacing * sp.range / kSpeedOfLight;

    CVector<Scalar> d(cfg.n_subcarriers);
    for (int k = 0; k < cfg.n_subcarriers; ++k)
    {
        const double c = k * delay_cycles;
        const std::complex<double> v = frame_term * phasor(-(c - std::floor(c)));
        d(k) = Complex<Scalar>(static_cast<Scalar>(v.real()), static_cast<Scalar>(v.imag()));
    }
    return d;
}

/// N x M matrix whose column m is precoder_diagonal(m).
template <typename Scalar = double>
CMatrix<Scalar> precoder_matrix(const AttackSchedule& schedule, const OfdmConfig& cfg)
{
    CMatrix<Scalar> p(cfg.n_subcarriers, static_cast<Eigen::Index>(schedule.per_frame.size()));
    for (Eigen::Index m = 0; m < p.cols(); ++m)
        p.col(m) = precoder_diagonal<Scalar>(schedule, cfg, static_cast<int>(m));
    return p;
}

template <typename Scalar>
SymbolMatrix<Scalar> apply_precoding(const SymbolMatrix<Scalar>& symbols, const AttackSchedule& schedule,
                                     const OfdmConfig& cfg)
{
    if (symbols.entries.rows() != cfg.n_subcarriers ||
        symbols.entries.cols() != static_cast<Eigen::Index>(schedule.per_frame.size()))
        throw DimensionError("apply_precoding: symbol matrix shape does not match schedule/config");
    if (schedule.scheme == AttackScheme::NONE)
        return symbols;
    SymbolMatrix<Scalar> out = symbols;
    for (Eigen::Index m = 0; m < out.entries.cols(); ++m)
        out.entries.col(m) = out.entries.col(m).cwiseProduct(precoder_diagonal<Scalar>(schedule, cfg, static_cast<int>(m)));
    return out;
}

} // namespace mdattack
