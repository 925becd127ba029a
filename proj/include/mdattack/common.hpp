#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mdattack
{

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e^{j*2*pi*cycles}, evaluated in double and narrowed to Scalar.
template <typename Scalar = double>
inline Complex<Scalar> phasor(double cycles)
{
    const double phase = kTwoPi * cycles;
    return {static_cast<Scalar>(std::cos(phase)), static_cast<Scalar>(std::sin(phase))};
}

/// Raised when a configuration violates one of its invariants.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised on shape/length disagreements between operands.
class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// splitmix64 finalizer; used to derive independent per-item seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t h = mix_seed(base);
    for (auto t : tags)
        h = mix_seed(h ^ mix_seed(t));
    return h;
}

} // namespace mdattack
