#pragma once

// Passive sensing receiver.
//
//   cube --DFT--> Y --(./ X)--> Z --sum over k--> s[m] --STFT--> spectrogram
//                                \--2D DFT--> range-Doppler map
//
// plus the nominal communication receiver (per-subcarrier LS equalization),
// used to show the pre-coder costs the data link nothing.

#include "mdattack/channel.hpp"
#include "mdattack/common.hpp"
#include "mdattack/ofdm_waveform.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mdattack
{

/// Y = F y per column (unitary DFT over fast time).
template <typename Scalar>
CMatrix<Scalar> demodulate_fd(const DataCube<Scalar>& cube)
{
    return dft_columns(cube.samples);
}

/// Z = Y ./ X: channel (and pre-coder) response per subcarrier and frame.
template <typename Scalar = double>
struct ZMatrix
{
    CMatrix<Scalar> entries;
    OfdmConfig cfg;
};

template <typename Scalar>
ZMatrix<Scalar> remove_symbols(const CMatrix<Scalar>& freq, const SymbolMatrix<Scalar>& symbols, const OfdmConfig& cfg)
{
    const auto& x = symbols.entries;
    if (freq.rows() != x.rows() || freq.cols() != x.cols())
        throw DimensionError("remove_symbols: received and known symbol matrices differ in shape");
    if ((x.array().abs() == Scalar(0)).any())
        throw std::domain_error("remove_symbols: known symbol with zero magnitude");
    return {freq.cwiseQuotient(x), cfg};
}

/// s[m] = sum_k Z[k, m].
template <typename Scalar>
CVector<Scalar> aggregate_subcarriers(const ZMatrix<Scalar>& z)
{
    return z.entries.colwise().sum().transpose();
}

struct StftParams
{
    int window_len = 128;
    int fft_len = 144;
    int hop = 11;
    int max_time_bins = 440; ///< crop; 0 keeps every full window
    double floor_db = 60.0;  ///< dynamic range kept below the peak
};

/// Time x Doppler image in [0, 1]. Doppler column j sits at
/// (j - (fft_len - 1) / 2) * doppler_step, so the axis covers
/// (-PRF/2, +PRF/2] with DC at column (fft_len - 1) / 2.
template <typename Scalar = double>
struct Spectrogram
{
    RMatrix<Scalar> values;
    double time_step = 0.0;    ///< s between successive time bins
    double time_origin = 0.0;  ///< s, centre of the first window
    double doppler_step = 0.0; ///< Hz per Doppler bin
    StftParams params;

    Eigen::Index n_time() const { return values.rows(); }
    Eigen::Index n_doppler() const { return values.cols(); }
    int dc_column() const { return (params.fft_len - 1) / 2; }
    double doppler_of(Eigen::Index col) const { return (static_cast<double>(col) - dc_column()) * doppler_step; }
    double time_of(Eigen::Index row) const { return time_origin + static_cast<double>(row) * time_step; }
    /// Column whose centre frequency is nearest to `hz` (no wrapping).
    Eigen::Index column_of(double hz) const
    {
        const auto col = static_cast<Eigen::Index>(std::lround(hz / doppler_step)) + dc_column();
        return std::clamp<Eigen::Index>(col, 0, n_doppler() - 1);
    }
};

/// Maps FFT output index to DC-centred column: column j holds bin j - (F-1)/2.
inline int centred_source_index(int column, int fft_len)
{
    const int bin = column - (fft_len - 1) / 2;
    return (bin % fft_len + fft_len) % fft_len;
}

/// Converts a power image to dB, clips it `floor_db` below its peak and
/// min-max normalizes to [0, 1]. An all-zero input stays all zero.
template <typename Scalar>
RMatrix<Scalar> normalize_db(const Eigen::MatrixXd& power, double floor_db)
{
    const double peak = power.maxCoeff();
    if (!(peak > 0.0))
        return RMatrix<Scalar>::Zero(power.rows(), power.cols());
    const double top = 10.0 * std::log10(peak);
    const double bottom = top - floor_db;
    Eigen::MatrixXd db = power.unaryExpr([bottom](double p) {
        return p > 0.0 ? std::max(10.0 * std::log10(p), bottom) : bottom;
    });
    const double lo = db.minCoeff();
    const double hi = db.maxCoeff();
    if (hi - lo <= 0.0)
        return RMatrix<Scalar>::Ones(power.rows(), power.cols());
    return ((db.array() - lo) / (hi - lo)).matrix().template cast<Scalar>();
}

/// Hann-windowed STFT of a slow-time series, magnitude squared, dB, normalized.
template <typename Derived>
Spectrogram<typename Derived::RealScalar> stft_spectrogram(const Eigen::MatrixBase<Derived>& series,
                                                           const StftParams& params, double slow_time_step)
{
    using Scalar = typename Derived::RealScalar;
    const Eigen::Index len = series.size();
    if (params.window_len < 1 || params.hop < 1 || params.fft_len < params.window_len)
        throw ConfigError("stft: need window_len >= 1, hop >= 1 and fft_len >= window_len");
    if (len < params.window_len)
        throw std::invalid_argument("stft: series of length " + std::to_string(len) + " is shorter than the window (" +
                                    std::to_string(params.window_len) + ")");

    Eigen::Index n_time = (len - params.window_len) / params.hop + 1;
    if (params.max_time_bins > 0)
        n_time = std::min<Eigen::Index>(n_time, params.max_time_bins);

    const int L = params.window_len;
    Eigen::VectorXd window(L);
    for (int i = 0; i < L; ++i)
        window(i) = L == 1 ? 1.0 : 0.5 - 0.5 * std::cos(kTwoPi * i / (L - 1));

    Eigen::FFT<double> fft;
    Eigen::VectorXcd frame = Eigen::VectorXcd::Zero(params.fft_len);
    Eigen::VectorXcd spectrum(params.fft_len);
    Eigen::MatrixXd power(n_time, params.fft_len);
    for (Eigen::Index t = 0; t < n_time; ++t)
    {
        const Eigen::Index start = t * params.hop;
        for (int i = 0; i < L; ++i)
        {
            const auto v = series(start + i);
            frame(i) = std::complex<double>(static_cast<double>(v.real()), static_cast<double>(v.imag())) * window(i);
        }
        fft.fwd(spectrum, frame);
        for (int j = 0; j < params.fft_len; ++j)
            power(t, j) = std::norm(spectrum(centred_source_index(j, params.fft_len)));
    }

    Spectrogram<Scalar> spec;
    spec.values = normalize_db<Scalar>(power, params.floor_db);
    spec.time_step = params.hop * slow_time_step;
    spec.time_origin = 0.5 * (L - 1) * slow_time_step;
    spec.doppler_step = 1.0 / (params.fft_len * slow_time_step);
    spec.params = params;
    return spec;
}

/// Mean over time bins of the Shannon entropy (bits) of each Doppler profile,
/// each profile normalized to unit sum. Time bins with zero total count as 0.
template <typename Scalar>
double spectral_entropy(const Spectrogram<Scalar>& spec)
{
    if (spec.values.size() == 0 || !(spec.values.maxCoeff() > Scalar(0)))
        throw std::domain_error("spectral_entropy: all-zero spectrogram");
    double total = 0.0;
    for (Eigen::Index t = 0; t < spec.values.rows(); ++t)
    {
        const auto row = spec.values.row(t).template cast<double>();
        const double sum = row.sum();
        if (sum <= 0.0)
            continue;
        double h = 0.0;
        for (Eigen::Index j = 0; j < row.size(); ++j)
        {
            const double p = row(j) / sum;
            if (p > 0.0)
                h -= p * std::log2(p);
        }
        total += h;
    }
    return total / static_cast<double>(spec.values.rows());
}

/// Per-time-bin Doppler (Hz) of the strongest column.
template <typename Scalar>
std::vector<double> ridge(const Spectrogram<Scalar>& spec)
{
    std::vector<double> out(spec.n_time());
    for (Eigen::Index t = 0; t < spec.n_time(); ++t)
    {
        Eigen::Index col = 0;
        spec.values.row(t).maxCoeff(&col);
        out[t] = spec.doppler_of(col);
    }
    return out;
}

/// |2D DFT| of Z: rows are range bins (IDFT over subcarriers), columns are
/// DC-centred Doppler bins (DFT over frames).
template <typename Scalar = double>
struct RangeDopplerMap
{
    RMatrix<Scalar> values;
    double range_step = 0.0;   ///< m per range bin, c / (N * delta_f)
    double doppler_step = 0.0; ///< Hz per Doppler bin, 1 / (M * T_slow)

    Eigen::Index n_range() const { return values.rows(); }
    Eigen::Index n_doppler() const { return values.cols(); }
    int dc_column() const { return static_cast<int>((n_doppler() - 1) / 2); }
    double range_of(Eigen::Index row) const { return static_cast<double>(row) * range_step; }
    double doppler_of(Eigen::Index col) const { return (static_cast<double>(col) - dc_column()) * doppler_step; }
};

template <typename Scalar>
RangeDopplerMap<Scalar> range_doppler_map(const ZMatrix<Scalar>& z)
{
    const Eigen::Index n = z.entries.rows();
    const Eigen::Index m = z.entries.cols();
    Eigen::MatrixXcd work = z.entries.template cast<std::complex<double>>();

    Eigen::FFT<double> fft;
    Eigen::VectorXcd in, out;
    // Slow time -> Doppler. e^{+j 2 pi f_D m T} peaks at bin f_D * M * T.
    for (Eigen::Index k = 0; k < n; ++k)
    {
        in = work.row(k).transpose();
        fft.fwd(out, in);
        work.row(k) = out.transpose();
    }
    // Subcarrier -> range. e^{-j 2 pi k delta_f R / c} peaks at bin R N delta_f / c.
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    for (Eigen::Index q = 0; q < m; ++q)
    {
        in = work.col(q);
        fft.inv(out, in);
        work.col(q) = out;
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n * m));
    RangeDopplerMap<Scalar> map;
    map.values.resize(n, m);
    for (Eigen::Index q = 0; q < m; ++q)
    {
        const Eigen::Index src = centred_source_index(static_cast<int>(q), static_cast<int>(m));
        for (Eigen::Index r = 0; r < n; ++r)
            map.values(r, q) = static_cast<Scalar>(std::abs(work(r, src)) * scale);
    }
    map.range_step = kSpeedOfLight / (z.cfg.n_subcarriers * z.cfg.subcarrier_spacing);
    map.doppler_step = 1.0 / (m * z.cfg.slow_time_step);
    return map;
}

template <typename Scalar = double>
struct EqualizationResult
{
    CMatrix<Scalar> equalized;
    Eigen::MatrixXi decisions; ///< alphabet indices
    double evm = 0.0;          ///< rms error vector / rms decided symbol
};

/// Nominal data receiver. Per frame and subcarrier, the channel is estimated
/// by least squares from the known preamble, the payload is equalized with
/// that estimate and hard-sliced onto `constellation`.
template <typename Scalar>
EqualizationResult<Scalar> equalize_and_demap(const DataCube<Scalar>& preamble_cube,
                                              const SymbolMatrix<Scalar>& preamble,
                                              const DataCube<Scalar>& payload_cube, Constellation constellation)
{
    if (preamble_cube.samples.rows() != payload_cube.samples.rows() ||
        preamble_cube.samples.cols() != payload_cube.samples.cols())
        throw DimensionError("equalize_and_demap: preamble and payload cubes differ in shape");
    const CMatrix<Scalar> estimate = remove_symbols(demodulate_fd(preamble_cube), preamble, preamble_cube.cfg).entries;
    if ((estimate.array().abs() == Scalar(0)).any())
        throw std::domain_error("equalize_and_demap: zero channel estimate on a subcarrier");

    const auto pts = alphabet<Scalar>(constellation);
    EqualizationResult<Scalar> r;
    r.equalized = demodulate_fd(payload_cube).cwiseQuotient(estimate);
    r.decisions.resize(r.equalized.rows(), r.equalized.cols());
    double err = 0.0;
    double ref = 0.0;
    for (Eigen::Index m = 0; m < r.equalized.cols(); ++m)
        for (Eigen::Index k = 0; k < r.equalized.rows(); ++k)
        {
            const auto z = r.equalized(k, m);
            const int idx = slice<Scalar>(std::span<const Complex<Scalar>>(pts), z);
            r.decisions(k, m) = idx;
            err += std::norm(std::complex<double>(z) - std::complex<double>(pts[idx]));
            ref += std::norm(std::complex<double>(pts[idx]));
        }
    r.evm = std::sqrt(err / ref);
    return r;
}

} // namespace mdattack
