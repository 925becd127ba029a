#pragma once

// Static SVG heat maps (embedded PNG raster + labelled axes).

#include "mdattack/receiver.hpp"

#include <filesystem>
#include <string>

namespace mdattack
{

struct PlotAxis
{
    double start = 0.0; ///< coordinate of the first cell centre
    double step = 1.0;  ///< coordinate increment per cell
    std::string label;
};

/// `image(y, x)` in [0, 1]; y = 0 is drawn at the bottom. Images larger than
/// the canvas are max-pooled down.
void write_heatmap_svg(const std::filesystem::path& path, const Eigen::MatrixXd& image, const PlotAxis& x,
                       const PlotAxis& y, const std::string& title);

/// Time on the horizontal axis (s), Doppler on the vertical axis (Hz).
void plot_spectrogram(const std::filesystem::path& path, const Spectrogram<float>& spec, const std::string& title);
void plot_spectrogram(const std::filesystem::path& path, const Spectrogram<double>& spec, const std::string& title);

/// Doppler (Hz) horizontally, bistatic range (m) vertically, dB-normalized
/// with a 60 dB floor. Only |Doppler| <= max_doppler_hz is drawn.
void plot_range_doppler(const std::filesystem::path& path, const RangeDopplerMap<double>& map,
                        const std::string& title, double max_doppler_hz = 500.0);

} // namespace mdattack
