#include "mdattack/plot.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mdattack
{

namespace
{

constexpr int kMaxWidth = 880;
constexpr int kMaxHeight = 400;

// Viridis control points.
constexpr std::array<std::array<double, 3>, 5> kColormap{{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

std::array<unsigned char, 3> colour(double v)
{
    v = std::clamp(v, 0.0, 1.0) * (kColormap.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(v), kColormap.size() - 2);
    const double f = v - static_cast<double>(i);
    std::array<unsigned char, 3> rgb{};
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<unsigned char>(std::lround(kColormap[i][c] * (1 - f) + kColormap[i + 1][c] * f));
    return rgb;
}

/// Max-pools `image` to at most max_rows x max_cols.
Eigen::MatrixXd shrink(const Eigen::MatrixXd& image, int max_rows, int max_cols)
{
    const Eigen::Index fr = (image.rows() + max_rows - 1) / max_rows;
    const Eigen::Index fc = (image.cols() + max_cols - 1) / max_cols;
    if (fr <= 1 && fc <= 1)
        return image;
    Eigen::MatrixXd out((image.rows() + fr - 1) / fr, (image.cols() + fc - 1) / fc);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
        for (Eigen::Index c = 0; c < out.cols(); ++c)
        {
            const Eigen::Index r0 = r * fr;
            const Eigen::Index c0 = c * fc;
            out(r, c) = image.block(r0, c0, std::min(fr, image.rows() - r0), std::min(fc, image.cols() - c0)).maxCoeff();
        }
    return out;
}

std::vector<unsigned char> encode_png(const Eigen::MatrixXd& image)
{
    std::vector<unsigned char> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw std::runtime_error("png: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png)))
    {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png: encoding failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* buf = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(p));
            buf->insert(buf->end(), data, data + len);
        },
        nullptr);

    const auto w = static_cast<png_uint_32>(image.cols());
    const auto h = static_cast<png_uint_32>(image.rows());
    png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<unsigned char> row(3 * w);
    for (png_uint_32 y = 0; y < h; ++y)
    {
        const Eigen::Index src = image.rows() - 1 - y; // row 0 of the image is the bottom
        for (png_uint_32 x = 0; x < w; ++x)
        {
            const auto rgb = colour(image(src, x));
            std::copy(rgb.begin(), rgb.end(), row.begin() + 3 * x);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

std::string base64(const std::vector<unsigned char>& in)
{
    static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((in.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < in.size(); i += 3)
    {
        const std::uint32_t b = (std::uint32_t{in[i]} << 16) | (i + 1 < in.size() ? std::uint32_t{in[i + 1]} << 8 : 0) |
                                (i + 2 < in.size() ? std::uint32_t{in[i + 2]} : 0);
        out.push_back(table[(b >> 18) & 63]);
        out.push_back(table[(b >> 12) & 63]);
        out.push_back(i + 1 < in.size() ? table[(b >> 6) & 63] : '=');
        out.push_back(i + 2 < in.size() ? table[b & 63] : '=');
    }
    return out;
}

std::string fmt_tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

template <typename Scalar>
void plot_spectrogram_impl(const std::filesystem::path& path, const Spectrogram<Scalar>& spec, const std::string& title)
{
    // values are time x Doppler; the plot wants Doppler rows, time columns.
    const Eigen::MatrixXd image = spec.values.template cast<double>().transpose();
    write_heatmap_svg(path, image, {spec.time_origin, spec.time_step, "Time (s)"},
                      {spec.doppler_of(0), spec.doppler_step, "Doppler (Hz)"}, title);
}

} // namespace

void write_heatmap_svg(const std::filesystem::path& path, const Eigen::MatrixXd& image, const PlotAxis& x,
                       const PlotAxis& y, const std::string& title)
{
    if (image.size() == 0)
        throw std::invalid_argument("write_heatmap_svg: empty image");
    const Eigen::MatrixXd raster = shrink(image, kMaxHeight, kMaxWidth);
    const double w = static_cast<double>(std::max<Eigen::Index>(raster.cols(), 300));
    const double h = static_cast<double>(std::max<Eigen::Index>(raster.rows(), 200));
    const double left = 80, top = 40, bottom = 60, right = 20;

    // Axis extents span the cell edges.
    const double x0 = x.start - 0.5 * x.step;
    const double x1 = x0 + x.step * static_cast<double>(image.cols());
    const double y0 = y.start - 0.5 * y.step;
    const double y1 = y0 + y.step * static_cast<double>(image.rows());

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + w + right << "\" height=\""
        << top + h + bottom << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left + w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n";
    svg << "<image x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
        << "\" preserveAspectRatio=\"none\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64,"
        << base64(encode_png(raster)) << "\"/>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i)
    {
        const double fx = static_cast<double>(i) / ticks;
        const double px = left + fx * w;
        svg << "<line x1=\"" << px << "\" y1=\"" << top + h << "\" x2=\"" << px << "\" y2=\"" << top + h + 5
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << top + h + 18 << "\" text-anchor=\"middle\">"
            << fmt_tick(x0 + fx * (x1 - x0)) << "</text>\n";
        const double py = top + h - fx * h;
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << left << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
            << fmt_tick(y0 + fx * (y1 - y0)) << "</text>\n";
    }
    svg << "<text x=\"" << left + w / 2 << "\" y=\"" << top + h + 42 << "\" text-anchor=\"middle\">" << x.label
        << "</text>\n";
    svg << "<text transform=\"translate(20," << top + h / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << y.label
        << "</text>\n";
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << svg.str();
}

void plot_spectrogram(const std::filesystem::path& path, const Spectrogram<float>& spec, const std::string& title)
{
    plot_spectrogram_impl(path, spec, title);
}

void plot_spectrogram(const std::filesystem::path& path, const Spectrogram<double>& spec, const std::string& title)
{
    plot_spectrogram_impl(path, spec, title);
}

void plot_range_doppler(const std::filesystem::path& path, const RangeDopplerMap<double>& map,
                        const std::string& title, double max_doppler_hz)
{
    const Eigen::Index half = std::min<Eigen::Index>(map.dc_column(),
                                                     static_cast<Eigen::Index>(max_doppler_hz / map.doppler_step));
    const Eigen::Index first = map.dc_column() - half;
    const Eigen::Index count = std::min<Eigen::Index>(2 * half + 1, map.n_doppler() - first);
    const Eigen::MatrixXd power = map.values.middleCols(first, count).cwiseAbs2();
    const Eigen::MatrixXd image = normalize_db<double>(power, 60.0);
    write_heatmap_svg(path, image, {map.doppler_of(first), map.doppler_step, "Doppler (Hz)"},
                      {0.0, map.range_step, "Bistatic range (m)"}, title);
}

} // namespace mdattack
