#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "cliffordt/errors.hpp"
#include "cliffordt/statevector.hpp"

namespace cliffordt {

/// |amplitude| laid out on a 2^(N/2) x 2^(N/2) grid.
///
/// Column x indexes qubits 0..N/2-1 and row y qubits N/2..N-1, so cell
/// (x, y) holds basis index x + width * y and the row-major flattening is
/// the amplitude order itself.
struct AmplitudeGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> cells;

    double at(std::size_t x, std::size_t y) const { return cells[y * width + x]; }
    double max() const { return cells.empty() ? 0.0 : *std::max_element(cells.begin(), cells.end()); }

    friend bool operator==(const AmplitudeGrid&, const AmplitudeGrid&) = default;
};

inline AmplitudeGrid amplitude_grid(const StateVector& state) {
    const int n = state.n_qubits();
    if (n % 2 != 0) throw UsageError("amplitude grid needs an even qubit count, got " + std::to_string(n));
    AmplitudeGrid g;
    g.width = std::size_t{1} << (n / 2);
    g.height = g.width;
    g.cells.resize(state.dim());
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) g.cells[i] = std::abs(amps[i]);
    return g;
}

enum class ImageScale { Linear, Log };

inline std::string_view to_string(ImageScale s) { return s == ImageScale::Linear ? "linear" : "log"; }

/// Magnitude floor of the log scale.
inline constexpr double kLogScaleFloor = 1e-6;

/// 8-bit gray levels, row y then column x.
///
/// Linear: round(255 m / m_max). Log: round(255 log(1 + m/floor) /
/// log(1 + m_max/floor)) with floor 1e-6.
inline std::vector<std::uint8_t> grid_pixels(const AmplitudeGrid& grid, ImageScale scale) {
    std::vector<std::uint8_t> px(grid.cells.size(), 0);
    const double m_max = grid.max();
    if (!(m_max > 0.0)) return px;
    const double denom = scale == ImageScale::Linear ? m_max : std::log1p(m_max / kLogScaleFloor);
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double m = grid.cells[i];
        const double v = scale == ImageScale::Linear ? m / denom : std::log1p(m / kLogScaleFloor) / denom;
        px[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
    }
    return px;
}

/// Binary PGM (P5, maxval 255). `comment` goes on a single '#' line.
inline void write_image(const AmplitudeGrid& grid, const std::filesystem::path& path, ImageScale scale,
                        std::string_view comment = {}) {
    const auto px = grid_pixels(grid, scale);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
    out << "P5\n";
    std::string line(comment);
    std::replace(line.begin(), line.end(), '\n', ' ');
    out << "# " << line << (line.empty() ? "" : " ") << "scale=" << to_string(scale)
        << (scale == ImageScale::Log ? " log_floor=1e-6" : "") << '\n';
    out << grid.width << ' ' << grid.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace cliffordt
