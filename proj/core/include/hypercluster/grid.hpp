#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hypercluster/pointset.hpp"

namespace hypercluster {

/// Regular image-like sampling of f: [0,1]^2 -> R^m. Row-major
/// [height x width x channels]; row index follows y, column index follows x.
struct Grid {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 1;
    std::vector<float> data;

    Grid() = default;
    Grid(std::size_t h, std::size_t w, std::size_t m, float fill = 0.0f)
      : height(h), width(w), channels(m), data(h * w * m, fill)
    { }

    float& at(std::size_t row, std::size_t col, std::size_t c = 0) { return data[(row * width + col) * channels + c]; }
    float at(std::size_t row, std::size_t col, std::size_t c = 0) const
    {
        return data[(row * width + col) * channels + c];
    }
};

/// Align-corners position of sample i on an n-point axis; n = 1 maps to 0.5.
double grid_coordinate(std::size_t i, std::size_t n);

/// Bilinear resampling onto an r x r align-corners grid over [0,1]^2.
Grid bilinear_resample(const Grid& grid, std::size_t r);

/// Flattens a grid into coordinate-value pairs with coords (x, y).
PointSet grid_to_pointset(const Grid& grid, std::string id, std::optional<int> label);

/// Inverse of grid_to_pointset for square align-corners grids in any row
/// order. Returns nullopt if the observations are not such a grid.
std::optional<Grid> pointset_to_grid(const Observations& obs);

/// IDX image file (magic 0x00000803): N grids of H x W, bytes scaled to [0,1].
std::vector<Grid> read_idx_images(const std::filesystem::path& path);
/// IDX label file (magic 0x00000801).
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

/// Pairs an image file with its label file; the counts must agree.
struct LabeledImages {
    std::vector<Grid> images;
    std::vector<std::uint8_t> labels;
};
LabeledImages read_mnist(const std::filesystem::path& images, const std::filesystem::path& labels);

} // namespace hypercluster
