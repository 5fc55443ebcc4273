#include "hypercluster/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "hypercluster/error.hpp"

namespace hypercluster {

double grid_coordinate(std::size_t i, std::size_t n)
{
    if (n <= 1) {
        return 0.5;
    }
    return static_cast<double>(i) / static_cast<double>(n - 1);
}

Grid bilinear_resample(const Grid& grid, std::size_t r)
{
    if (r == 0) {
        throw ArgumentError("bilinear_resample: resolution must be positive");
    }
    if (grid.height < 2 || grid.width < 2) {
        throw ArgumentError("bilinear_resample: source grid must be at least 2x2");
    }
    Grid out(r, r, grid.channels);
    for (std::size_t i = 0; i < r; ++i) {
        const double sy = grid_coordinate(i, r) * static_cast<double>(grid.height - 1);
        const std::size_t y0 = std::min(static_cast<std::size_t>(sy), grid.height - 2);
        const double fy = sy - static_cast<double>(y0);
        for (std::size_t j = 0; j < r; ++j) {
            const double sx = grid_coordinate(j, r) * static_cast<double>(grid.width - 1);
            const std::size_t x0 = std::min(static_cast<std::size_t>(sx), grid.width - 2);
            const double fx = sx - static_cast<double>(x0);
            for (std::size_t c = 0; c < grid.channels; ++c) {
                const double top = (1.0 - fx) * grid.at(y0, x0, c) + fx * grid.at(y0, x0 + 1, c);
                const double bottom = (1.0 - fx) * grid.at(y0 + 1, x0, c) + fx * grid.at(y0 + 1, x0 + 1, c);
                out.at(i, j, c) = static_cast<float>((1.0 - fy) * top + fy * bottom);
            }
        }
    }
    return out;
}

PointSet grid_to_pointset(const Grid& grid, std::string id, std::optional<int> label)
{
    const std::size_t count = grid.height * grid.width;
    PointSet ps;
    ps.id = std::move(id);
    ps.label = label;
    ps.obs.coords = Tensor({count, 2});
    ps.obs.values = Tensor({count, grid.channels});
    for (std::size_t i = 0; i < grid.height; ++i) {
        for (std::size_t j = 0; j < grid.width; ++j) {
            const std::size_t n = i * grid.width + j;
            ps.obs.coords(n, 0) = static_cast<float>(grid_coordinate(j, grid.width));
            ps.obs.coords(n, 1) = static_cast<float>(grid_coordinate(i, grid.height));
            for (std::size_t c = 0; c < grid.channels; ++c) {
                ps.obs.values(n, c) = grid.at(i, j, c);
            }
        }
    }
    return ps;
}

std::optional<Grid> pointset_to_grid(const Observations& obs)
{
    if (obs.dim() != 2) {
        return std::nullopt;
    }
    const std::size_t count = obs.count();
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count))));
    if (side < 2 || side * side != count) {
        return std::nullopt;
    }
    Grid grid(side, side, obs.channels());
    std::vector<bool> seen(count, false);
    const double span = static_cast<double>(side - 1);
    for (std::size_t n = 0; n < count; ++n) {
        const double px = obs.coords(n, 0) * span;
        const double py = obs.coords(n, 1) * span;
        const double cx = std::round(px);
        const double cy = std::round(py);
        if (std::abs(px - cx) > 1e-3 || std::abs(py - cy) > 1e-3) {
            return std::nullopt;
        }
        const auto col = static_cast<std::size_t>(cx);
        const auto row = static_cast<std::size_t>(cy);
        const std::size_t cell = row * side + col;
        if (seen[cell]) {
            return std::nullopt;
        }
        seen[cell] = true;
        for (std::size_t c = 0; c < obs.channels(); ++c) {
            grid.at(row, col, c) = obs.values(n, c);
        }
    }
    return grid;
}

namespace {

std::vector<std::uint8_t> read_all(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& bytes, std::size_t offset)
{
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08x", v);
    return buf;
}

} // namespace

std::vector<Grid> read_idx_images(const std::filesystem::path& path)
{
    const auto bytes = read_all(path);
    if (bytes.size() < 16) {
        throw FormatError(path.string() + ": truncated IDX header");
    }
    const std::uint32_t magic = be32(bytes, 0);
    if (magic != 0x00000803) {
        throw FormatError(path.string() + ": bad IDX image magic " + hex(magic));
    }
    const std::size_t n = be32(bytes, 4);
    const std::size_t rows = be32(bytes, 8);
    const std::size_t cols = be32(bytes, 12);
    if (bytes.size() < 16 + n * rows * cols) {
        throw FormatError(path.string() + ": truncated IDX payload (expected " + std::to_string(n) + " images of " +
                          std::to_string(rows) + "x" + std::to_string(cols) + ")");
    }
    std::vector<Grid> out;
    out.reserve(n);
    std::size_t offset = 16;
    for (std::size_t k = 0; k < n; ++k) {
        Grid g(rows, cols, 1);
        for (std::size_t p = 0; p < rows * cols; ++p) {
            g.data[p] = static_cast<float>(bytes[offset++]) / 255.0f;
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path)
{
    const auto bytes = read_all(path);
    if (bytes.size() < 8) {
        throw FormatError(path.string() + ": truncated IDX header");
    }
    const std::uint32_t magic = be32(bytes, 0);
    if (magic != 0x00000801) {
        throw FormatError(path.string() + ": bad IDX label magic " + hex(magic));
    }
    const std::size_t n = be32(bytes, 4);
    if (bytes.size() < 8 + n) {
        throw FormatError(path.string() + ": truncated IDX payload (expected " + std::to_string(n) + " labels)");
    }
    return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(n)};
}

LabeledImages read_mnist(const std::filesystem::path& images, const std::filesystem::path& labels)
{
    LabeledImages out{read_idx_images(images), read_idx_labels(labels)};
    if (out.images.size() != out.labels.size()) {
        throw FormatError("image file holds " + std::to_string(out.images.size()) + " images but label file holds " +
                          std::to_string(out.labels.size()) + " labels");
    }
    return out;
}

} // namespace hypercluster
