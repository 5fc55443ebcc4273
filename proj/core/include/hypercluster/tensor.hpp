#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hypercluster {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major float32 tensor of rank 1 or 2 (rank 0 is represented as
/// shape {1}). Rank-1 tensors behave as a single row in matrix operations.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, float fill = 0.0f);
    Tensor(Shape shape, std::vector<float> data);

    static Tensor matrix(std::size_t rows, std::size_t cols, std::initializer_list<float> values);
    static Tensor vector(std::initializer_list<float> values);
    static Tensor scalar(float value) { return Tensor({1}, value); }

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    /// Leading extent for rank 2, 1 for rank 1.
    std::size_t rows() const { return shape_.size() == 2 ? shape_[0] : 1; }
    /// Trailing extent.
    std::size_t cols() const { return shape_.empty() ? 0 : shape_.back(); }

    float* data() { return data_.data(); }
    const float* data() const { return data_.data(); }
    std::span<float> values() { return data_; }
    std::span<const float> values() const { return data_; }
    std::span<float> row(std::size_t i) { return {data_.data() + i * cols(), cols()}; }
    std::span<const float> row(std::size_t i) const { return {data_.data() + i * cols(), cols()}; }

    float& operator[](std::size_t i) { return data_[i]; }
    float operator[](std::size_t i) const { return data_[i]; }
    float& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
    float operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

    void fill(float value);
    bool all_finite() const;
    Tensor reshaped(Shape shape) const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Shape shape_;
    std::vector<float> data_;
};

} // namespace hypercluster
