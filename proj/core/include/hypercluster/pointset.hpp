#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypercluster/tensor.hpp"

namespace hypercluster {

/// The coordinate-value pairs of one discretized function: coords [I x d] in
/// [0,1]^d and values [I x m]. Row order carries no meaning.
struct Observations {
    Tensor coords;
    Tensor values;

    std::size_t count() const { return coords.rows(); }
    std::size_t dim() const { return coords.cols(); }
    std::size_t channels() const { return values.cols(); }

    /// Throws FormatError unless the invariants hold.
    void validate() const;
};

/// One function sample: observations plus bookkeeping. The label is ground
/// truth for evaluation only; training code takes Observations, never this.
struct PointSet {
    std::string id;
    std::optional<int> label;
    Observations obs;
};

struct Dataset {
    std::vector<PointSet> samples;
    std::size_t d = 0;
    std::size_t m = 0;

    std::size_t size() const { return samples.size(); }
    bool labeled() const;
    /// Number of distinct labels (0 when unlabeled).
    std::size_t num_classes() const;
    /// Labels in sample order; throws ArgumentError if any sample is unlabeled.
    std::vector<int> labels() const;
    /// Observations only, in sample order.
    std::vector<Observations> observations() const;

    /// Checks shared (d, m) and per-sample invariants; fills d and m from the
    /// first sample when they are zero.
    void validate();
};

/// JSON Lines, one sample per line:
///   {"id": "...", "label": 3, "x": [[x1..xd], ...], "u": [[u1..um], ...]}
/// "label" is optional. Floats are written in shortest round-trip form.
Dataset read_jsonl(std::istream& in);
Dataset read_jsonl(const std::filesystem::path& path);
void write_jsonl(const Dataset& dataset, std::ostream& out);
void write_jsonl(const Dataset& dataset, const std::filesystem::path& path);

} // namespace hypercluster
