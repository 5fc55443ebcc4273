#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hypercluster/tensor.hpp"

namespace hypercluster {

/// A trainable tensor together with its accumulated gradient.
struct Parameter {
    Parameter() = default;
    Parameter(std::string name, Tensor value);

    std::string name;
    Tensor value;
    Tensor grad;

    void zero_grad() { grad.fill(0.0f); }
};

class Tape;

/// Handle to a node on a tape.
struct Var {
    Tape* tape = nullptr;
    std::size_t id = 0;

    const Tensor& value() const;
    const Shape& shape() const { return value().shape(); }
};

enum class OpKind {
    Constant,
    Param,
    MatMul,
    Linear,
    Add,
    Mul,
    Scale,
    Sin,
    Relu,
    MeanRows,
    Slice,
    Concat,
    SquaredError,
};

/// Append-only record of tensor operations for reverse-mode differentiation.
///
/// Nodes are stored in creation order, which is a topological order; backward()
/// walks them in strict reverse so gradient accumulation is deterministic.
/// Nodes that do not depend on any parameter are never given an adjoint.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var constant(Tensor value);
    /// Registers a parameter; backward() adds its adjoint into `p.grad`.
    Var param(Parameter& p);

    const Tensor& value(Var v) const { return nodes_[v.id].value; }
    bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
    std::size_t size() const { return nodes_.size(); }

    /// Propagates d(root)/d(node) back through the tape. `root` must hold a
    /// single value; `seed` scales the whole gradient. Parameter gradients are
    /// accumulated (not overwritten).
    void backward(Var root, float seed = 1.0f);

    /// Adjoint of a node after backward(); empty if it received none.
    const Tensor& adjoint(Var v) const;

private:
    friend Var matmul(Var, Var);
    friend Var linear(Var, Var, Var);
    friend Var add(Var, Var);
    friend Var mul(Var, Var);
    friend Var scale(Var, float);
    friend Var sin(Var);
    friend Var relu(Var);
    friend Var mean_rows(Var);
    friend Var slice(Var, std::size_t, Shape);
    friend Var concat(std::span<const Var>);
    friend Var squared_error(Var, Var);

    struct Node {
        OpKind op = OpKind::Constant;
        std::vector<std::size_t> inputs;
        Tensor value;
        float scalar = 0.0f;
        std::size_t offset = 0;
        Parameter* param = nullptr;
        bool requires_grad = false;
    };

    Var push(Node node);
    Var record(OpKind op, std::vector<std::size_t> inputs, Tensor value, float scalar = 0.0f,
               std::size_t offset = 0);
    Tensor& grad_slot(std::size_t id);
    void backprop_node(std::size_t id);

    std::vector<Node> nodes_;
    std::vector<Tensor> adjoints_;
};

/// Puts a parameter on the tape: tracked when mutable, as a constant copy when
/// const. Model code written against `bind` serves both training and inference.
inline Var bind(Tape& tape, Parameter& p)
{
    return tape.param(p);
}
inline Var bind(Tape& tape, const Parameter& p)
{
    return tape.constant(p.value);
}

/// a[r x k] * b[k x c].
Var matmul(Var a, Var b);
/// x[I x in] * W^T + b with W stored [out x in] and b [out]. Result [I x out].
Var linear(Var x, Var weight, Var bias);
Var add(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, float factor);
Var sin(Var a);
Var relu(Var a);
/// Column means of a[I x l], returned as a rank-1 tensor of length l. Rows are
/// summed in lexicographic order in double precision, so the result does not
/// depend on row order.
Var mean_rows(Var a);
/// Contiguous range [offset, offset + size(shape)) of a's flat data, reshaped.
Var slice(Var a, std::size_t offset, Shape shape);
/// Flat concatenation into a rank-1 tensor.
Var concat(std::span<const Var> parts);
/// (1/I) * sum_i sum_c (pred - target)^2 for [I x m] operands; a scalar.
Var squared_error(Var pred, Var target);

} // namespace hypercluster
