#include "hypercluster/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "hypercluster/error.hpp"

namespace hypercluster {

Parameter::Parameter(std::string name_, Tensor value_)
  : name(std::move(name_)), value(std::move(value_)), grad(value.shape())
{ }

const Tensor& Var::value() const
{
    return tape->value(*this);
}

namespace {

void same_tape(Var a, Var b)
{
    if (a.tape != b.tape || a.tape == nullptr) {
        throw ArgumentError("operands live on different tapes");
    }
}

// Broadcast is limited to "b is a single value" or equal shapes.
bool is_broadcast(const Tensor& a, const Tensor& b)
{
    if (a.shape() == b.shape()) {
        return false;
    }
    if (b.size() == 1) {
        return true;
    }
    throw DimensionError("elementwise shape mismatch " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
}

// out[i,:] += x[i,k] * wt[k,:]. Every row goes through the same instruction
// sequence, so a row's result never depends on its position in the batch.
void gemm_rows(const float* __restrict x, std::size_t rows, std::size_t inner, const float* __restrict wt,
               std::size_t cols, float* __restrict out)
{
    for (std::size_t i = 0; i < rows; ++i) {
        float* dst = out + i * cols;
        const float* src = x + i * inner;
        for (std::size_t k = 0; k < inner; ++k) {
            const float s = src[k];
            const float* w = wt + k * cols;
            for (std::size_t j = 0; j < cols; ++j) {
                dst[j] += s * w[j];
            }
        }
    }
}

// out[k,:] += sum_i a[i,k] * b[i,:], accumulated in increasing i.
void gemm_at_b(const float* __restrict a, std::size_t rows, std::size_t a_cols, const float* __restrict b,
               std::size_t b_cols, float* __restrict out)
{
    for (std::size_t i = 0; i < rows; ++i) {
        const float* arow = a + i * a_cols;
        const float* brow = b + i * b_cols;
        for (std::size_t k = 0; k < a_cols; ++k) {
            const float s = arow[k];
            float* dst = out + k * b_cols;
            for (std::size_t j = 0; j < b_cols; ++j) {
                dst[j] += s * brow[j];
            }
        }
    }
}

Tensor transpose(const Tensor& m)
{
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    Tensor out({c, r});
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            out[j * r + i] = m[i * c + j];
        }
    }
    return out;
}

Shape result_shape(std::size_t rows, std::size_t cols, bool row_vector)
{
    return row_vector ? Shape{cols} : Shape{rows, cols};
}

} // namespace

Var Tape::push(Node node)
{
    nodes_.push_back(std::move(node));
    return Var{this, nodes_.size() - 1};
}

Var Tape::constant(Tensor value)
{
    Node node;
    node.op = OpKind::Constant;
    node.value = std::move(value);
    return push(std::move(node));
}

Var Tape::param(Parameter& p)
{
    Node node;
    node.op = OpKind::Param;
    node.value = p.value;
    node.param = &p;
    node.requires_grad = true;
    if (p.grad.shape() != p.value.shape()) {
        p.grad = Tensor(p.value.shape());
    }
    return push(std::move(node));
}

const Tensor& Tape::adjoint(Var v) const
{
    static const Tensor kEmpty;
    if (v.id >= adjoints_.size()) {
        return kEmpty;
    }
    return adjoints_[v.id];
}

Tensor& Tape::grad_slot(std::size_t id)
{
    Tensor& slot = adjoints_[id];
    if (slot.empty()) {
        slot = Tensor(nodes_[id].value.shape());
    }
    return slot;
}

void Tape::backward(Var root, float seed)
{
    if (root.tape != this) {
        throw ArgumentError("backward root belongs to another tape");
    }
    if (nodes_[root.id].value.size() != 1) {
        throw DimensionError("backward root must be a scalar, got shape " +
                             shape_string(nodes_[root.id].value.shape()));
    }
    adjoints_.assign(nodes_.size(), Tensor());
    if (!nodes_[root.id].requires_grad) {
        return;
    }
    grad_slot(root.id)[0] = seed;
    for (std::size_t id = root.id + 1; id-- > 0;) {
        if (!nodes_[id].requires_grad || adjoints_[id].empty()) {
            continue;
        }
        backprop_node(id);
    }
}

void Tape::backprop_node(std::size_t id)
{
    const Node& node = nodes_[id];
    const Tensor& g = adjoints_[id];
    auto needs = [&](std::size_t k) { return nodes_[node.inputs[k]].requires_grad; };
    auto input = [&](std::size_t k) -> const Tensor& { return nodes_[node.inputs[k]].value; };

    switch (node.op) {
    case OpKind::Constant:
        break;
    case OpKind::Param: {
        float* dst = node.param->grad.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
            dst[i] += g[i];
        }
        break;
    }
    case OpKind::MatMul: {
        const Tensor& a = input(0);
        const Tensor& b = input(1);
        if (needs(0)) {
            // dA = G * B^T : rows of G against rows of B.
            Tensor& da = grad_slot(node.inputs[0]);
            for (std::size_t i = 0; i < a.rows(); ++i) {
                for (std::size_t k = 0; k < a.cols(); ++k) {
                    float acc = 0.0f;
                    for (std::size_t j = 0; j < b.cols(); ++j) {
                        acc += g[i * b.cols() + j] * b[k * b.cols() + j];
                    }
                    da[i * a.cols() + k] += acc;
                }
            }
        }
        if (needs(1)) {
            Tensor& db = grad_slot(node.inputs[1]);
            gemm_at_b(a.data(), a.rows(), a.cols(), g.data(), b.cols(), db.data());
        }
        break;
    }
    case OpKind::Linear: {
        const Tensor& x = input(0);
        const Tensor& w = input(1);
        const std::size_t rows = x.rows();
        const std::size_t in = w.cols();
        const std::size_t out = w.rows();
        if (needs(0)) {
            // dX = G * W, with W already [out x in].
            Tensor& dx = grad_slot(node.inputs[0]);
            gemm_rows(g.data(), rows, out, w.data(), in, dx.data());
        }
        if (needs(1)) {
            // dW = G^T * X.
            Tensor& dw = grad_slot(node.inputs[1]);
            gemm_at_b(g.data(), rows, out, x.data(), in, dw.data());
        }
        if (needs(2)) {
            Tensor& db = grad_slot(node.inputs[2]);
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < out; ++j) {
                    db[j] += g[i * out + j];
                }
            }
        }
        break;
    }
    case OpKind::Add:
    case OpKind::Mul: {
        const Tensor& a = input(0);
        const Tensor& b = input(1);
        const bool bcast = b.size() == 1 && a.size() != 1;
        const bool is_mul = node.op == OpKind::Mul;
        if (needs(0)) {
            Tensor& da = grad_slot(node.inputs[0]);
            for (std::size_t i = 0; i < g.size(); ++i) {
                da[i] += is_mul ? g[i] * b[bcast ? 0 : i] : g[i];
            }
        }
        if (needs(1)) {
            Tensor& db = grad_slot(node.inputs[1]);
            if (bcast) {
                double acc = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    acc += is_mul ? static_cast<double>(g[i]) * a[i] : g[i];
                }
                db[0] += static_cast<float>(acc);
            } else {
                for (std::size_t i = 0; i < g.size(); ++i) {
                    db[i] += is_mul ? g[i] * a[i] : g[i];
                }
            }
        }
        break;
    }
    case OpKind::Scale: {
        Tensor& da = grad_slot(node.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            da[i] += g[i] * node.scalar;
        }
        break;
    }
    case OpKind::Sin: {
        const Tensor& a = input(0);
        Tensor& da = grad_slot(node.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            da[i] += g[i] * std::cos(a[i]);
        }
        break;
    }
    case OpKind::Relu: {
        const Tensor& a = input(0);
        Tensor& da = grad_slot(node.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (a[i] > 0.0f) {
                da[i] += g[i];
            }
        }
        break;
    }
    case OpKind::MeanRows: {
        const Tensor& a = input(0);
        Tensor& da = grad_slot(node.inputs[0]);
        const float inv = 1.0f / static_cast<float>(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                da[i * a.cols() + j] += g[j] * inv;
            }
        }
        break;
    }
    case OpKind::Slice: {
        Tensor& da = grad_slot(node.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            da[node.offset + i] += g[i];
        }
        break;
    }
    case OpKind::Concat: {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < node.inputs.size(); ++k) {
            const std::size_t n = nodes_[node.inputs[k]].value.size();
            if (needs(k)) {
                Tensor& dk = grad_slot(node.inputs[k]);
                for (std::size_t i = 0; i < n; ++i) {
                    dk[i] += g[offset + i];
                }
            }
            offset += n;
        }
        break;
    }
    case OpKind::SquaredError: {
        const Tensor& pred = input(0);
        const Tensor& target = input(1);
        const float coef = 2.0f * g[0] / static_cast<float>(pred.rows());
        if (needs(0)) {
            Tensor& dp = grad_slot(node.inputs[0]);
            for (std::size_t i = 0; i < pred.size(); ++i) {
                dp[i] += coef * (pred[i] - target[i]);
            }
        }
        if (needs(1)) {
            Tensor& dt = grad_slot(node.inputs[1]);
            for (std::size_t i = 0; i < pred.size(); ++i) {
                dt[i] -= coef * (pred[i] - target[i]);
            }
        }
        break;
    }
    }
}

Var Tape::record(OpKind op, std::vector<std::size_t> inputs, Tensor value, float scalar, std::size_t offset)
{
    Node node;
    node.op = op;
    node.value = std::move(value);
    node.scalar = scalar;
    node.offset = offset;
    node.requires_grad = std::any_of(inputs.begin(), inputs.end(),
                                     [this](std::size_t id) { return nodes_[id].requires_grad; });
    node.inputs = std::move(inputs);
    return push(std::move(node));
}

Var matmul(Var a, Var b)
{
    same_tape(a, b);
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (bv.rank() != 2 || av.cols() != bv.rows()) {
        throw DimensionError("matmul inner dimensions differ: " + shape_string(av.shape()) + " x " +
                             shape_string(bv.shape()));
    }
    Tensor out(result_shape(av.rows(), bv.cols(), av.rank() == 1));
    gemm_rows(av.data(), av.rows(), av.cols(), bv.data(), bv.cols(), out.data());
    return a.tape->record(OpKind::MatMul, {a.id, b.id}, std::move(out));
}

Var linear(Var x, Var weight, Var bias)
{
    same_tape(x, weight);
    same_tape(x, bias);
    const Tensor& xv = x.value();
    const Tensor& wv = weight.value();
    const Tensor& bv = bias.value();
    if (wv.rank() != 2 || xv.cols() != wv.cols() || bv.size() != wv.rows()) {
        throw DimensionError("linear: input " + shape_string(xv.shape()) + ", weight " +
                             shape_string(wv.shape()) + ", bias " + shape_string(bv.shape()));
    }
    const std::size_t rows = xv.rows();
    const std::size_t out_dim = wv.rows();
    Tensor out(result_shape(rows, out_dim, xv.rank() == 1));
    for (std::size_t i = 0; i < rows; ++i) {
        std::copy(bv.data(), bv.data() + out_dim, out.data() + i * out_dim);
    }
    const Tensor wt = transpose(wv);
    gemm_rows(xv.data(), rows, wv.cols(), wt.data(), out_dim, out.data());
    return x.tape->record(OpKind::Linear, {x.id, weight.id, bias.id}, std::move(out));
}

Var add(Var a, Var b)
{
    same_tape(a, b);
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    const bool bcast = is_broadcast(av, bv);
    Tensor out(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) {
        out[i] = av[i] + bv[bcast ? 0 : i];
    }
    return a.tape->record(OpKind::Add, {a.id, b.id}, std::move(out));
}

Var mul(Var a, Var b)
{
    same_tape(a, b);
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    const bool bcast = is_broadcast(av, bv);
    Tensor out(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) {
        out[i] = av[i] * bv[bcast ? 0 : i];
    }
    return a.tape->record(OpKind::Mul, {a.id, b.id}, std::move(out));
}

Var scale(Var a, float factor)
{
    Tensor out = a.value();
    for (float& v : out.values()) {
        v *= factor;
    }
    return a.tape->record(OpKind::Scale, {a.id}, std::move(out), factor);
}

Var sin(Var a)
{
    Tensor out = a.value();
    for (float& v : out.values()) {
        v = std::sin(v);
    }
    return a.tape->record(OpKind::Sin, {a.id}, std::move(out));
}

Var relu(Var a)
{
    Tensor out = a.value();
    for (float& v : out.values()) {
        v = v > 0.0f ? v : 0.0f;
    }
    return a.tape->record(OpKind::Relu, {a.id}, std::move(out));
}

Var mean_rows(Var a)
{
    const Tensor& av = a.value();
    const std::size_t rows = av.rows();
    const std::size_t cols = av.cols();
    if (av.empty() || rows == 0) {
        throw ArgumentError("mean_rows: empty point set");
    }
    // Rows are summed in lexicographic order, which makes the result exactly
    // independent of point order (equal rows contribute equal values).
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        order[i] = i;
    }
    const float* base = av.data();
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::lexicographical_compare(base + x * cols, base + (x + 1) * cols, base + y * cols,
                                            base + (y + 1) * cols);
    });
    std::vector<double> acc(cols, 0.0);
    for (std::size_t i : order) {
        const float* row = base + i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            acc[j] += row[j];
        }
    }
    Tensor out({cols});
    for (std::size_t j = 0; j < cols; ++j) {
        out[j] = static_cast<float>(acc[j] / static_cast<double>(rows));
    }
    return a.tape->record(OpKind::MeanRows, {a.id}, std::move(out));
}

Var slice(Var a, std::size_t offset, Shape shape)
{
    const Tensor& av = a.value();
    const std::size_t n = shape_size(shape);
    if (offset + n > av.size()) {
        throw DimensionError("slice [" + std::to_string(offset) + ", " + std::to_string(offset + n) +
                             ") exceeds tensor of " + std::to_string(av.size()) + " values");
    }
    std::vector<float> data(av.data() + offset, av.data() + offset + n);
    return a.tape->record(OpKind::Slice, {a.id}, Tensor(std::move(shape), std::move(data)), 0.0f, offset);
}

Var concat(std::span<const Var> parts)
{
    if (parts.empty()) {
        throw ArgumentError("concat of nothing");
    }
    std::vector<float> data;
    std::vector<std::size_t> ids;
    for (const Var& p : parts) {
        same_tape(parts.front(), p);
        const Tensor& v = p.value();
        data.insert(data.end(), v.data(), v.data() + v.size());
        ids.push_back(p.id);
    }
    const std::size_t n = data.size();
    return parts.front().tape->record(OpKind::Concat, std::move(ids), Tensor({n}, std::move(data)));
}

Var squared_error(Var pred, Var target)
{
    same_tape(pred, target);
    const Tensor& p = pred.value();
    const Tensor& t = target.value();
    if (p.shape() != t.shape()) {
        throw DimensionError("squared_error shape mismatch " + shape_string(p.shape()) + " vs " +
                             shape_string(t.shape()));
    }
    const std::size_t rows = p.rows();
    const std::size_t cols = p.cols();
    if (rows == 0 || p.empty()) {
        throw ArgumentError("squared_error on an empty point set");
    }
    // Per-point errors are summed in sorted order so the value is independent
    // of point order.
    std::vector<double> per_point(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const double d = static_cast<double>(p[i * cols + c]) - t[i * cols + c];
            acc += d * d;
        }
        per_point[i] = acc;
    }
    std::sort(per_point.begin(), per_point.end());
    double total = 0.0;
    for (double e : per_point) {
        total += e;
    }
    const float loss = static_cast<float>(total / static_cast<double>(rows));
    return pred.tape->record(OpKind::SquaredError, {pred.id, target.id}, Tensor::scalar(loss));
}

} // namespace hypercluster
