#include "hypercluster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hypercluster/error.hpp"

namespace hypercluster {

namespace {

void check_lengths(std::span<const int> a, std::span<const int> b)
{
    if (a.size() != b.size()) {
        throw ArgumentError("labelings differ in length: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
    }
}

std::map<int, std::size_t> index_labels(std::span<const int> labels)
{
    std::map<int, std::size_t> index;
    for (int l : labels) {
        index.emplace(l, 0);
    }
    std::size_t next = 0;
    for (auto& [label, idx] : index) {
        idx = next++;
    }
    return index;
}

__int128 choose2(std::int64_t n)
{
    return static_cast<__int128>(n) * (n - 1) / 2;
}

} // namespace

Contingency contingency(std::span<const int> a, std::span<const int> b)
{
    check_lengths(a, b);
    const auto ia = index_labels(a);
    const auto ib = index_labels(b);
    Contingency c;
    c.table.assign(ia.size(), std::vector<std::int64_t>(ib.size(), 0));
    c.row_sums.assign(ia.size(), 0);
    c.col_sums.assign(ib.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t r = ia.at(a[i]);
        const std::size_t s = ib.at(b[i]);
        c.table[r][s] += 1;
        c.row_sums[r] += 1;
        c.col_sums[s] += 1;
    }
    c.total = static_cast<std::int64_t>(a.size());
    return c;
}

bool same_partition(std::span<const int> a, std::span<const int> b)
{
    check_lengths(a, b);
    const Contingency c = contingency(a, b);
    // Same partition iff the table is a permutation matrix pattern.
    if (c.row_sums.size() != c.col_sums.size()) {
        return false;
    }
    for (const auto& row : c.table) {
        if (std::count_if(row.begin(), row.end(), [](std::int64_t v) { return v != 0; }) != 1) {
            return false;
        }
    }
    return true;
}

double ari(std::span<const int> truth, std::span<const int> pred)
{
    check_lengths(truth, pred);
    if (truth.size() < 2) {
        throw ArgumentError("ARI needs at least two samples");
    }
    const Contingency c = contingency(truth, pred);
    __int128 index = 0;
    for (const auto& row : c.table) {
        for (std::int64_t v : row) {
            index += choose2(v);
        }
    }
    __int128 sum_a = 0;
    __int128 sum_b = 0;
    for (std::int64_t v : c.row_sums) {
        sum_a += choose2(v);
    }
    for (std::int64_t v : c.col_sums) {
        sum_b += choose2(v);
    }
    const __int128 pairs = choose2(c.total);
    // Scaling numerator and denominator by 2 * C(n, 2) keeps both integral.
    const __int128 num = 2 * (pairs * index - sum_a * sum_b);
    const __int128 den = pairs * (sum_a + sum_b) - 2 * sum_a * sum_b;
    if (den == 0) {
        return same_partition(truth, pred) ? 1.0 : 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

double entropy(std::span<const std::int64_t> counts)
{
    std::int64_t n = 0;
    for (std::int64_t v : counts) {
        n += v;
    }
    double h = 0.0;
    for (std::int64_t v : counts) {
        if (v > 0) {
            const double p = static_cast<double>(v) / static_cast<double>(n);
            h -= p * std::log(p);
        }
    }
    return h;
}

double mutual_information(const Contingency& c)
{
    const auto n = static_cast<double>(c.total);
    double mi = 0.0;
    for (std::size_t i = 0; i < c.table.size(); ++i) {
        for (std::size_t j = 0; j < c.table[i].size(); ++j) {
            const std::int64_t nij = c.table[i][j];
            if (nij == 0) {
                continue;
            }
            const auto v = static_cast<double>(nij);
            mi += (v / n) *
                  std::log(n * v / (static_cast<double>(c.row_sums[i]) * static_cast<double>(c.col_sums[j])));
        }
    }
    return std::max(0.0, mi);
}

double expected_mutual_information(const Contingency& c)
{
    const std::int64_t n = c.total;
    const auto nd = static_cast<double>(n);
    const double lg_n = std::lgamma(nd + 1.0);
    double emi = 0.0;
    for (std::int64_t a : c.row_sums) {
        for (std::int64_t b : c.col_sums) {
            const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
            const std::int64_t hi = std::min(a, b);
            // Terms of the hypergeometric pmf share these factorials.
            const double fixed = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) + std::lgamma(nd - a + 1.0) +
                                 std::lgamma(nd - b + 1.0) - lg_n;
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const auto v = static_cast<double>(nij);
                const double log_p = fixed - std::lgamma(v + 1.0) - std::lgamma(a - v + 1.0) -
                                     std::lgamma(b - v + 1.0) - std::lgamma(nd - a - b + v + 1.0);
                const double term =
                    (v / nd) * std::log(nd * v / (static_cast<double>(a) * static_cast<double>(b)));
                emi += term * std::exp(log_p);
            }
        }
    }
    return emi;
}

double ami(std::span<const int> truth, std::span<const int> pred, AmiNormalizer normalizer)
{
    check_lengths(truth, pred);
    if (truth.empty()) {
        throw ArgumentError("AMI needs at least one sample");
    }
    if (same_partition(truth, pred)) {
        return 1.0;
    }
    const Contingency c = contingency(truth, pred);
    const double mi = mutual_information(c);
    const double emi = expected_mutual_information(c);
    const double ha = entropy(c.row_sums);
    const double hb = entropy(c.col_sums);
    double norm = 0.0;
    switch (normalizer) {
    case AmiNormalizer::Arithmetic:
        norm = 0.5 * (ha + hb);
        break;
    case AmiNormalizer::Max:
        norm = std::max(ha, hb);
        break;
    case AmiNormalizer::Min:
        norm = std::min(ha, hb);
        break;
    case AmiNormalizer::Geometric:
        norm = std::sqrt(ha * hb);
        break;
    }
    const double den = norm - emi;
    if (std::abs(den) < 1e-12) {
        return same_partition(truth, pred) ? 1.0 : 0.0;
    }
    return (mi - emi) / den;
}

} // namespace hypercluster
