#pragma once

// Stable topological sort over an order graph. Each vertex is keyed by the
// smallest logit among itself and its ancestors, then by its depth; sorting
// by (value descending, depth ascending, index ascending) respects every
// edge and ranks a root argmax first.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/ordergraph.hpp"

namespace scnet {

// ranks[i] is the position of vertex i in the total order.
class RankPermutation {
  public:
    RankPermutation() = default;

    explicit RankPermutation(std::vector<std::size_t> ranks) : ranks_(std::move(ranks)) {
        std::vector<bool> seen(ranks_.size(), false);
        for (auto r : ranks_) {
            if (r >= ranks_.size() || seen[r]) {
                throw ContractViolation("rank vector is not a permutation");
            }
            seen[r] = true;
        }
    }

    // Builds ranks from an order listing vertices first to last.
    static RankPermutation from_order(std::span<const std::size_t> order) {
        std::vector<std::size_t> ranks(order.size(), order.size());
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            if (order[pos] >= order.size()) {
                throw ContractViolation("order entry out of range");
            }
            ranks[order[pos]] = pos;
        }
        return RankPermutation(std::move(ranks));
    }

    [[nodiscard]] std::size_t size() const noexcept { return ranks_.size(); }
    [[nodiscard]] std::size_t operator[](std::size_t vertex) const { return ranks_[vertex]; }
    [[nodiscard]] std::span<const std::size_t> ranks() const noexcept { return ranks_; }

    [[nodiscard]] std::vector<std::size_t> order() const {
        std::vector<std::size_t> out(ranks_.size());
        for (std::size_t v = 0; v < ranks_.size(); ++v) {
            out[ranks_[v]] = v;
        }
        return out;
    }

    friend bool operator==(const RankPermutation&, const RankPermutation&) = default;

  private:
    std::vector<std::size_t> ranks_;
};

struct TopsortKeys {
    std::vector<double> value;        // min of y over the vertex and its ancestors
    std::vector<std::int32_t> depth;  // longest path into the vertex
};

[[nodiscard]] inline TopsortKeys topsort_keys(const AplpMatrix& p, std::span<const double> y) {
    const std::size_t m = p.dim();
    TopsortKeys keys{std::vector<double>(m, std::numeric_limits<double>::infinity()),
                     std::vector<std::int32_t>(m, 0)};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const PathLength pij = p(i, j);
            if (pij.reachable()) {
                keys.value[j] = std::min(keys.value[j], y[i]);
                keys.depth[j] = std::max(keys.depth[j], pij.length());
            }
        }
    }
    return keys;
}

// Vertex order for the given keys: value descending, depth ascending,
// index ascending.
[[nodiscard]] inline std::vector<std::size_t> order_by_keys(std::span<const double> value,
                                                            std::span<const std::int32_t> depth) {
    std::vector<std::size_t> order(value.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (value[a] != value[b]) return value[a] > value[b];
        if (depth[a] != depth[b]) return depth[a] < depth[b];
        return a < b;
    });
    return order;
}

[[nodiscard]] inline RankPermutation stable_topsort(const OrderGraph& g, std::span<const double> y) {
    if (y.size() != g.size()) {
        throw ShapeError("topsort: logits have length " + std::to_string(y.size()) +
                         ", graph has " + std::to_string(g.size()) + " vertices");
    }
    const AplpMatrix p = aplp(g);
    if (has_cycle(p)) {
        throw ContractViolation("topsort called on a cyclic order graph");
    }
    const TopsortKeys keys = topsort_keys(p, y);
    return RankPermutation::from_order(order_by_keys(keys.value, keys.depth));
}

// Indices sorted by descending value, ties by ascending index.
[[nodiscard]] inline std::vector<std::size_t> descending_argsort(std::span<const double> y) {
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value_less(y, b, a); });
    return order;
}

} // namespace scnet
