#pragma once

// Graph encoding of a conjunctive ordering term. Vertex i is output index i;
// the literal y_j < y_i becomes the edge i -> j, so an edge points from the
// component that must be larger to the one that must be smaller.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scnet/constraints.hpp"

namespace scnet {

template <class T>
class SquareMatrix {
  public:
    SquareMatrix() = default;
    SquareMatrix(std::size_t dim, const T& fill) : dim_(dim), cells_(dim * dim, fill) {}

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    T& operator()(std::size_t i, std::size_t j) { return cells_[i * dim_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return cells_[i * dim_ + j]; }

    [[nodiscard]] std::span<const T> row(std::size_t i) const {
        return std::span<const T>(cells_).subspan(i * dim_, dim_);
    }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

  private:
    std::size_t dim_ = 0;
    std::vector<T> cells_;
};

// Longest-path length, or no path at all. Addition is absorbed by no-path,
// so it behaves as -infinity under max-plus arithmetic.
class PathLength {
  public:
    constexpr PathLength() = default;

    static constexpr PathLength none() { return PathLength{}; }
    static constexpr PathLength of(std::int32_t length) { return PathLength{length}; }

    [[nodiscard]] constexpr bool reachable() const noexcept { return reachable_; }
    [[nodiscard]] constexpr std::int32_t length() const noexcept { return length_; }

    // Length, with no-path read as `otherwise`.
    [[nodiscard]] constexpr std::int32_t value_or(std::int32_t otherwise) const noexcept {
        return reachable_ ? length_ : otherwise;
    }

    friend constexpr PathLength operator+(PathLength a, PathLength b) {
        if (!a.reachable_ || !b.reachable_) {
            return none();
        }
        return of(a.length_ + b.length_);
    }

    friend constexpr PathLength max(PathLength a, PathLength b) {
        if (!a.reachable_) return b;
        if (!b.reachable_) return a;
        return a.length_ >= b.length_ ? a : b;
    }

    friend constexpr bool operator==(const PathLength&, const PathLength&) = default;

  private:
    constexpr explicit PathLength(std::int32_t length) : reachable_(true), length_(length) {}

    bool reachable_ = false;
    std::int32_t length_ = 0;
};

using AplpMatrix = SquareMatrix<PathLength>;

class OrderGraph {
  public:
    explicit OrderGraph(std::size_t m) : adj_(m, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return adj_.dim(); }

    [[nodiscard]] bool has_edge(std::size_t from, std::size_t to) const { return adj_(from, to) != 0; }

    void add_edge(std::size_t from, std::size_t to) {
        if (from == to) {
            throw ContractViolation("order graph cannot hold a self loop");
        }
        adj_(from, to) = 1;
    }

    [[nodiscard]] const SquareMatrix<std::uint8_t>& adjacency() const noexcept { return adj_; }

    [[nodiscard]] std::size_t edge_count() const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j < size(); ++j) {
                count += adj_(i, j);
            }
        }
        return count;
    }

    friend bool operator==(const OrderGraph&, const OrderGraph&) = default;

  private:
    SquareMatrix<std::uint8_t> adj_;
};

[[nodiscard]] inline OrderGraph order_graph(const OrderingTerm& q, std::size_t m) {
    OrderGraph g(m);
    for (const auto& lit : q.literals()) {
        if (lit.lesser >= m || lit.greater >= m) {
            throw ContractViolation("term references index beyond m = " + std::to_string(m));
        }
        g.add_edge(lit.greater, lit.lesser);
    }
    return g;
}

// (AB)_ij = max_k (A_ik + B_kj)
[[nodiscard]] inline AplpMatrix max_distance_product(const AplpMatrix& a, const AplpMatrix& b) {
    const std::size_t m = a.dim();
    if (b.dim() != m) {
        throw ContractViolation("max-distance product of non-conformable matrices");
    }
    AplpMatrix out(m, PathLength::none());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const PathLength aik = a(i, k);
            if (!aik.reachable()) {
                continue;
            }
            for (std::size_t j = 0; j < m; ++j) {
                out(i, j) = max(out(i, j), aik + b(k, j));
            }
        }
    }
    return out;
}

// Squarings needed so that P covers every path of length <= m: ceil(log2 m).
[[nodiscard]] constexpr std::size_t aplp_squarings(std::size_t m) {
    std::size_t steps = 0;
    std::size_t reach = 1;
    while (reach < m) {
        reach *= 2;
        ++steps;
    }
    return steps;
}

// Length-1 path matrix: 1 on edges, 0 on the diagonal, no-path elsewhere.
[[nodiscard]] inline AplpMatrix base_path_matrix(const OrderGraph& g) {
    const std::size_t m = g.size();
    AplpMatrix p(m, PathLength::none());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (g.has_edge(i, j)) {
                p(i, j) = PathLength::of(1);
            } else if (i == j) {
                p(i, j) = PathLength::of(0);
            }
        }
    }
    return p;
}

// All-pairs longest paths by repeated max-distance squaring. Exact on DAGs;
// on cyclic graphs some diagonal entry ends up positive.
[[nodiscard]] inline AplpMatrix aplp(const OrderGraph& g) {
    AplpMatrix p = base_path_matrix(g);
    for (std::size_t s = aplp_squarings(g.size()); s > 0; --s) {
        p = max_distance_product(p, p);
    }
    return p;
}

[[nodiscard]] inline std::int64_t trace(const AplpMatrix& p) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        sum += p(i, i).value_or(0);
    }
    return sum;
}

[[nodiscard]] inline bool has_cycle(const AplpMatrix& p) { return trace(p) > 0; }

[[nodiscard]] inline bool is_sat(const OrderingTerm& q, std::size_t m) {
    return !has_cycle(aplp(order_graph(q, m)));
}

// Column sums of the adjacency matrix.
[[nodiscard]] inline std::vector<std::size_t> in_degrees(const OrderGraph& g) {
    std::vector<std::size_t> deg(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            deg[j] += g.adjacency()(i, j);
        }
    }
    return deg;
}

[[nodiscard]] inline std::vector<std::size_t> roots(const OrderGraph& g) {
    const auto deg = in_degrees(g);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < deg.size(); ++j) {
        if (deg[j] == 0) {
            out.push_back(j);
        }
    }
    return out;
}

// Whether vertex k has in-degree zero in order_graph(q), read straight off
// the literals: an in-edge into k is a literal with k on the smaller side.
[[nodiscard]] inline bool is_root_in(const OrderingTerm& q, std::size_t k) {
    return std::none_of(q.literals().begin(), q.literals().end(),
                        [k](const OrderingLiteral& l) { return l.lesser == k; });
}

} // namespace scnet
