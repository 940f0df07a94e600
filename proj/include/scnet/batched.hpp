#pragma once

// Batched, branch-free form of the graph pipeline. A batch of B order graphs
// is a B x m x m tensor of doubles; "no path" is the finite sentinel -2m so
// the squaring kernel is plain add/max arithmetic. After each product every
// entry below -m is clamped back to the sentinel: real longest paths stay
// below m, so a sentinel-plus-length sum always lands below -m.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/errors.hpp"
#include "scnet/ordergraph.hpp"
#include "scnet/toposort.hpp"

namespace scnet {

class PathTensor {
  public:
    PathTensor(std::size_t batch, std::size_t m, double fill)
        : batch_(batch), m_(m), data_(batch * m * m, fill) {}

    [[nodiscard]] std::size_t batch() const noexcept { return batch_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_; }
    [[nodiscard]] double sentinel() const noexcept { return -2.0 * static_cast<double>(m_); }

    double& operator()(std::size_t b, std::size_t i, std::size_t j) {
        return data_[(b * m_ + i) * m_ + j];
    }
    double operator()(std::size_t b, std::size_t i, std::size_t j) const {
        return data_[(b * m_ + i) * m_ + j];
    }

    [[nodiscard]] std::span<double> slice(std::size_t b) {
        return std::span<double>(data_).subspan(b * m_ * m_, m_ * m_);
    }
    [[nodiscard]] std::span<const double> slice(std::size_t b) const {
        return std::span<const double>(data_).subspan(b * m_ * m_, m_ * m_);
    }

  private:
    std::size_t batch_;
    std::size_t m_;
    std::vector<double> data_;
};

namespace detail {

template <class Fn>
void for_each_slice(std::size_t batch, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(batch)));
    if (threads <= 1) {
        for (std::size_t b = 0; b < batch; ++b) fn(b);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (batch + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(batch, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t b = begin; b < end; ++b) fn(b);
        });
    }
    for (auto& th : pool) th.join();
}

// out = max-plus square of `in` for one m x m slice, then sentinel clamp.
inline void square_slice(std::span<const double> in, std::span<double> out, std::size_t m,
                         double sentinel) {
    std::fill(out.begin(), out.end(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const double aik = in[i * m + k];
            const double* brow = &in[k * m];
            double* orow = &out[i * m];
            for (std::size_t j = 0; j < m; ++j) {
                orow[j] = std::max(orow[j], aik + brow[j]);
            }
        }
    }
    const double floor = sentinel / 2.0; // -m
    for (auto& v : out) {
        if (v < floor) v = sentinel;
    }
}

} // namespace detail

// Adjacency tensor of a batch of terms over m outputs.
[[nodiscard]] inline PathTensor adjacency_tensor(std::span<const OrderingTerm> terms, std::size_t m) {
    PathTensor adj(terms.size(), m, 0.0);
    for (std::size_t b = 0; b < terms.size(); ++b) {
        for (const auto& lit : terms[b].literals()) {
            if (lit.lesser >= m || lit.greater >= m) {
                throw ContractViolation("term references index beyond m = " + std::to_string(m));
            }
            adj(b, lit.greater, lit.lesser) = 1.0;
        }
    }
    return adj;
}

[[nodiscard]] inline PathTensor batched_aplp(const PathTensor& adj, unsigned threads = 1) {
    const std::size_t m = adj.dim();
    PathTensor p(adj.batch(), m, adj.sentinel());
    const double sentinel = adj.sentinel();
    const std::size_t steps = aplp_squarings(m);
    detail::for_each_slice(adj.batch(), threads, [&](std::size_t b) {
        auto cur = p.slice(b);
        const auto a = adj.slice(b);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double e = a[i * m + j];
                cur[i * m + j] = e == 1.0 ? 1.0 : (i == j ? 0.0 : sentinel);
            }
        }
        std::vector<double> tmp(m * m);
        for (std::size_t s = 0; s < steps; ++s) {
            detail::square_slice(cur, tmp, m, sentinel);
            std::copy(tmp.begin(), tmp.end(), cur.begin());
        }
    });
    return p;
}

// Per-slice cycle flags: trace of P with negative entries read as 0 is > 0.
[[nodiscard]] inline std::vector<bool> batched_has_cycle(const PathTensor& p) {
    std::vector<bool> out(p.batch(), false);
    for (std::size_t b = 0; b < p.batch(); ++b) {
        double tr = 0.0;
        for (std::size_t i = 0; i < p.dim(); ++i) {
            tr += std::max(0.0, p(b, i, i));
        }
        out[b] = tr > 0.0;
    }
    return out;
}

struct BatchedKeys {
    std::vector<double> value; // B x m
    std::vector<double> depth; // B x m
};

// v_j = min_i where(P_ij >= 0, y_i, inf); d_j = max_i P_ij.
[[nodiscard]] inline BatchedKeys batched_topsort_keys(const PathTensor& p,
                                                      std::span<const std::vector<double>> ys) {
    const std::size_t m = p.dim();
    if (ys.size() != p.batch()) {
        throw ShapeError("batched keys: " + std::to_string(ys.size()) + " logit rows for batch of " +
                         std::to_string(p.batch()));
    }
    BatchedKeys keys{std::vector<double>(p.batch() * m, std::numeric_limits<double>::infinity()),
                     std::vector<double>(p.batch() * m, -std::numeric_limits<double>::infinity())};
    for (std::size_t b = 0; b < p.batch(); ++b) {
        if (ys[b].size() != m) {
            throw ShapeError("batched keys: logit row " + std::to_string(b) + " has wrong length");
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double pij = p(b, i, j);
                const double cand = pij >= 0.0 ? ys[b][i] : std::numeric_limits<double>::infinity();
                keys.value[b * m + j] = std::min(keys.value[b * m + j], cand);
                keys.depth[b * m + j] = std::max(keys.depth[b * m + j], pij);
            }
        }
    }
    return keys;
}

[[nodiscard]] inline std::vector<RankPermutation> batched_ranks(const BatchedKeys& keys,
                                                                std::size_t batch, std::size_t m) {
    std::vector<RankPermutation> out;
    out.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* v = &keys.value[b * m];
        const double* d = &keys.depth[b * m];
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
            if (v[a] != v[c]) return v[a] > v[c];
            if (d[a] != d[c]) return d[a] < d[c];
            return a < c;
        });
        out.push_back(RankPermutation::from_order(order));
    }
    return out;
}

// Batched reorder. Every term must be satisfiable; an empty term leaves its
// row unchanged, so already-safe rows can ride along without a branch.
[[nodiscard]] inline std::vector<std::vector<double>>
batched_reorder(std::span<const OrderingTerm> terms, std::span<const std::vector<double>> ys,
                std::size_t m, unsigned threads = 1) {
    const PathTensor p = batched_aplp(adjacency_tensor(terms, m), threads);
    const auto cyclic = batched_has_cycle(p);
    for (std::size_t b = 0; b < cyclic.size(); ++b) {
        if (cyclic[b]) {
            throw ContractViolation("batched reorder: term " + std::to_string(b) + " is unsatisfiable");
        }
    }
    const auto ranks = batched_ranks(batched_topsort_keys(p, ys), terms.size(), m);
    std::vector<std::vector<double>> out(terms.size(), std::vector<double>(m));
    for (std::size_t b = 0; b < terms.size(); ++b) {
        const auto sorted = descending_argsort(ys[b]);
        for (std::size_t j = 0; j < m; ++j) {
            out[b][j] = ys[b][sorted[ranks[b][j]]];
        }
    }
    return out;
}

// Decodes one slice into the scalar representation (negative -> no path).
[[nodiscard]] inline AplpMatrix to_aplp(const PathTensor& p, std::size_t b) {
    AplpMatrix out(p.dim(), PathLength::none());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        for (std::size_t j = 0; j < p.dim(); ++j) {
            const double v = p(b, i, j);
            if (v >= 0.0) out(i, j) = PathLength::of(static_cast<std::int32_t>(v));
        }
    }
    return out;
}

} // namespace scnet
