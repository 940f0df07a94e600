#pragma once

// Brute-force reference implementations for tests and `scnet oracle`.
// These only read the data types; they never call the production
// evaluation, graph, sort, or repair code.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/errors.hpp"
#include "scnet/ordergraph.hpp"

namespace scnet::oracle {

inline constexpr std::size_t kMaxClasses = 8;

inline void guard(std::size_t m) {
    if (m > kMaxClasses) {
        throw OracleGuardError("oracle refuses m = " + std::to_string(m) + " (limit " +
                               std::to_string(kMaxClasses) + ")");
    }
}

// Formula truth under an assignment of distinct values.
inline bool truth(const OrderingFormula& f, const std::vector<int>& value) {
    switch (f.kind()) {
    case OrderingFormula::Kind::Top: return true;
    case OrderingFormula::Kind::Literal: return value[f.lit().lesser] < value[f.lit().greater];
    case OrderingFormula::Kind::And:
        for (const auto& c : f.children())
            if (!truth(c, value)) return false;
        return true;
    case OrderingFormula::Kind::Or:
        for (const auto& c : f.children())
            if (truth(c, value)) return true;
        return false;
    }
    return false;
}

// Visits every assignment of the values 0..m-1 to the m outputs; stops early
// when `visit` returns true.
inline bool any_assignment(std::size_t m, const std::function<bool(const std::vector<int>&)>& visit) {
    guard(m);
    std::vector<int> value(m);
    std::iota(value.begin(), value.end(), 0);
    do {
        if (visit(value)) return true;
    } while (std::next_permutation(value.begin(), value.end()));
    return false;
}

inline bool satisfiable(const OrderingFormula& f, std::size_t m) {
    return any_assignment(m, [&](const std::vector<int>& v) { return truth(f, v); });
}

// Some satisfying assignment puts the maximum at index k.
inline bool argmax_preserving(const OrderingFormula& f, std::size_t m, std::size_t k) {
    return any_assignment(m, [&](const std::vector<int>& v) {
        return v[k] == static_cast<int>(m) - 1 && truth(f, v);
    });
}

inline bool term_satisfiable(const OrderingTerm& q, std::size_t m) {
    return any_assignment(m, [&](const std::vector<int>& v) {
        return std::all_of(q.literals().begin(), q.literals().end(),
                           [&](const OrderingLiteral& l) { return v[l.lesser] < v[l.greater]; });
    });
}

inline bool precondition_holds(const Precondition& pre, std::span<const double> x) {
    for (const auto& a : pre.atoms) {
        long double lhs = 0;
        for (std::size_t i = 0; i < x.size(); ++i) lhs += a.coeffs[i] * x[i];
        const auto s = static_cast<double>(lhs);
        const bool ok = a.op == CompareOp::Le   ? s <= a.bound
                        : a.op == CompareOp::Ge ? s >= a.bound
                        : a.op == CompareOp::Lt ? s < a.bound
                                                : s > a.bound;
        if (!ok) return false;
    }
    return true;
}

// Postconditions whose preconditions hold at x.
inline std::vector<const OrderingFormula*> fired(const ConstraintSet& phi, std::span<const double> x) {
    std::vector<const OrderingFormula*> out;
    for (const auto& c : phi.constraints) {
        if (precondition_holds(c.pre, x)) out.push_back(&c.post);
    }
    return out;
}

// exists y. Phi(x, y)
inline bool phi_satisfiable(const ConstraintSet& phi, std::span<const double> x) {
    const auto posts = fired(phi, x);
    return any_assignment(phi.m, [&](const std::vector<int>& v) {
        return std::all_of(posts.begin(), posts.end(), [&](const auto* f) { return truth(*f, v); });
    });
}

// exists y. Phi(x, y) and argmax y = k
inline bool phi_argmax_preserving(const ConstraintSet& phi, std::span<const double> x, std::size_t k) {
    const auto posts = fired(phi, x);
    return any_assignment(phi.m, [&](const std::vector<int>& v) {
        return v[k] == static_cast<int>(phi.m) - 1 &&
               std::all_of(posts.begin(), posts.end(), [&](const auto* f) { return truth(*f, v); });
    });
}

// Phi(x, y) for concrete logits, with the lower index winning ties.
inline bool phi_holds(const ConstraintSet& phi, std::span<const double> x, std::span<const double> y) {
    std::vector<std::size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return y[a] != y[b] ? y[a] < y[b] : a > b;
    });
    std::vector<int> rank(y.size());
    for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<int>(r);
    for (const auto* f : fired(phi, x)) {
        if (!truth(*f, rank)) return false;
    }
    return true;
}

// Depth-first search with white/grey/black colouring.
inline bool has_cycle(const OrderGraph& g) {
    guard(g.size());
    const std::size_t m = g.size();
    std::vector<int> colour(m, 0);
    std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
        colour[u] = 1;
        for (std::size_t v = 0; v < m; ++v) {
            if (!g.has_edge(u, v)) continue;
            if (colour[v] == 1) return true;
            if (colour[v] == 0 && dfs(v)) return true;
        }
        colour[u] = 2;
        return false;
    };
    for (std::size_t u = 0; u < m; ++u) {
        if (colour[u] == 0 && dfs(u)) return true;
    }
    return false;
}

// Longest simple path lengths by exhaustive enumeration. Acyclic graphs only.
inline AplpMatrix longest_paths(const OrderGraph& g) {
    if (has_cycle(g)) {
        throw OracleGuardError("longest_paths oracle needs an acyclic graph");
    }
    const std::size_t m = g.size();
    AplpMatrix out(m, PathLength::none());
    std::vector<bool> on_path(m, false);
    std::function<void(std::size_t, std::size_t, std::int32_t)> walk =
        [&](std::size_t start, std::size_t u, std::int32_t len) {
            out(start, u) = PathLength::of(std::max(out(start, u).value_or(-1), len));
            on_path[u] = true;
            for (std::size_t v = 0; v < m; ++v) {
                if (g.has_edge(u, v) && !on_path[v]) walk(start, v, len + 1);
            }
            on_path[u] = false;
        };
    for (std::size_t s = 0; s < m; ++s) walk(s, s, 0);
    return out;
}

} // namespace scnet::oracle
