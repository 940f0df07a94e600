#pragma once

// The self-correcting layer. Given constraints Phi, an input x and logits y:
// return y untouched when Phi(x, y) already holds; otherwise search the
// prioritized DNF of the active postcondition for a satisfiable term and
// permute y to satisfy it, or abstain (bottom) when no such term exists.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/dnf.hpp"
#include "scnet/errors.hpp"
#include "scnet/ordergraph.hpp"
#include "scnet/toposort.hpp"

namespace scnet {

struct SolveOptions {
    std::uint64_t budget = PrioritizedDnf::kDefaultBudget;
    // Called with every term solve() rejects as unsatisfiable, in visit order.
    std::function<void(const OrderingTerm&)> on_rejected;
};

struct SolveResult {
    std::optional<OrderingTerm> term; // nullopt is bottom
    std::optional<std::size_t> dnf_index;
    bool preserves_top = false;
    std::uint64_t visited = 0; // satisfiability checks performed
};

[[nodiscard]] inline SolveResult solve_formula(const OrderingFormula& active, std::size_t m,
                                               std::span<const double> y,
                                               const SolveOptions& options = {}) {
    SolveResult result;
    PrioritizedDnf stream(active, argmax(y), options.budget);
    while (auto candidate = stream.next()) {
        ++result.visited;
        if (is_sat(candidate->term, m)) {
            result.term = std::move(candidate->term);
            result.dnf_index = candidate->dnf_index;
            result.preserves_top = candidate->preserves_top;
            return result;
        }
        if (options.on_rejected) {
            options.on_rejected(candidate->term);
        }
    }
    return result;
}

[[nodiscard]] inline SolveResult solve(const ConstraintSet& phi, std::span<const double> x,
                                       std::span<const double> y, const SolveOptions& options = {}) {
    check_shapes(phi, x, y);
    return solve_formula(active_postcondition(phi, x), phi.m, y, options);
}

// Permutes y so that it satisfies q: ranks come from the stable topsort and
// the r-th ranked vertex receives the r-th largest value of y.
[[nodiscard]] inline std::vector<double> reorder(const OrderingTerm& q, std::span<const double> y) {
    const OrderGraph g = order_graph(q, y.size());
    const AplpMatrix p = aplp(g);
    if (has_cycle(p)) {
        throw ContractViolation("reorder called with an unsatisfiable term");
    }
    const auto keys = topsort_keys(p, y);
    const auto pi = RankPermutation::from_order(order_by_keys(keys.value, keys.depth));
    const auto sorted = descending_argsort(y);
    std::vector<double> out(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        out[j] = y[sorted[pi[j]]];
    }
    return out;
}

// Permutes y so that no index in `excluded` holds the maximum. Follows the
// verified mask/argsort/roll procedure step by step.
[[nodiscard]] inline std::vector<double> repair_not_maximal(std::span<const double> y,
                                                            std::span<const std::size_t> excluded) {
    const std::size_t d = y.size();
    std::vector<std::uint8_t> mask(d, 0);
    for (auto i : excluded) {
        if (i >= d) {
            throw ContractViolation("repair_not_maximal: index " + std::to_string(i) +
                                    " out of range");
        }
        mask[i] = 1;
    }
    const auto masked = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
    if (masked >= d) {
        throw ContractViolation("repair_not_maximal: every index is excluded");
    }

    const std::vector<std::size_t> perm = descending_argsort(y);
    std::vector<double> sorted(d);
    for (std::size_t i = 0; i < d; ++i) {
        sorted[i] = y[perm[i]];
    }
    std::vector<std::size_t> perm_inv(d);
    for (std::size_t i = 0; i < d; ++i) {
        perm_inv[perm[i]] = i;
    }
    std::vector<std::uint8_t> mask_perm(d);
    for (std::size_t i = 0; i < d; ++i) {
        mask_perm[i] = mask[perm[i]];
    }
    const auto r = static_cast<std::size_t>(
        std::min_element(mask_perm.begin(), mask_perm.end()) - mask_perm.begin());

    std::vector<double> concat(sorted);
    std::rotate(concat.begin(), concat.begin() + 1, concat.begin() + static_cast<std::ptrdiff_t>(r) + 1);

    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = concat[perm_inv[i]];
    }
    return out;
}

// If `active` is a conjunction of "y_k is not maximal" constraints, i.e.
// each conjunct is an Or (or single literal) of y_k < y_j covering every
// j != k, returns the set of such k. Otherwise nullopt.
[[nodiscard]] inline std::optional<std::vector<std::size_t>>
match_not_maximal(const OrderingFormula& active, std::size_t m) {
    std::vector<const OrderingFormula*> conjuncts;
    if (active.kind() == OrderingFormula::Kind::And) {
        for (const auto& c : active.children()) conjuncts.push_back(&c);
    } else {
        conjuncts.push_back(&active);
    }
    std::vector<std::size_t> excluded;
    for (const auto* c : conjuncts) {
        std::vector<const OrderingFormula*> lits;
        if (c->kind() == OrderingFormula::Kind::Literal) {
            lits.push_back(c);
        } else if (c->kind() == OrderingFormula::Kind::Or) {
            for (const auto& l : c->children()) {
                if (l.kind() != OrderingFormula::Kind::Literal) return std::nullopt;
                lits.push_back(&l);
            }
        } else {
            return std::nullopt;
        }
        const std::size_t k = lits.front()->lit().lesser;
        std::vector<bool> covered(m, false);
        for (const auto* l : lits) {
            if (l->lit().lesser != k || l->lit().greater >= m) return std::nullopt;
            covered[l->lit().greater] = true;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (j != k && !covered[j]) return std::nullopt;
        }
        excluded.push_back(k);
    }
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    return excluded;
}

struct RepairOptions {
    std::uint64_t budget = PrioritizedDnf::kDefaultBudget;
    bool fast_path = true; // use repair_not_maximal when the active formula allows it
    std::function<void(const OrderingTerm&)> on_rejected;
};

enum class RepairStatus { AlreadySafe, Repaired, Bottom };

struct RepairOutcome {
    std::optional<std::vector<double>> result; // nullopt is bottom
    std::vector<std::string> fired;
    std::optional<std::size_t> chosen_disjunct;
    bool already_safe = false;
    bool used_fast_path = false;
    std::uint64_t visited = 0;

    [[nodiscard]] bool bottom() const noexcept { return !result.has_value(); }

    [[nodiscard]] RepairStatus status() const noexcept {
        if (already_safe) return RepairStatus::AlreadySafe;
        return result ? RepairStatus::Repaired : RepairStatus::Bottom;
    }
};

[[nodiscard]] inline RepairOutcome self_repair(const ConstraintSet& phi, std::span<const double> x,
                                               std::span<const double> y,
                                               const RepairOptions& options = {}) {
    check_shapes(phi, x, y);
    RepairOutcome out;
    const auto fired = fired_constraints(phi, x);
    bool safe = true;
    for (auto k : fired) {
        out.fired.push_back(phi.constraints[k].name);
        safe = safe && eval_formula(phi.constraints[k].post, y);
    }
    if (safe) {
        out.already_safe = true;
        out.result.emplace(y.begin(), y.end());
        return out;
    }

    const OrderingFormula active = active_postcondition(phi, x);
    if (options.fast_path) {
        if (auto excluded = match_not_maximal(active, phi.m)) {
            out.used_fast_path = true;
            if (excluded->size() < phi.m) {
                out.result = repair_not_maximal(y, *excluded);
                out.chosen_disjunct = 0;
            }
            return out;
        }
    }

    SolveOptions solve_options{options.budget, options.on_rejected};
    SolveResult solved = solve_formula(active, phi.m, y, solve_options);
    out.visited = solved.visited;
    if (solved.term) {
        out.chosen_disjunct = solved.dnf_index;
        out.result = reorder(*solved.term, y);
    }
    return out;
}

// Row-wise self_repair. Rows are split into contiguous chunks, one per
// worker; a row that exceeds the budget stores its error instead of an
// outcome.
struct BatchRow {
    std::optional<RepairOutcome> outcome;
    std::optional<std::string> budget_error;
};

[[nodiscard]] inline std::vector<BatchRow>
self_repair_batch(const ConstraintSet& phi, std::span<const std::vector<double>> xs,
                  std::span<const std::vector<double>> ys, const RepairOptions& options = {},
                  unsigned threads = 1) {
    if (xs.size() != ys.size()) {
        throw ShapeError("batch has " + std::to_string(xs.size()) + " inputs but " +
                         std::to_string(ys.size()) + " logit rows");
    }
    std::vector<BatchRow> rows(xs.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            try {
                rows[r].outcome = self_repair(phi, xs[r], ys[r], options);
            } catch (const BudgetExceeded& e) {
                rows[r].budget_error = e.what();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(xs.size())));
    if (threads <= 1) {
        work(0, xs.size());
        return rows;
    }
    // Shape errors must surface on the caller's thread.
    for (std::size_t r = 0; r < xs.size(); ++r) {
        check_shapes(phi, xs[r], ys[r]);
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (xs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(xs.size(), begin + chunk);
        if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
    return rows;
}

} // namespace scnet
