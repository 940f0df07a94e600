#pragma once

// Batch SC-layer built on the tensor kernels. Per-row work is limited to
// precondition checks and the disjunct search; every row then goes through
// one batched APLP + topsort + permutation, with rows that need no change
// carrying the empty term (which leaves them as they are).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scnet/batched.hpp"
#include "scnet/constraints.hpp"
#include "scnet/sclayer.hpp"

namespace scnet {

[[nodiscard]] inline std::vector<RepairOutcome>
self_repair_vectorized(const ConstraintSet& phi, std::span<const std::vector<double>> xs,
                       std::span<const std::vector<double>> ys, const RepairOptions& options = {},
                       unsigned threads = 1) {
    if (xs.size() != ys.size()) {
        throw ShapeError("batch has " + std::to_string(xs.size()) + " inputs but " +
                         std::to_string(ys.size()) + " logit rows");
    }
    const std::size_t batch = xs.size();
    std::vector<RepairOutcome> out(batch);
    std::vector<OrderingTerm> terms(batch);
    std::vector<bool> via_topsort(batch, false);

    for (std::size_t r = 0; r < batch; ++r) {
        check_shapes(phi, xs[r], ys[r]);
        auto& o = out[r];
        bool safe = true;
        for (auto k : fired_constraints(phi, xs[r])) {
            o.fired.push_back(phi.constraints[k].name);
            safe = safe && eval_formula(phi.constraints[k].post, ys[r]);
        }
        if (safe) {
            o.already_safe = true;
            o.result = ys[r];
            continue;
        }
        const OrderingFormula active = active_postcondition(phi, xs[r]);
        if (options.fast_path) {
            if (auto excluded = match_not_maximal(active, phi.m)) {
                o.used_fast_path = true;
                if (excluded->size() < phi.m) {
                    o.result = repair_not_maximal(ys[r], *excluded);
                    o.chosen_disjunct = 0;
                }
                continue;
            }
        }
        SolveResult solved = solve_formula(active, phi.m, ys[r], {options.budget, options.on_rejected});
        o.visited = solved.visited;
        if (solved.term) {
            o.chosen_disjunct = solved.dnf_index;
            terms[r] = std::move(*solved.term);
            via_topsort[r] = true;
        }
    }

    const auto reordered = batched_reorder(terms, ys, phi.m, threads);
    for (std::size_t r = 0; r < batch; ++r) {
        if (via_topsort[r]) out[r].result = reordered[r];
    }
    return out;
}

} // namespace scnet
