#pragma once

// Random instance generators and fixtures shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/ordergraph.hpp"

namespace scnet::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double real(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline OrderingLiteral random_literal(Rng& rng, std::size_t m) {
    const std::size_t i = pick(rng, 0, m - 1);
    std::size_t j = pick(rng, 0, m - 2);
    if (j >= i) ++j;
    return {i, j};
}

// Distinct logits: a shuffled arithmetic ladder with jitter.
inline std::vector<double> distinct_logits(Rng& rng, std::size_t m) {
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = static_cast<double>(i) * 10.0 + real(rng, 0.0, 9.0);
    std::shuffle(y.begin(), y.end(), rng);
    return y;
}

// Literal, or an And/Or tree of bounded depth over m outputs.
inline OrderingFormula random_formula(Rng& rng, std::size_t m, int depth) {
    if (depth == 0 || pick(rng, 0, 2) == 0) return OrderingFormula::literal(random_literal(rng, m));
    std::vector<OrderingFormula> kids;
    const std::size_t k = pick(rng, 1, 3);
    for (std::size_t c = 0; c < k; ++c) kids.push_back(random_formula(rng, m, depth - 1));
    return pick(rng, 0, 1) ? OrderingFormula::all_of(std::move(kids)) : OrderingFormula::any_of(std::move(kids));
}

// Or of beta terms, each a conjunction of one to three literals.
inline OrderingFormula random_post(Rng& rng, std::size_t m, std::size_t beta) {
    std::vector<OrderingFormula> terms;
    for (std::size_t b = 0; b < beta; ++b) {
        std::vector<OrderingFormula> lits;
        const std::size_t k = pick(rng, 1, 3);
        for (std::size_t l = 0; l < k; ++l) lits.push_back(OrderingFormula::literal(random_literal(rng, m)));
        terms.push_back(lits.size() == 1 ? lits.front() : OrderingFormula::all_of(std::move(lits)));
    }
    return terms.size() == 1 ? terms.front() : OrderingFormula::any_of(std::move(terms));
}

// Constraint set over n = 2 inputs: each precondition is empty (always
// fires) or a random half-plane.
inline ConstraintSet random_phi(Rng& rng, std::size_t m, std::size_t alpha, std::size_t beta) {
    ConstraintSet phi;
    phi.n = 2;
    phi.m = m;
    for (std::size_t a = 0; a < alpha; ++a) {
        SafeOrderingConstraint c;
        c.name = "r" + std::to_string(a);
        if (pick(rng, 0, 3) != 0) {
            c.pre.atoms.push_back({{real(rng, -1, 1), real(rng, -1, 1)},
                                   pick(rng, 0, 1) ? CompareOp::Le : CompareOp::Ge, real(rng, -0.5, 0.5)});
        }
        c.post = random_post(rng, m, beta);
        phi.constraints.push_back(std::move(c));
    }
    return phi;
}

inline OrderGraph random_graph(Rng& rng, std::size_t m, double p) {
    OrderGraph g(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && real(rng) < p) g.add_edge(i, j);
    return g;
}

// Edges only from lower to higher position in a random vertex order.
inline OrderGraph random_dag(Rng& rng, std::size_t m, double p) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    OrderGraph g(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (real(rng) < p) g.add_edge(order[a], order[b]);
    return g;
}

// The term whose order graph is g (edge i->j is the literal y_j < y_i).
inline OrderingTerm term_of(const OrderGraph& g) {
    std::vector<OrderingLiteral> lits;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g.has_edge(i, j)) lits.push_back({j, i});
    return OrderingTerm(std::move(lits));
}

inline bool is_permutation_of(const std::vector<double>& a, std::span<const double> b) {
    std::vector<double> x(a), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

// Index of the largest entry; ties are impossible for distinct_logits.
inline std::size_t top_index(std::span<const double> y) {
    return static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
}

// ACAS Xu phi2 over its five inputs (rho, theta, psi, v_own, v_int).
inline ConstraintSet acas_phi2() {
    ConstraintSet phi;
    phi.n = 5;
    phi.m = 5;
    phi.constraints.push_back(
        {"phi2",
         {{{{1, 0, 0, 0, 0}, CompareOp::Ge, 55947.691},
           {{0, 0, 0, 1, 0}, CompareOp::Ge, 1145},
           {{0, 0, 0, 0, 1}, CompareOp::Le, 60}}},
         OrderingFormula::any_of({OrderingFormula::literal(1, 0), OrderingFormula::literal(2, 0),
                                  OrderingFormula::literal(3, 0), OrderingFormula::literal(4, 0)})});
    return phi;
}

inline const std::vector<double>& acas_input() {
    static const std::vector<double> x{60000, 0, 0, 1200, 50};
    return x;
}

// Two constraints that clash exactly at x = 0.5.
inline ConstraintSet clash_phi() {
    ConstraintSet phi;
    phi.n = 1;
    phi.m = 2;
    phi.constraints.push_back({"low", {{{{1}, CompareOp::Le, 0.5}}}, OrderingFormula::literal(0, 1)});
    phi.constraints.push_back({"high", {{{{1}, CompareOp::Ge, 0.5}}}, OrderingFormula::literal(1, 0)});
    return phi;
}

// Graph from the worked topsort trace: edges (0,4), (1,2), (1,3), (1,4), (3,2).
inline OrderGraph trace_graph() {
    OrderGraph g(5);
    g.add_edge(0, 4);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    g.add_edge(1, 4);
    g.add_edge(3, 2);
    return g;
}

} // namespace scnet::testing
