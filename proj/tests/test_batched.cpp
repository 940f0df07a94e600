#include <gtest/gtest.h>

#include <vector>

#include "scnet/batched.hpp"
#include "scnet/sclayer.hpp"
#include "scnet/vectorized.hpp"
#include "support.hpp"

using namespace scnet;
using scnet::testing::Rng;

TEST(Batched, SentinelIsMinusTwoM) {
    const PathTensor t(3, 7, 0.0);
    EXPECT_EQ(t.sentinel(), -14.0);
}

TEST(Batched, AplpSlicesMatchScalar) {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = scnet::testing::pick(rng, 1, 9);
        std::vector<OrderingTerm> terms;
        std::vector<OrderGraph> graphs;
        for (int b = 0; b < 8; ++b) {
            graphs.push_back(scnet::testing::random_graph(rng, m, scnet::testing::real(rng, 0.0, 0.4)));
            terms.push_back(scnet::testing::term_of(graphs.back()));
        }
        const auto p = batched_aplp(adjacency_tensor(terms, m), trial % 3 + 1);
        const auto cyclic = batched_has_cycle(p);
        for (std::size_t b = 0; b < graphs.size(); ++b) {
            const auto scalar = aplp(graphs[b]);
            EXPECT_EQ(cyclic[b], has_cycle(scalar));
            if (!has_cycle(scalar)) {
                EXPECT_EQ(to_aplp(p, b), scalar);
            }
            for (auto v : p.slice(b)) EXPECT_TRUE(v >= 0.0 || v == p.sentinel());
        }
    }
}

TEST(Batched, ReorderMatchesScalar) {
    Rng rng(62);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = scnet::testing::pick(rng, 1, 8);
        std::vector<OrderingTerm> terms;
        std::vector<std::vector<double>> ys;
        for (int b = 0; b < 6; ++b) {
            terms.push_back(scnet::testing::term_of(scnet::testing::random_dag(rng, m, 0.3)));
            ys.push_back(scnet::testing::distinct_logits(rng, m));
        }
        const auto out = batched_reorder(terms, ys, m, 2);
        const auto ranks = batched_ranks(batched_topsort_keys(batched_aplp(adjacency_tensor(terms, m)), ys), terms.size(), m);
        for (std::size_t b = 0; b < terms.size(); ++b) {
            EXPECT_EQ(out[b], reorder(terms[b], ys[b]));
            EXPECT_EQ(ranks[b], stable_topsort(order_graph(terms[b], m), ys[b]));
        }
    }
}

TEST(Batched, CyclicTermRejected) {
    const std::vector<OrderingTerm> terms{OrderingTerm{{0, 1}, {1, 0}}};
    const std::vector<std::vector<double>> ys{{1, 2}};
    EXPECT_THROW((void)batched_reorder(terms, ys, 2), ContractViolation);
}

TEST(Batched, KeysShapeChecked) {
    const std::vector<OrderingTerm> terms{OrderingTerm{}};
    const std::vector<std::vector<double>> ys{{1, 2, 3}};
    const auto p = batched_aplp(adjacency_tensor(terms, 2));
    EXPECT_THROW((void)batched_topsort_keys(p, ys), ShapeError);
}

TEST(Vectorized, MatchesRowwiseRepair) {
    Rng rng(63);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = scnet::testing::pick(rng, 2, 6);
        const auto phi = scnet::testing::random_phi(rng, m, 3, 3);
        std::vector<std::vector<double>> xs, ys;
        for (int r = 0; r < 40; ++r) {
            xs.push_back({scnet::testing::real(rng, -1, 1), scnet::testing::real(rng, -1, 1)});
            ys.push_back(scnet::testing::distinct_logits(rng, m));
        }
        for (bool fast : {true, false}) {
            RepairOptions opts;
            opts.fast_path = fast;
            const auto batch = self_repair_vectorized(phi, xs, ys, opts, 2);
            for (std::size_t r = 0; r < xs.size(); ++r) {
                const auto one = self_repair(phi, xs[r], ys[r], opts);
                EXPECT_EQ(batch[r].result, one.result);
                EXPECT_EQ(batch[r].already_safe, one.already_safe);
                EXPECT_EQ(batch[r].chosen_disjunct, one.chosen_disjunct);
                EXPECT_EQ(batch[r].fired, one.fired);
            }
        }
    }
}
