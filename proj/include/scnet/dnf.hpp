#pragma once

// Lazy disjunctive-normal-form enumeration of ordering formulas.
//
// Terms come out in a fixed order: an Or node walks its children left to
// right; an And node is a mixed-radix counter over its children with the
// leftmost child varying fastest. Nothing is materialized beyond the cursor
// tree, which has one node per formula node.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/errors.hpp"
#include "scnet/ordergraph.hpp"

namespace scnet {

// Number of DNF terms of f, saturating at UINT64_MAX.
[[nodiscard]] inline std::uint64_t dnf_size(const OrderingFormula& f) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    switch (f.kind()) {
    case OrderingFormula::Kind::Top:
    case OrderingFormula::Kind::Literal: return 1;
    case OrderingFormula::Kind::Or: {
        std::uint64_t total = 0;
        for (const auto& c : f.children()) {
            const auto k = dnf_size(c);
            total = (kMax - total < k) ? kMax : total + k;
        }
        return total;
    }
    case OrderingFormula::Kind::And: {
        std::uint64_t total = 1;
        for (const auto& c : f.children()) {
            const auto k = dnf_size(c);
            total = (k != 0 && total > kMax / k) ? kMax : total * k;
        }
        return total;
    }
    }
    return 0;
}

// The stream walks `f` in place, so `f` must outlive it.
class DnfStream {
  public:
    explicit DnfStream(const OrderingFormula& f) : root_(build(f)) { reset(root_); }
    explicit DnfStream(OrderingFormula&&) = delete;

    // Writes the next term into `out`; false once the expansion is exhausted.
    bool next(OrderingTerm& out) {
        if (done_) {
            return false;
        }
        if (started_ && !advance(root_)) {
            done_ = true;
            return false;
        }
        started_ = true;
        scratch_.clear();
        collect(root_, scratch_);
        out = OrderingTerm(scratch_);
        return true;
    }

    void restart() {
        reset(root_);
        started_ = false;
        done_ = false;
    }

  private:
    struct Node {
        const OrderingFormula* formula = nullptr;
        std::vector<Node> kids;
        std::size_t active = 0;
    };

    static Node build(const OrderingFormula& f) {
        Node n;
        n.formula = &f;
        for (const auto& c : f.children()) {
            n.kids.push_back(build(c));
        }
        return n;
    }

    static void reset(Node& n) {
        n.active = 0;
        switch (n.formula->kind()) {
        case OrderingFormula::Kind::Or: reset(n.kids.front()); break;
        case OrderingFormula::Kind::And:
            for (auto& k : n.kids) reset(k);
            break;
        default: break;
        }
    }

    static bool advance(Node& n) {
        switch (n.formula->kind()) {
        case OrderingFormula::Kind::Or:
            if (advance(n.kids[n.active])) {
                return true;
            }
            if (n.active + 1 < n.kids.size()) {
                ++n.active;
                reset(n.kids[n.active]);
                return true;
            }
            return false;
        case OrderingFormula::Kind::And:
            for (auto& k : n.kids) {
                if (advance(k)) {
                    return true;
                }
                reset(k);
            }
            return false;
        default: return false;
        }
    }

    static void collect(const Node& n, std::vector<OrderingLiteral>& out) {
        switch (n.formula->kind()) {
        case OrderingFormula::Kind::Literal: out.push_back(n.formula->lit()); break;
        case OrderingFormula::Kind::Or: collect(n.kids[n.active], out); break;
        case OrderingFormula::Kind::And:
            for (const auto& k : n.kids) collect(k, out);
            break;
        case OrderingFormula::Kind::Top: break;
        }
    }

    Node root_;
    std::vector<OrderingLiteral> scratch_;
    bool started_ = false;
    bool done_ = false;
};

// Convenience for tests and small formulas.
[[nodiscard]] inline std::vector<OrderingTerm> to_dnf(const OrderingFormula& f) {
    std::vector<OrderingTerm> terms;
    DnfStream stream(f);
    OrderingTerm t;
    while (stream.next(t)) {
        terms.push_back(t);
    }
    return terms;
}

struct PrioritizedTerm {
    OrderingTerm term;
    std::size_t dnf_index = 0;  // position in the unprioritized expansion
    bool preserves_top = false; // the favored vertex is a root of the term's graph
};

// Two passes over the DNF: first the terms whose order graph has `favored`
// as a root, then the rest. Each pass keeps expansion order. A pass that
// would enumerate more than `budget` terms throws BudgetExceeded.
class PrioritizedDnf {
  public:
    static constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

    PrioritizedDnf(const OrderingFormula& f, std::size_t favored,
                   std::uint64_t budget = kDefaultBudget)
        : stream_(f), favored_(favored), budget_(budget) {}
    PrioritizedDnf(OrderingFormula&&, std::size_t, std::uint64_t = kDefaultBudget) = delete;

    std::optional<PrioritizedTerm> next() {
        OrderingTerm t;
        while (pass_ < 2) {
            if (!stream_.next(t)) {
                ++pass_;
                index_ = 0;
                stream_.restart();
                continue;
            }
            const std::size_t index = index_++;
            if (index_ > budget_) {
                throw BudgetExceeded("disjunct enumeration exceeded budget of " +
                                     std::to_string(budget_));
            }
            const bool root = is_root_in(t, favored_);
            if (root == (pass_ == 0)) {
                return PrioritizedTerm{std::move(t), index, root};
            }
        }
        return std::nullopt;
    }

  private:
    DnfStream stream_;
    std::size_t favored_;
    std::uint64_t budget_;
    std::uint64_t index_ = 0;
    int pass_ = 0;
};

// Fully drained prioritized order; for tests.
[[nodiscard]] inline std::vector<PrioritizedTerm> prioritize(const OrderingFormula& f,
                                                             std::span<const double> y) {
    PrioritizedDnf stream(f, argmax(y));
    std::vector<PrioritizedTerm> out;
    while (auto t = stream.next()) {
        out.push_back(std::move(*t));
    }
    return out;
}

} // namespace scnet
