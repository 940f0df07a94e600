#pragma once

// Safe-ordering constraints: a precondition over inputs x (a conjunction of
// linear atoms) paired with an ordering formula over outputs y.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scnet/errors.hpp"

namespace scnet {

enum class CompareOp { Le, Ge, Lt, Gt };

inline const char* to_string(CompareOp op) {
    switch (op) {
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    }
    return "?";
}

// coeffs . x  op  bound
struct LinearAtom {
    std::vector<double> coeffs;
    CompareOp op = CompareOp::Le;
    double bound = 0.0;

    friend bool operator==(const LinearAtom&, const LinearAtom&) = default;
};

[[nodiscard]] inline bool eval_atom(const LinearAtom& atom, std::span<const double> x) {
    if (atom.coeffs.size() != x.size()) {
        throw ShapeError("linear atom has " + std::to_string(atom.coeffs.size()) +
                         " coefficients, input has " + std::to_string(x.size()));
    }
    double lhs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lhs += atom.coeffs[i] * x[i];
    }
    switch (atom.op) {
    case CompareOp::Le: return lhs <= atom.bound;
    case CompareOp::Ge: return lhs >= atom.bound;
    case CompareOp::Lt: return lhs < atom.bound;
    case CompareOp::Gt: return lhs > atom.bound;
    }
    return false;
}

// Conjunction of atoms; empty means true.
struct Precondition {
    std::vector<LinearAtom> atoms;

    friend bool operator==(const Precondition&, const Precondition&) = default;
};

[[nodiscard]] inline bool eval_pre(const Precondition& pre, std::span<const double> x) {
    return std::all_of(pre.atoms.begin(), pre.atoms.end(),
                       [&](const LinearAtom& a) { return eval_atom(a, x); });
}

// y[lesser] < y[greater]
struct OrderingLiteral {
    std::size_t lesser = 0;
    std::size_t greater = 0;

    [[nodiscard]] OrderingLiteral swapped() const { return {greater, lesser}; }

    friend auto operator<=>(const OrderingLiteral&, const OrderingLiteral&) = default;
};

// Strict total order on output components. Equal values are ordered by
// index: the lower index counts as the larger value. Every comparison of
// logits in this library goes through this predicate.
[[nodiscard]] inline bool value_less(std::span<const double> y, std::size_t i, std::size_t j) {
    return y[i] < y[j] || (y[i] == y[j] && i > j);
}

[[nodiscard]] inline bool eval_literal(const OrderingLiteral& lit, std::span<const double> y) {
    if (lit.lesser >= y.size() || lit.greater >= y.size()) {
        throw ShapeError("ordering literal references index beyond output dimension " +
                         std::to_string(y.size()));
    }
    return value_less(y, lit.lesser, lit.greater);
}

// Index of the maximal component under value_less (lowest index among ties).
[[nodiscard]] inline std::size_t argmax(std::span<const double> y) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (value_less(y, best, i)) {
            best = i;
        }
    }
    return best;
}

// Negation-free Boolean combination of ordering literals. Top is only
// produced by active_postcondition() when no precondition fires.
class OrderingFormula {
  public:
    enum class Kind { Top, Literal, And, Or };

    OrderingFormula() = default;

    static OrderingFormula top() { return OrderingFormula{}; }

    static OrderingFormula literal(std::size_t lesser, std::size_t greater) {
        if (lesser == greater) {
            throw ContractViolation("ordering literal compares index " + std::to_string(lesser) +
                                    " with itself");
        }
        OrderingFormula f;
        f.kind_ = Kind::Literal;
        f.literal_ = {lesser, greater};
        return f;
    }

    static OrderingFormula literal(OrderingLiteral lit) { return literal(lit.lesser, lit.greater); }

    static OrderingFormula all_of(std::vector<OrderingFormula> children) {
        return node(Kind::And, std::move(children));
    }

    static OrderingFormula any_of(std::vector<OrderingFormula> children) {
        return node(Kind::Or, std::move(children));
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_top() const noexcept { return kind_ == Kind::Top; }
    [[nodiscard]] const OrderingLiteral& lit() const noexcept { return literal_; }
    [[nodiscard]] std::span<const OrderingFormula> children() const noexcept { return children_; }

    // One past the largest output index referenced; 0 for Top.
    [[nodiscard]] std::size_t index_bound() const {
        switch (kind_) {
        case Kind::Top: return 0;
        case Kind::Literal: return std::max(literal_.lesser, literal_.greater) + 1;
        default: break;
        }
        std::size_t bound = 0;
        for (const auto& c : children_) {
            bound = std::max(bound, c.index_bound());
        }
        return bound;
    }

    friend bool operator==(const OrderingFormula&, const OrderingFormula&) = default;

  private:
    static OrderingFormula node(Kind kind, std::vector<OrderingFormula> children) {
        if (children.empty()) {
            throw ContractViolation("and/or node needs at least one child");
        }
        OrderingFormula f;
        f.kind_ = kind;
        f.children_ = std::move(children);
        return f;
    }

    Kind kind_ = Kind::Top;
    OrderingLiteral literal_{};
    std::vector<OrderingFormula> children_;
};

[[nodiscard]] inline bool eval_formula(const OrderingFormula& f, std::span<const double> y) {
    switch (f.kind()) {
    case OrderingFormula::Kind::Top: return true;
    case OrderingFormula::Kind::Literal: return eval_literal(f.lit(), y);
    case OrderingFormula::Kind::And:
        for (const auto& c : f.children()) {
            if (!eval_formula(c, y)) {
                return false;
            }
        }
        return true;
    case OrderingFormula::Kind::Or:
        for (const auto& c : f.children()) {
            if (eval_formula(c, y)) {
                return true;
            }
        }
        return false;
    }
    return false;
}

// Conjunction of literals, kept sorted and duplicate-free. Empty means true.
class OrderingTerm {
  public:
    OrderingTerm() = default;

    explicit OrderingTerm(std::vector<OrderingLiteral> literals) : literals_(std::move(literals)) {
        canonicalize();
    }

    OrderingTerm(std::initializer_list<OrderingLiteral> literals)
        : OrderingTerm(std::vector<OrderingLiteral>(literals)) {}

    [[nodiscard]] std::span<const OrderingLiteral> literals() const noexcept { return literals_; }
    [[nodiscard]] std::size_t size() const noexcept { return literals_.size(); }
    [[nodiscard]] bool empty() const noexcept { return literals_.empty(); }

    [[nodiscard]] bool contains(const OrderingLiteral& lit) const {
        return std::binary_search(literals_.begin(), literals_.end(), lit);
    }

    friend bool operator==(const OrderingTerm&, const OrderingTerm&) = default;

  private:
    void canonicalize() {
        for (const auto& l : literals_) {
            if (l.lesser == l.greater) {
                throw ContractViolation("ordering literal compares an index with itself");
            }
        }
        std::sort(literals_.begin(), literals_.end());
        literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
    }

    std::vector<OrderingLiteral> literals_;
};

[[nodiscard]] inline bool eval_term(const OrderingTerm& q, std::span<const double> y) {
    return std::all_of(q.literals().begin(), q.literals().end(),
                       [&](const OrderingLiteral& l) { return eval_literal(l, y); });
}

struct SafeOrderingConstraint {
    std::string name;
    Precondition pre;
    OrderingFormula post;

    friend bool operator==(const SafeOrderingConstraint&, const SafeOrderingConstraint&) = default;
};

struct ConstraintSet {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<SafeOrderingConstraint> constraints;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

// Throws ShapeError when any member disagrees with the declared n and m.
inline void validate(const ConstraintSet& phi) {
    if (phi.m == 0) {
        throw ShapeError("constraint set must declare m >= 1");
    }
    for (const auto& c : phi.constraints) {
        for (const auto& a : c.pre.atoms) {
            if (a.coeffs.size() != phi.n) {
                throw ShapeError("constraint '" + c.name + "' has an atom with " +
                                 std::to_string(a.coeffs.size()) + " coefficients, n = " +
                                 std::to_string(phi.n));
            }
        }
        if (c.post.is_top() || c.post.index_bound() > phi.m) {
            throw ShapeError("constraint '" + c.name + "' postcondition references index >= m = " +
                             std::to_string(phi.m));
        }
    }
}

inline void check_shapes(const ConstraintSet& phi, std::span<const double> x,
                         std::span<const double> y) {
    if (x.size() != phi.n) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", expected n = " +
                         std::to_string(phi.n));
    }
    if (y.size() != phi.m) {
        throw ShapeError("output has length " + std::to_string(y.size()) + ", expected m = " +
                         std::to_string(phi.m));
    }
}

// Indices of constraints whose precondition holds at x.
[[nodiscard]] inline std::vector<std::size_t> fired_constraints(const ConstraintSet& phi,
                                                                std::span<const double> x) {
    if (x.size() != phi.n) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", expected n = " +
                         std::to_string(phi.n));
    }
    std::vector<std::size_t> fired;
    for (std::size_t k = 0; k < phi.constraints.size(); ++k) {
        if (eval_pre(phi.constraints[k].pre, x)) {
            fired.push_back(k);
        }
    }
    return fired;
}

// Conjunction of the postconditions whose preconditions hold at x. A single
// firing constraint yields its postcondition unchanged; none yields Top.
[[nodiscard]] inline OrderingFormula active_postcondition(const ConstraintSet& phi,
                                                          std::span<const double> x) {
    auto fired = fired_constraints(phi, x);
    if (fired.empty()) {
        return OrderingFormula::top();
    }
    if (fired.size() == 1) {
        return phi.constraints[fired.front()].post;
    }
    std::vector<OrderingFormula> parts;
    parts.reserve(fired.size());
    for (auto k : fired) {
        parts.push_back(phi.constraints[k].post);
    }
    return OrderingFormula::all_of(std::move(parts));
}

// Phi(x, y): every constraint's precondition implies its postcondition.
[[nodiscard]] inline bool holds(const ConstraintSet& phi, std::span<const double> x,
                                std::span<const double> y) {
    check_shapes(phi, x, y);
    for (const auto& c : phi.constraints) {
        if (eval_pre(c.pre, x) && !eval_formula(c.post, y)) {
            return false;
        }
    }
    return true;
}

} // namespace scnet
