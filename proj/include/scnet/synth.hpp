#pragma once

// Synthetic constraint sets and labeled datasets D(alpha, beta, m).
//
// Each constraint has a box precondition b <= x <= b + epsilon (b drawn per
// dimension from [0, 1 - epsilon]) and a postcondition that is an Or of beta
// random acyclic, non-empty order graphs. Every ordered pair (i, j), i != j,
// is an edge with probability gamma / (m (m - 1)); empty or cyclic draws are
// resampled.
//
// Randomness: std::mt19937_64 (fully specified by the standard) seeded per
// stream through splitmix64, with our own integer/real mappings instead of
// <random> distributions, so outputs are identical across standard
// libraries. Streams are keyed by (seed, purpose, index).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scnet/constraints.hpp"
#include "scnet/dnf.hpp"
#include "scnet/errors.hpp"
#include "scnet/ordergraph.hpp"

namespace scnet {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

enum class RngStream : std::uint64_t { Constraint = 1, Covered = 2, Background = 3, Network = 4, Misc = 5 };

class SynthRng {
  public:
    SynthRng(std::uint64_t seed, RngStream stream, std::uint64_t index)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64((static_cast<std::uint64_t>(stream) << 48) ^ index))) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), by rejection.
    std::size_t below(std::size_t n) {
        if (n == 0) throw ContractViolation("SynthRng::below(0)");
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % bound);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller.
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::mt19937_64 engine_;
};

struct SynthConfig {
    std::size_t alpha = 4;
    std::size_t beta = 4;
    std::size_t m = 8;
    std::size_t n = 10;
    double gamma = 3.0;
    double epsilon = 0.4;
    std::size_t N = 2000;
    std::uint64_t seed = 0;

    void validate() const {
        if (alpha < 1 || beta < 1 || m < 1 || n < 1) {
            throw GenerationError("alpha, beta, m and n must all be >= 1");
        }
        if (!(epsilon > 0.0 && epsilon <= 1.0)) {
            throw GenerationError("epsilon must lie in (0, 1]");
        }
        if (m < 2) {
            throw GenerationError("m must be >= 2 to draw non-empty order graphs");
        }
        const double pairs = static_cast<double>(m) * static_cast<double>(m - 1);
        if (!(gamma > 0.0 && gamma < pairs)) {
            throw GenerationError("gamma must lie in (0, m(m-1)) = (0, " + std::to_string(pairs) + ")");
        }
    }

    [[nodiscard]] double edge_probability() const {
        return gamma / (static_cast<double>(m) * static_cast<double>(m - 1));
    }
};

inline constexpr std::size_t kGraphRetryCap = 10'000;
inline constexpr std::size_t kBackgroundRetryCap = 10'000;

// One random acyclic non-empty order graph, as a term.
[[nodiscard]] inline OrderingTerm random_dag_term(SynthRng& rng, std::size_t m, double p) {
    std::vector<OrderingLiteral> lits;
    for (std::size_t attempt = 0; attempt < kGraphRetryCap; ++attempt) {
        lits.clear();
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i != j && rng.bernoulli(p)) {
                    lits.push_back({j, i}); // edge i -> j is y_j < y_i
                }
            }
        }
        if (lits.empty()) continue;
        OrderingTerm q(lits);
        if (is_sat(q, m)) return q;
    }
    throw GenerationError("no acyclic non-empty graph after " + std::to_string(kGraphRetryCap) +
                          " draws (m = " + std::to_string(m) + ", p = " + std::to_string(p) + ")");
}

[[nodiscard]] inline OrderingFormula term_formula(const OrderingTerm& q) {
    if (q.size() == 1) {
        return OrderingFormula::literal(q.literals().front());
    }
    std::vector<OrderingFormula> lits;
    for (const auto& l : q.literals()) lits.push_back(OrderingFormula::literal(l));
    return OrderingFormula::all_of(std::move(lits));
}

[[nodiscard]] inline ConstraintSet gen_constraints(const SynthConfig& cfg) {
    cfg.validate();
    ConstraintSet phi;
    phi.n = cfg.n;
    phi.m = cfg.m;
    const double p = cfg.edge_probability();
    for (std::size_t l = 0; l < cfg.alpha; ++l) {
        SynthRng rng(cfg.seed, RngStream::Constraint, l);
        SafeOrderingConstraint c;
        c.name = "phi" + std::to_string(l);
        for (std::size_t d = 0; d < cfg.n; ++d) {
            const double lo = rng.uniform(0.0, 1.0 - cfg.epsilon);
            std::vector<double> unit(cfg.n, 0.0);
            unit[d] = 1.0;
            c.pre.atoms.push_back({unit, CompareOp::Ge, lo});
            c.pre.atoms.push_back({std::move(unit), CompareOp::Le, lo + cfg.epsilon});
        }
        std::vector<OrderingFormula> disjuncts;
        for (std::size_t k = 0; k < cfg.beta; ++k) {
            disjuncts.push_back(term_formula(random_dag_term(rng, cfg.m, p)));
        }
        c.post = OrderingFormula::any_of(std::move(disjuncts));
        phi.constraints.push_back(std::move(c));
    }
    return phi;
}

struct LabeledRow {
    std::vector<double> x;
    std::size_t label = 0;
    bool covered = false;
};

struct LabeledDataset {
    std::size_t n = 0;
    std::vector<LabeledRow> rows;
};

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

// Reads back the axis-aligned box of a generated precondition.
[[nodiscard]] inline Box precondition_box(const Precondition& pre, std::size_t n) {
    Box box{std::vector<double>(n, -std::numeric_limits<double>::infinity()),
            std::vector<double>(n, std::numeric_limits<double>::infinity())};
    for (const auto& a : pre.atoms) {
        std::optional<std::size_t> axis;
        for (std::size_t d = 0; d < a.coeffs.size(); ++d) {
            if (a.coeffs[d] == 0.0) continue;
            if (a.coeffs[d] != 1.0 || axis) throw ContractViolation("precondition is not a box");
            axis = d;
        }
        if (!axis) throw ContractViolation("precondition atom has no variable");
        if (a.op == CompareOp::Ge || a.op == CompareOp::Gt) {
            box.lo[*axis] = std::max(box.lo[*axis], a.bound);
        } else {
            box.hi[*axis] = std::min(box.hi[*axis], a.bound);
        }
    }
    return box;
}

// N points split over the constraints as evenly as possible (the first
// N mod alpha constraints get one extra). Each point is uniform in its box
// and labeled by a uniform root of a uniform disjunct.
[[nodiscard]] inline LabeledDataset gen_covered_points(const ConstraintSet& phi, const SynthConfig& cfg) {
    LabeledDataset data{phi.n, {}};
    const std::size_t alpha = phi.constraints.size();
    if (alpha == 0) return data;
    for (std::size_t l = 0; l < alpha; ++l) {
        SynthRng rng(cfg.seed, RngStream::Covered, l);
        const auto& c = phi.constraints[l];
        const Box box = precondition_box(c.pre, phi.n);
        const auto disjuncts = to_dnf(c.post);
        std::vector<std::vector<std::size_t>> root_sets;
        for (const auto& q : disjuncts) {
            root_sets.push_back(roots(order_graph(q, phi.m)));
            if (root_sets.back().empty()) throw ContractViolation("generated disjunct has no root");
        }
        const std::size_t count = cfg.N / alpha + (l < cfg.N % alpha ? 1 : 0);
        for (std::size_t s = 0; s < count; ++s) {
            LabeledRow row;
            row.x.resize(phi.n);
            for (std::size_t d = 0; d < phi.n; ++d) row.x[d] = rng.uniform(box.lo[d], box.hi[d]);
            const auto& rs = root_sets[rng.below(root_sets.size())];
            row.label = rs[rng.below(rs.size())];
            row.covered = true;
            data.rows.push_back(std::move(row));
        }
    }
    return data;
}

using Labeler = std::function<std::size_t(std::span<const double>)>;

[[nodiscard]] inline LabeledDataset gen_background_points(const ConstraintSet& phi, const SynthConfig& cfg,
                                                          const Labeler& labeler) {
    LabeledDataset data{phi.n, {}};
    SynthRng rng(cfg.seed, RngStream::Background, 0);
    std::vector<double> x(phi.n);
    for (std::size_t s = 0; s < cfg.N; ++s) {
        bool found = false;
        for (std::size_t attempt = 0; attempt < kBackgroundRetryCap && !found; ++attempt) {
            for (auto& v : x) v = rng.uniform();
            found = std::none_of(phi.constraints.begin(), phi.constraints.end(),
                                 [&](const SafeOrderingConstraint& c) { return eval_pre(c.pre, x); });
        }
        if (!found) {
            throw GenerationError("background sampling: no point outside every precondition after " +
                                  std::to_string(kBackgroundRetryCap) + " draws");
        }
        data.rows.push_back({x, labeler(x), false});
    }
    return data;
}

// Toy classifier: logit_k = -||x - centroid_k||^2. Classes with no training
// point get distinct logits below any reachable score on the unit cube.
class NearestCentroid {
  public:
    NearestCentroid(const LabeledDataset& train, std::size_t m)
        : n_(train.n), centroids_(m, std::vector<double>(train.n, 0.0)), present_(m, false) {
        std::vector<std::size_t> counts(m, 0);
        for (const auto& r : train.rows) {
            if (r.label >= m) throw ContractViolation("training label out of range");
            for (std::size_t d = 0; d < n_; ++d) centroids_[r.label][d] += r.x[d];
            ++counts[r.label];
        }
        for (std::size_t k = 0; k < m; ++k) {
            if (counts[k] == 0) continue;
            present_[k] = true;
            for (auto& v : centroids_[k]) v /= static_cast<double>(counts[k]);
        }
    }

    [[nodiscard]] std::size_t classes() const noexcept { return centroids_.size(); }

    [[nodiscard]] std::vector<double> logits(std::span<const double> x) const {
        std::vector<double> out(centroids_.size());
        for (std::size_t k = 0; k < centroids_.size(); ++k) {
            if (!present_[k]) {
                out[k] = -static_cast<double>(n_ + 1) - static_cast<double>(k);
                continue;
            }
            double dist = 0.0;
            for (std::size_t d = 0; d < n_; ++d) {
                const double diff = x[d] - centroids_[k][d];
                dist += diff * diff;
            }
            out[k] = -dist;
        }
        return out;
    }

    [[nodiscard]] std::size_t predict(std::span<const double> x) const { return argmax(logits(x)); }

  private:
    std::size_t n_;
    std::vector<std::vector<double>> centroids_;
    std::vector<bool> present_;
};

struct SyntheticProblem {
    ConstraintSet phi;
    LabeledDataset data; // covered rows first, then background rows
};

// Full pipeline: constraints, N covered points, N background points labeled
// by a nearest-centroid classifier fit on the covered points.
[[nodiscard]] inline SyntheticProblem gen_dataset(const SynthConfig& cfg) {
    SyntheticProblem out;
    out.phi = gen_constraints(cfg);
    out.data = gen_covered_points(out.phi, cfg);
    const NearestCentroid model(out.data, cfg.m);
    auto background =
        gen_background_points(out.phi, cfg, [&](std::span<const double> x) { return model.predict(x); });
    for (auto& r : background.rows) out.data.rows.push_back(std::move(r));
    return out;
}

} // namespace scnet
