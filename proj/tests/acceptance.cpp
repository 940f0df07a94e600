// Acceptance runner. Prints one PASS/FAIL line per criterion; exits non-zero
// if any selected criterion fails.
//
//   acceptance                 run every criterion
//   acceptance --criterion 3   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scnet/bench.hpp"
#include "scnet/oracle.hpp"
#include "scnet/scnet.hpp"
#include "support.hpp"

using namespace scnet;
using scnet::testing::Rng;
using F = OrderingFormula;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and workloads.
constexpr double kExampleBudgetMs = 1.0;
constexpr double kPropertyBudgetS = 60.0;
constexpr int kPropertyCases = 10'000;
constexpr int kGraphCases = 1'000;
constexpr int kNotMaximalCases = 10'000;
constexpr int kBatchedCases = 1'000;
constexpr std::size_t kAccuracyPoints = 4'000;
constexpr double kMinSpearman = 0.9;
constexpr double kMaxSpread = 2.0;
constexpr int kComplexityCases = 200;

struct Verdict {
    bool pass;
    std::string detail;
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string show(std::span<const double> v) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << ']';
    return out.str();
}

Verdict worked_example() {
    const auto phi = scnet::testing::acas_phi2();
    const std::vector<double> y{100, 900, 300, 140, 500};
    const std::vector<double> want{300, 900, 140, 100, 500};
    const auto t0 = Clock::now();
    const auto out = self_repair(phi, scnet::testing::acas_input(), y);
    const double ms = ms_since(t0);
    if (out.bottom()) return {false, "abstained"};
    const bool exact = *out.result == want;
    const bool top = argmax(*out.result) == 1;
    return {exact && top && ms < kExampleBudgetMs,
            "got " + show(*out.result) + " want " + show(want) + " argmax=" + std::to_string(argmax(*out.result)) +
                " time_ms=" + std::to_string(ms)};
}

Verdict figure_trace() {
    const std::vector<double> y{2, 3, 1, 4, 5};
    const auto pi = stable_topsort(scnet::testing::trace_graph(), y);
    const std::vector<std::size_t> want{2, 0, 4, 1, 3};
    std::vector<std::size_t> got(5);
    for (std::size_t j = 0; j < 5; ++j) got[j] = pi[j];
    std::ostringstream s;
    for (auto v : got) s << v << ' ';
    return {got == want, "pi = " + s.str()};
}

struct PropertyCase {
    ConstraintSet phi;
    std::vector<double> x;
    std::vector<double> y;
};

// Same corpus for the safety and transparency suites.
const std::vector<PropertyCase>& property_corpus() {
    static const std::vector<PropertyCase> corpus = [] {
        Rng rng(20240601);
        std::vector<PropertyCase> out;
        out.reserve(kPropertyCases);
        for (int i = 0; i < kPropertyCases; ++i) {
            const auto m = scnet::testing::pick(rng, 2, 5);
            const auto alpha = scnet::testing::pick(rng, 1, 3);
            const auto beta = scnet::testing::pick(rng, 1, 3);
            PropertyCase c{scnet::testing::random_phi(rng, m, alpha, beta), {}, {}};
            c.x = {scnet::testing::real(rng, -1, 1), scnet::testing::real(rng, -1, 1)};
            c.y = scnet::testing::distinct_logits(rng, m);
            out.push_back(std::move(c));
        }
        return out;
    }();
    return corpus;
}

Verdict safety_forewarning() {
    const auto t0 = Clock::now();
    std::size_t mismatches = 0, bottoms = 0, repaired = 0;
    for (const auto& c : property_corpus()) {
        const bool sat = oracle::phi_satisfiable(c.phi, c.x);
        for (bool fast : {true, false}) {
            RepairOptions opts;
            opts.fast_path = fast;
            const auto out = self_repair(c.phi, c.x, c.y, opts);
            const bool ok = sat ? (!out.bottom() && holds(c.phi, c.x, *out.result) &&
                                   scnet::testing::is_permutation_of(*out.result, c.y))
                                : out.bottom();
            mismatches += ok ? 0 : 1;
            if (fast) {
                bottoms += out.bottom() ? 1 : 0;
                repaired += out.status() == RepairStatus::Repaired ? 1 : 0;
            }
        }
    }
    const double s = ms_since(t0) / 1000.0;
    return {mismatches == 0 && s < kPropertyBudgetS,
            "cases=" + std::to_string(kPropertyCases) + " mismatches=" + std::to_string(mismatches) +
                " bottom=" + std::to_string(bottoms) + " repaired=" + std::to_string(repaired) +
                " seconds=" + std::to_string(s)};
}

Verdict transparency() {
    std::size_t checked = 0, mismatches = 0;
    for (const auto& c : property_corpus()) {
        const auto top = argmax(c.y);
        if (!oracle::phi_argmax_preserving(c.phi, c.x, top)) continue;
        ++checked;
        const auto out = self_repair(c.phi, c.x, c.y);
        mismatches += (!out.bottom() && argmax(*out.result) == top) ? 0 : 1;
    }
    return {mismatches == 0 && checked > 0,
            "preserving_cases=" + std::to_string(checked) + " mismatches=" + std::to_string(mismatches)};
}

Verdict aplp_oracle() {
    Rng rng(5150);
    std::size_t mismatches = 0, cyclic = 0;
    for (int i = 0; i < kGraphCases; ++i) {
        const auto m = scnet::testing::pick(rng, 1, 8);
        const auto g = scnet::testing::random_graph(rng, m, scnet::testing::real(rng, 0.0, 0.35));
        const auto p = aplp(g);
        const bool cyc = oracle::has_cycle(g);
        cyclic += cyc ? 1 : 0;
        if (has_cycle(p) != cyc) ++mismatches;
        else if (!cyc && p != oracle::longest_paths(g)) ++mismatches;
    }
    return {mismatches == 0 && cyclic > 0 && cyclic < static_cast<std::size_t>(kGraphCases),
            "graphs=" + std::to_string(kGraphCases) + " cyclic=" + std::to_string(cyclic) +
                " mismatches=" + std::to_string(mismatches)};
}

Verdict not_maximal() {
    Rng rng(777);
    std::size_t failures = 0;
    for (int i = 0; i < kNotMaximalCases; ++i) {
        const auto m = scnet::testing::pick(rng, 2, 10);
        const auto y = scnet::testing::distinct_logits(rng, m);
        std::vector<std::size_t> excluded;
        for (std::size_t k = 0; k < m; ++k)
            if (scnet::testing::real(rng) < 0.4) excluded.push_back(k);
        if (excluded.size() == m) excluded.pop_back();
        const auto out = repair_not_maximal(y, excluded);
        bool ok = scnet::testing::is_permutation_of(out, y);
        const double top = *std::max_element(out.begin(), out.end());
        for (auto k : excluded) ok = ok && out[k] < top;
        failures += ok ? 0 : 1;
    }
    return {failures == 0, "cases=" + std::to_string(kNotMaximalCases) + " failures=" + std::to_string(failures)};
}

Verdict batched_equivalence() {
    Rng rng(9001);
    std::size_t mismatches = 0;
    for (int i = 0; i < kBatchedCases; ++i) {
        const auto m = scnet::testing::pick(rng, 1, 10);
        const auto batch = scnet::testing::pick(rng, 1, 16);
        std::vector<OrderingTerm> terms;
        std::vector<std::vector<double>> ys;
        for (std::size_t b = 0; b < batch; ++b) {
            terms.push_back(scnet::testing::term_of(
                scnet::testing::random_dag(rng, m, scnet::testing::real(rng, 0.0, 0.5))));
            ys.push_back(scnet::testing::distinct_logits(rng, m));
        }
        const unsigned threads = static_cast<unsigned>(i % 3 + 1);
        const auto p = batched_aplp(adjacency_tensor(terms, m), threads);
        const auto ranks = batched_ranks(batched_topsort_keys(p, ys), batch, m);
        const auto out = batched_reorder(terms, ys, m, threads);
        for (std::size_t b = 0; b < batch; ++b) {
            const auto g = order_graph(terms[b], m);
            bool same = to_aplp(p, b) == aplp(g) && ranks[b] == stable_topsort(g, ys[b]) &&
                        out[b] == reorder(terms[b], ys[b]);
            mismatches += same ? 0 : 1;
        }
        if (m >= 2 && i % 4 == 0) {
            const auto phi = scnet::testing::random_phi(rng, m, 3, 3);
            std::vector<std::vector<double>> xs;
            for (std::size_t b = 0; b < batch; ++b)
                xs.push_back({scnet::testing::real(rng, -1, 1), scnet::testing::real(rng, -1, 1)});
            const auto vec = self_repair_vectorized(phi, xs, ys, {}, threads);
            for (std::size_t b = 0; b < batch; ++b)
                mismatches += vec[b].result == self_repair(phi, xs[b], ys[b]).result ? 0 : 1;
        }
    }
    return {mismatches == 0, "instances=" + std::to_string(kBatchedCases) + " mismatches=" + std::to_string(mismatches)};
}

Verdict accuracy_preservation() {
    SynthConfig cfg;
    cfg.alpha = 4;
    cfg.beta = 4;
    cfg.m = 8;
    cfg.N = kAccuracyPoints / 2;
    const auto problem = gen_dataset(cfg);
    const NearestCentroid model(gen_covered_points(problem.phi, cfg), cfg.m);
    std::vector<std::vector<double>> xs, ys;
    for (const auto& r : problem.data.rows) {
        xs.push_back(r.x);
        ys.push_back(model.logits(r.x));
    }
    const auto outcomes = self_repair_vectorized(problem.phi, xs, ys);
    std::size_t before = 0, after = 0, abstained = 0, violating_after = 0, violating_before = 0;
    for (std::size_t r = 0; r < xs.size(); ++r) {
        const auto label = problem.data.rows[r].label;
        before += argmax(ys[r]) == label ? 1 : 0;
        violating_before += holds(problem.phi, xs[r], ys[r]) ? 0 : 1;
        if (outcomes[r].bottom()) {
            ++abstained;
            continue;
        }
        after += argmax(*outcomes[r].result) == label ? 1 : 0;
        violating_after += holds(problem.phi, xs[r], *outcomes[r].result) ? 0 : 1;
    }
    const double n = static_cast<double>(xs.size());
    return {xs.size() == kAccuracyPoints && after >= before && violating_after == 0,
            "points=" + std::to_string(xs.size()) + " acc_before=" + std::to_string(before / n) +
                " acc_after=" + std::to_string(after / n) + " violating_before=" + std::to_string(violating_before) +
                " violating_after=" + std::to_string(violating_after) + " abstained=" + std::to_string(abstained)};
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
        std::vector<double> r(v.size());
        for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double d2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

Verdict overhead_shape() {
    const auto report = bench::run_sweeps(bench::Sweeps{}, bench::Settings{});
    std::map<std::string, std::vector<double>> knob, over;
    for (const auto& row : report.rows) {
        const auto& p = row.point;
        const std::size_t v = row.sweep == "alpha" ? p.alpha
                              : row.sweep == "beta" ? p.beta
                              : row.sweep == "m"    ? p.m
                                                    : p.delta;
        knob[row.sweep].push_back(static_cast<double>(v));
        over[row.sweep].push_back(row.overhead_ms);
    }
    auto spread = [&](const std::string& s) {
        const auto [lo, hi] = std::minmax_element(over[s].begin(), over[s].end());
        return *lo > 0 ? *hi / *lo : INFINITY;
    };
    const double rho = spearman(knob["m"], over["m"]);
    const double sd = spread("delta"), sa = spread("alpha"), sb = spread("beta");
    std::ostringstream detail;
    detail << "spearman_m=" << rho << " spread_delta=" << sd << " spread_alpha=" << sa << " spread_beta=" << sb
           << " overhead_m_ms=" << show(over["m"]);
    return {rho > kMinSpearman && sd < kMaxSpread && sa < kMaxSpread && sb < kMaxSpread, detail.str()};
}

Verdict complexity() {
    Rng rng(31337);
    std::size_t mismatches = 0, over = 0;
    for (int i = 0; i < kComplexityCases; ++i) {
        const auto m = scnet::testing::pick(rng, 3, 6);
        const auto k = scnet::testing::pick(rng, 1, 5);
        std::vector<F> conj{F::literal(0, 1), F::literal(1, 0)};
        std::uint64_t product = 1;
        for (std::size_t c = 0; c < k; ++c) {
            const auto p = scnet::testing::pick(rng, 1, 4);
            std::vector<F> alts;
            for (std::size_t a = 0; a < p; ++a) {
                const auto lit = scnet::testing::random_literal(rng, m);
                alts.push_back(F::literal(lit.lesser, lit.greater));
            }
            product *= p;
            conj.push_back(p == 1 ? std::move(alts.front()) : F::any_of(std::move(alts)));
        }
        std::shuffle(conj.begin(), conj.end(), rng);
        const F active = F::all_of(std::move(conj));
        const auto r = solve_formula(active, m, scnet::testing::distinct_logits(rng, m));
        mismatches += (!r.term && r.visited == product && dnf_size(active) == product) ? 0 : 1;

        const auto f = scnet::testing::random_formula(rng, m, 3);
        const auto free = solve_formula(f, m, scnet::testing::distinct_logits(rng, m));
        over += free.visited <= dnf_size(f) ? 0 : 1;
    }
    return {mismatches == 0 && over == 0, "adversarial_mismatches=" + std::to_string(mismatches) +
                                              " bound_violations=" + std::to_string(over)};
}

const std::vector<std::pair<const char*, std::function<Verdict()>>>& criteria() {
    static const std::vector<std::pair<const char*, std::function<Verdict()>>> all{
        {"worked example repair", worked_example},
        {"figure trace permutation", figure_trace},
        {"safety and forewarning", safety_forewarning},
        {"transparency", transparency},
        {"aplp and cycle oracle", aplp_oracle},
        {"notmaximal postcondition", not_maximal},
        {"scalar/batched equivalence", batched_equivalence},
        {"accuracy preservation", accuracy_preservation},
        {"overhead shape", overhead_shape},
        {"complexity counter", complexity},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    const auto& list = criteria();
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        Verdict v{false, ""};
        try {
            v = list[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s c%zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, list[i].first, v.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && v.pass;
    }
    return all_pass ? 0 : 1;
}
