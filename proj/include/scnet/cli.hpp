#pragma once

// `scnet check|repair|bench|synth|oracle`. Exit codes: 0 ok, 1 violations
// found (check), 2 parse or input error, 3 budget exceeded.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scnet/bench.hpp"
#include "scnet/constraint_io.hpp"
#include "scnet/csv.hpp"
#include "scnet/oracle.hpp"
#include "scnet/sclayer.hpp"
#include "scnet/synth.hpp"

namespace scnet::cli {

enum ExitCode : int { kOk = 0, kViolations = 1, kParseError = 2, kBudgetExceeded = 3 };

namespace detail {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ParseErrorKind::Schema, path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ConstraintSet load_constraints(const std::string& path) {
    try {
        return parse_constraints(slurp(path));
    } catch (const ParseError& e) {
        throw ParseError(e.kind(), path + ":" + e.location(), e.what());
    }
}

inline csv::LogitTable load_logits(const std::string& path, const ConstraintSet& phi) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ParseErrorKind::Csv, path, "cannot open file");
    return csv::parse_logits(csv::read(in), phi.n, phi.m);
}

inline nlohmann::json names(const std::vector<std::string>& v) { return nlohmann::json(v); }

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(ParseErrorKind::Schema, path, "cannot open for writing");
    out << content;
}

} // namespace detail

struct CheckArgs {
    std::string constraints;
    std::string in;
    std::string report = "text";
};

inline int run_check(const CheckArgs& a, std::ostream& out) {
    const auto phi = detail::load_constraints(a.constraints);
    const auto table = detail::load_logits(a.in, phi);
    std::size_t checked = 0, violating = 0, abstained = 0;
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream text;
    for (std::size_t r = 0; r < table.xs.size(); ++r) {
        const bool skip = table.abstain && (*table.abstain)[r] != 0;
        std::vector<std::string> fired;
        for (auto k : fired_constraints(phi, table.xs[r])) fired.push_back(phi.constraints[k].name);
        std::string verdict;
        if (skip) {
            ++abstained;
            verdict = "abstained";
        } else {
            ++checked;
            const bool safe = holds(phi, table.xs[r], table.ys[r]);
            violating += safe ? 0 : 1;
            verdict = safe ? "safe" : "violating";
        }
        rows.push_back({{"row", r + 1}, {"verdict", verdict}, {"fired", fired}});
        text << "row " << r + 1 << ": " << verdict;
        if (!fired.empty()) text << " [" << detail::join(fired) << "]";
        text << '\n';
    }
    const double rate = checked ? static_cast<double>(violating) / static_cast<double>(checked) : 0.0;
    if (a.report == "json") {
        out << nlohmann::json{{"rows", rows},
                              {"checked", checked},
                              {"violating", violating},
                              {"abstained", abstained},
                              {"violation_rate", rate}}
                   .dump(2)
            << '\n';
    } else {
        out << text.str() << "checked=" << checked << " violating=" << violating << " abstained=" << abstained
            << " violation_rate=" << rate << '\n';
    }
    return violating ? kViolations : kOk;
}

struct RepairArgs {
    std::string constraints;
    std::string in;
    std::string out;
    std::string report = "text";
    unsigned threads = 1;
    std::uint64_t budget = PrioritizedDnf::kDefaultBudget;
    bool no_fastpath = false;
};

// Output columns are the input's x and y columns plus `abstain`: 0 for a
// usable row, 1 for bottom (y copied through), 2 when the disjunct budget
// ran out (y copied through). Rows needing no change are copied verbatim.
inline int run_repair(const RepairArgs& a, std::ostream& out) {
    const auto phi = detail::load_constraints(a.constraints);
    const auto table = detail::load_logits(a.in, phi);
    RepairOptions options;
    options.budget = a.budget;
    options.fast_path = !a.no_fastpath;
    const auto rows = self_repair_batch(phi, table.xs, table.ys, options, a.threads);

    std::ostringstream csv_out;
    std::vector<std::string> header(table.raw.header.begin(), table.raw.header.begin() + static_cast<std::ptrdiff_t>(phi.n + phi.m));
    header.push_back("abstain");
    csv::write_row(csv_out, header);
    std::size_t unchanged = 0, repaired = 0, abstained = 0, over_budget = 0;
    nlohmann::json details = nlohmann::json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& raw = table.raw.rows[r];
        std::vector<std::string> fields(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(phi.n + phi.m));
        std::string status;
        if (rows[r].budget_error) {
            ++over_budget;
            status = "budget_exceeded";
            fields.push_back("2");
        } else if (rows[r].outcome->bottom()) {
            ++abstained;
            status = "abstained";
            fields.push_back("1");
        } else if (rows[r].outcome->already_safe) {
            ++unchanged;
            status = "unchanged";
            fields.push_back("0");
        } else {
            ++repaired;
            status = "repaired";
            const auto& y = *rows[r].outcome->result;
            for (std::size_t j = 0; j < phi.m; ++j) fields[phi.n + j] = csv::format_real(y[j]);
            fields.push_back("0");
        }
        if (!table.abstain && status == "unchanged") {
            csv_out << table.raw.lines[r] << ",0\n";
        } else {
            csv::write_row(csv_out, fields);
        }
        details.push_back({{"row", r + 1}, {"status", status}});
    }
    if (!a.out.empty()) {
        detail::write_file(a.out, csv_out.str());
    } else {
        out << csv_out.str();
    }
    if (a.report == "json") {
        out << nlohmann::json{{"rows", details},
                              {"unchanged", unchanged},
                              {"repaired", repaired},
                              {"abstained", abstained},
                              {"budget_exceeded", over_budget}}
                   .dump(2)
            << '\n';
    } else if (!a.out.empty()) {
        out << "unchanged=" << unchanged << " repaired=" << repaired << " abstained=" << abstained
            << " budget_exceeded=" << over_budget << '\n';
    }
    return over_budget ? kBudgetExceeded : kOk;
}

struct SynthArgs {
    SynthConfig cfg;
    std::string out_constraints = "constraints.json";
    std::string out_data = "dataset.csv";
};

inline std::string dataset_csv(const LabeledDataset& data) {
    std::ostringstream out;
    std::vector<std::string> header;
    for (std::size_t d = 0; d < data.n; ++d) header.push_back("x" + std::to_string(d));
    header.push_back("label");
    header.push_back("covered");
    csv::write_row(out, header);
    for (const auto& r : data.rows) {
        std::vector<std::string> f;
        for (double v : r.x) f.push_back(csv::format_real(v));
        f.push_back(std::to_string(r.label));
        f.push_back(r.covered ? "1" : "0");
        csv::write_row(out, f);
    }
    return out.str();
}

inline int run_synth(const SynthArgs& a, std::ostream& out) {
    SyntheticProblem problem;
    try {
        problem = gen_dataset(a.cfg);
    } catch (const GenerationError& e) {
        throw GenerationError(std::string(e.what()) + " [alpha=" + std::to_string(a.cfg.alpha) +
                              " beta=" + std::to_string(a.cfg.beta) + " m=" + std::to_string(a.cfg.m) +
                              " n=" + std::to_string(a.cfg.n) + " gamma=" + std::to_string(a.cfg.gamma) +
                              " epsilon=" + std::to_string(a.cfg.epsilon) + " N=" + std::to_string(a.cfg.N) +
                              " seed=" + std::to_string(a.cfg.seed) + "]");
    }
    detail::write_file(a.out_constraints, serialize_constraints(problem.phi, 2) + "\n");
    detail::write_file(a.out_data, dataset_csv(problem.data));
    out << "wrote " << problem.phi.constraints.size() << " constraints to " << a.out_constraints << " and "
        << problem.data.rows.size() << " rows to " << a.out_data << '\n';
    return kOk;
}

struct BenchArgs {
    bench::Settings settings;
    bench::Sweeps sweeps;
    std::string report = "text";
    std::string out_json;
    std::string out_svg;
};

inline int run_bench(const BenchArgs& a, std::ostream& out) {
    const auto report = bench::run_sweeps(a.sweeps, a.settings);
    const auto j = bench::to_json(report);
    if (!a.out_json.empty()) detail::write_file(a.out_json, j.dump(2) + "\n");
    if (!a.out_svg.empty()) detail::write_file(a.out_svg, bench::to_svg(report));
    out << (a.report == "json" ? j.dump(2) + "\n" : bench::to_text(report));
    return kOk;
}

struct OracleArgs {
    std::string constraints;
    std::string in;
    std::string report = "text";
};

// Brute-force verdicts per row: is the active postcondition satisfiable,
// and can a satisfying output keep the row's argmax.
inline int run_oracle(const OracleArgs& a, std::ostream& out) {
    const auto phi = detail::load_constraints(a.constraints);
    oracle::guard(phi.m);
    const auto table = detail::load_logits(a.in, phi);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < table.xs.size(); ++r) {
        const auto& y = table.ys[r];
        std::size_t top = 0;
        for (std::size_t j = 1; j < y.size(); ++j)
            if (y[j] > y[top]) top = j;
        const bool holds_now = oracle::phi_holds(phi, table.xs[r], y);
        const bool sat = oracle::phi_satisfiable(phi, table.xs[r]);
        const bool keep = oracle::phi_argmax_preserving(phi, table.xs[r], top);
        if (a.report == "json") {
            rows.push_back({{"row", r + 1}, {"holds", holds_now}, {"satisfiable", sat},
                            {"argmax", top}, {"argmax_preserving", keep}});
        } else {
            out << "row " << r + 1 << ": holds=" << holds_now << " satisfiable=" << sat << " argmax=" << top
                << " argmax_preserving=" << keep << '\n';
        }
    }
    if (a.report == "json") out << rows.dump(2) << '\n';
    return kOk;
}

// Entry point shared by the binary and the tests.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
    CLI::App app{"scnet: runtime enforcement of safe-ordering constraints on classifier logits"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "report which rows violate the constraints");
    c->add_option("--constraints", check.constraints, "constraint JSON file")->required();
    c->add_option("--in", check.in, "CSV with columns x0..,y0..[,abstain]")->required();
    c->add_option("--report", check.report)->check(CLI::IsMember({"json", "text"}));

    RepairArgs repair;
    auto* r = app.add_subcommand("repair", "apply the SC-layer row by row");
    r->add_option("--constraints", repair.constraints)->required();
    r->add_option("--in", repair.in)->required();
    r->add_option("--out", repair.out, "output CSV (stdout when omitted)");
    r->add_option("--report", repair.report)->check(CLI::IsMember({"json", "text"}));
    r->add_option("--threads", repair.threads)->check(CLI::PositiveNumber);
    r->add_option("--budget", repair.budget, "max disjuncts enumerated per pass")->check(CLI::PositiveNumber);
    r->add_flag("--no-fastpath", repair.no_fastpath, "disable the not-maximal shortcut");

    BenchArgs bench_args;
    auto* b = app.add_subcommand("bench", "measure SC-layer overhead on synthetic data");
    b->add_option("--alpha", bench_args.sweeps.alpha, "alpha sweep values")->delimiter(',');
    b->add_option("--beta", bench_args.sweeps.beta, "beta sweep values")->delimiter(',');
    b->add_option("--m", bench_args.sweeps.m, "class-count sweep values")->delimiter(',');
    b->add_option("--delta", bench_args.sweeps.delta, "network depth sweep values")->delimiter(',');
    b->add_option("--width", bench_args.settings.width, "hidden layer width");
    b->add_option("--batch", bench_args.settings.batch, "inputs per timed batch");
    b->add_option("--trials", bench_args.settings.trials, "timed trials after one warm-up");
    b->add_option("--seed", bench_args.settings.seed);
    b->add_option("--threads", bench_args.settings.threads)->check(CLI::PositiveNumber);
    b->add_option("--report", bench_args.report)->check(CLI::IsMember({"json", "text"}));
    b->add_option("--json", bench_args.out_json, "write the JSON report here");
    b->add_option("--svg", bench_args.out_svg, "write an SVG plot here");
    bool bench_no_fastpath = false;
    b->add_flag("--no-fastpath", bench_no_fastpath);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "generate constraints and a labeled dataset");
    s->add_option("--alpha", synth.cfg.alpha);
    s->add_option("--beta", synth.cfg.beta);
    s->add_option("--m", synth.cfg.m);
    s->add_option("--n", synth.cfg.n);
    s->add_option("--gamma", synth.cfg.gamma);
    s->add_option("--epsilon", synth.cfg.epsilon);
    s->add_option("--N", synth.cfg.N, "points per half");
    s->add_option("--seed", synth.cfg.seed);
    s->add_option("--constraints", synth.out_constraints, "output constraint JSON");
    s->add_option("--out", synth.out_data, "output dataset CSV");

    OracleArgs oracle_args;
    auto* o = app.add_subcommand("oracle", "brute-force satisfiability verdicts (m <= 8)");
    o->add_option("--constraints", oracle_args.constraints)->required();
    o->add_option("--in", oracle_args.in)->required();
    o->add_option("--report", oracle_args.report)->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (c->parsed()) return run_check(check, out);
        if (r->parsed()) return run_repair(repair, out);
        if (b->parsed()) {
            bench_args.settings.fast_path = !bench_no_fastpath;
            return run_bench(bench_args, out);
        }
        if (s->parsed()) return run_synth(synth, out);
        if (o->parsed()) return run_oracle(oracle_args, out);
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const ShapeError& e) {
        err << "shape error: " << e.what() << '\n';
        return kParseError;
    } catch (const OracleGuardError& e) {
        err << "oracle: " << e.what() << '\n';
        return kParseError;
    } catch (const GenerationError& e) {
        err << "generation error: " << e.what() << '\n';
        return kParseError;
    }
    return kOk;
}

} // namespace scnet::cli
