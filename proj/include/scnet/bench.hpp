#pragma once

// Overhead benchmark: latency of a random dense base network versus the
// extra latency of the SC-layer on synthetic datasets D(alpha, beta, m).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "scnet/dense.hpp"
#include "scnet/synth.hpp"
#include "scnet/vectorized.hpp"

namespace scnet::bench {

struct Point {
    std::size_t alpha = 4;
    std::size_t beta = 4;
    std::size_t m = 8;
    std::size_t delta = 6;

    friend bool operator==(const Point&, const Point&) = default;
};

struct Settings {
    std::size_t width = 1000;
    std::size_t batch = 64;
    std::size_t trials = 5;
    std::size_t n = 10;
    double gamma = 3.0;
    double epsilon = 0.4;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool fast_path = true;
};

struct Row {
    Point point;
    std::string sweep; // which parameter this row varies
    std::size_t batch = 0;
    double base_ms = 0.0;     // per input, median over trials
    double total_ms = 0.0;    // per input, median over trials
    double overhead_ms = 0.0; // per input, median of per-trial (total - base)
    double violation_rate = 0.0;
    double abstention_rate = 0.0;
    double accuracy_before = 0.0;
    double accuracy_after = 0.0;
};

struct Report {
    Settings settings;
    std::vector<Row> rows;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// gamma must stay below m(m-1); small m gets half the available pairs.
inline double effective_gamma(double gamma, std::size_t m) {
    const double pairs = static_cast<double>(m) * static_cast<double>(m - 1);
    return std::min(gamma, pairs / 2.0);
}

inline Row run_point(const Point& pt, const Settings& s, const std::string& sweep = "point") {
    SynthConfig cfg;
    cfg.alpha = pt.alpha;
    cfg.beta = pt.beta;
    cfg.m = pt.m;
    cfg.n = s.n;
    cfg.gamma = effective_gamma(s.gamma, pt.m);
    cfg.epsilon = s.epsilon;
    cfg.N = std::max<std::size_t>(1, s.batch / 2);
    cfg.seed = s.seed;
    const SyntheticProblem problem = gen_dataset(cfg);
    const auto& rows = problem.data.rows;

    const DenseNet net = DenseNet::random(s.n, s.width, pt.delta, pt.m, s.seed);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(s.n));
    std::vector<std::vector<double>> xs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t d = 0; d < s.n; ++d) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) = rows[r].x[d];
        xs.push_back(rows[r].x);
    }

    RepairOptions options;
    options.fast_path = s.fast_path;
    using clock = std::chrono::steady_clock;
    std::vector<double> base_t, total_t, over_t;
    std::vector<RepairOutcome> outcomes;
    std::vector<std::vector<double>> ys;
    for (std::size_t trial = 0; trial <= s.trials; ++trial) {
        const auto t0 = clock::now();
        const Eigen::MatrixXd logits = net.forward_batch(x);
        const auto t1 = clock::now();
        ys.assign(rows.size(), std::vector<double>(pt.m));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < pt.m; ++j) ys[r][j] = logits(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
        const auto t2 = clock::now();
        outcomes = self_repair_vectorized(problem.phi, xs, ys, options, s.threads);
        const auto t3 = clock::now();
        if (trial == 0) continue; // warm-up
        const double base = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const double sc = std::chrono::duration<double, std::milli>(t3 - t2).count();
        base_t.push_back(base);
        total_t.push_back(base + sc);
        over_t.push_back((base + sc) - base);
    }

    Row row;
    row.point = pt;
    row.sweep = sweep;
    row.batch = rows.size();
    const double per = 1.0 / static_cast<double>(std::max<std::size_t>(1, rows.size()));
    row.base_ms = median(base_t) * per;
    row.total_ms = median(total_t) * per;
    row.overhead_ms = median(over_t) * per;
    std::size_t violating = 0, abstained = 0, correct_before = 0, correct_after = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& o = outcomes[r];
        violating += o.already_safe ? 0 : 1;
        abstained += o.bottom() ? 1 : 0;
        correct_before += argmax(ys[r]) == rows[r].label ? 1 : 0;
        correct_after += (!o.bottom() && argmax(*o.result) == rows[r].label) ? 1 : 0;
    }
    row.violation_rate = static_cast<double>(violating) * per;
    row.abstention_rate = static_cast<double>(abstained) * per;
    row.accuracy_before = static_cast<double>(correct_before) * per;
    row.accuracy_after = static_cast<double>(correct_after) * per;
    return row;
}

struct Sweeps {
    std::vector<std::size_t> alpha{1, 2, 4, 8, 16};
    std::vector<std::size_t> beta{1, 2, 4, 8, 16};
    std::vector<std::size_t> m{2, 4, 8, 16, 32, 64, 128};
    std::vector<std::size_t> delta{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    Point defaults{};
};

// One-at-a-time sweeps around the defaults (4, 4, 8, 6).
inline Report run_sweeps(const Sweeps& sw, const Settings& s) {
    Report report{s, {}};
    auto add = [&](const std::vector<std::size_t>& values, std::size_t Point::*field, const char* name) {
        for (auto v : values) {
            Point p = sw.defaults;
            p.*field = v;
            report.rows.push_back(run_point(p, s, name));
        }
    };
    add(sw.alpha, &Point::alpha, "alpha");
    add(sw.beta, &Point::beta, "beta");
    add(sw.m, &Point::m, "m");
    add(sw.delta, &Point::delta, "delta");
    return report;
}

inline nlohmann::json to_json(const Report& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"sweep", row.sweep},
                        {"alpha", row.point.alpha},
                        {"beta", row.point.beta},
                        {"m", row.point.m},
                        {"delta", row.point.delta},
                        {"batch", row.batch},
                        {"base_ms", row.base_ms},
                        {"total_ms", row.total_ms},
                        {"overhead_ms", row.overhead_ms},
                        {"violation_rate", row.violation_rate},
                        {"abstention_rate", row.abstention_rate},
                        {"accuracy_before", row.accuracy_before},
                        {"accuracy_after", row.accuracy_after}});
    }
    return {{"settings",
             {{"width", r.settings.width},
              {"batch", r.settings.batch},
              {"trials", r.settings.trials},
              {"n", r.settings.n},
              {"gamma", r.settings.gamma},
              {"epsilon", r.settings.epsilon},
              {"seed", r.settings.seed},
              {"fast_path", r.settings.fast_path}}},
            {"rows", std::move(rows)}};
}

inline std::string to_text(const Report& r) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %5s %5s %5s %5s %6s %10s %12s %6s %6s %6s %6s\n", "sweep", "alpha",
                  "beta", "m", "delta", "batch", "base_ms", "overhead_ms", "viol", "abst", "acc0", "acc1");
    out << line;
    for (const auto& row : r.rows) {
        std::snprintf(line, sizeof line, "%-6s %5zu %5zu %5zu %5zu %6zu %10.5f %12.6f %6.3f %6.3f %6.3f %6.3f\n",
                      row.sweep.c_str(), row.point.alpha, row.point.beta, row.point.m, row.point.delta, row.batch,
                      row.base_ms, row.overhead_ms, row.violation_rate, row.abstention_rate, row.accuracy_before,
                      row.accuracy_after);
        out << line;
    }
    return out.str();
}

// Four panels (alpha, beta, m, delta), overhead per input against the swept
// parameter on a log2 x axis.
inline std::string to_svg(const Report& r) {
    const char* names[] = {"alpha", "beta", "m", "delta"};
    const double pw = 260, ph = 200, pad = 40;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 4 * (pw + pad) + pad << "\" height=\""
        << ph + 2 * pad << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int p = 0; p < 4; ++p) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : r.rows) {
            if (row.sweep != names[p]) continue;
            const std::size_t v = p == 0 ? row.point.alpha : p == 1 ? row.point.beta : p == 2 ? row.point.m : row.point.delta;
            pts.emplace_back(static_cast<double>(v), row.overhead_ms);
        }
        const double x0 = pad + p * (pw + pad), y0 = pad;
        svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << pw << "\" height=\"" << ph
            << "\" fill=\"none\" stroke=\"#888\"/>\n";
        svg << "<text x=\"" << x0 + pw / 2 << "\" y=\"" << y0 + ph + 28 << "\" text-anchor=\"middle\">" << names[p]
            << "</text>\n";
        if (pts.empty()) continue;
        double xmin = pts.front().first, xmax = xmin, ymax = 0;
        for (auto [xv, yv] : pts) {
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymax = std::max(ymax, yv);
        }
        const bool logx = p != 3;
        auto fx = [&](double v) {
            const double a = logx ? std::log2(v) : v, lo = logx ? std::log2(xmin) : xmin, hi = logx ? std::log2(xmax) : xmax;
            return x0 + (hi > lo ? (a - lo) / (hi - lo) : 0.5) * pw;
        };
        auto fy = [&](double v) { return y0 + ph - (ymax > 0 ? v / ymax : 0.0) * ph * 0.9; };
        svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        for (auto [xv, yv] : pts) svg << fx(xv) << ',' << fy(yv) << ' ';
        svg << "\"/>\n";
        for (auto [xv, yv] : pts) {
            svg << "<circle cx=\"" << fx(xv) << "\" cy=\"" << fy(yv) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
            svg << "<text x=\"" << fx(xv) << "\" y=\"" << y0 + ph + 14 << "\" text-anchor=\"middle\">" << xv
                << "</text>\n";
        }
        svg << "<text x=\"" << x0 + 4 << "\" y=\"" << y0 + 12 << "\">max " << ymax << " ms</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace scnet::bench
