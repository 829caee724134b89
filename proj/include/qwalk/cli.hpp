#pragma once

// Command implementations behind the qwalk tool: simulate, boundstates,
// scan. Kept out of main() so tests can drive them directly.
//
// Exit codes: 0 success, 2 usage error, 3 window overflow, 4 no localized
// states found for a nonzero defect.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qwalk/boundstate.hpp"
#include "qwalk/core.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/io.hpp"
#include "qwalk/localization.hpp"

namespace qwalk {

enum class OutputFormat { csv, json };

inline std::optional<OutputFormat> parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    return std::nullopt;
}

namespace detail {

// Threads used for scan evaluation: QWALK_THREADS when set to a positive
// integer, otherwise the hardware count.
inline int thread_budget() {
    if (const char* env = std::getenv("QWALK_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs f(i) for i in [0, n) on the thread budget. Results keyed by index,
// so output order never depends on scheduling.
template <class F>
void parallel_for_index(std::size_t n, F&& f) {
    const int budget = thread_budget();
    const std::size_t workers =
        std::min<std::size_t>(n, budget > 0 ? static_cast<std::size_t>(budget) : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Writes the fully rendered body to a file or stdout.
inline bool deliver_output(const std::string& path, const std::string& body,
                           std::ostream& diag) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return true;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        diag << "cannot open output file: " << path << "\n";
        return false;
    }
    os << body;
    return os.good();
}

}  // namespace detail

struct SimulateOptions {
    double theta = pi / 4;
    double phi = 0.0;
    int defect_pos = 0;
    std::optional<int> steps;
    double varphi = pi / 4;
    double delta = pi / 2;
    std::string out = "-";
    OutputFormat format = OutputFormat::csv;
};

// Walker release at site 0 unless stated otherwise; steps default to 480,
// bumped to 481 when the start-to-defect distance is odd so the final
// state can carry weight at the defect site.
inline int run_simulate(const SimulateOptions& opts, std::ostream& diag = std::cerr) {
    const int start = 0;
    int steps;
    try {
        if (opts.steps && *opts.steps < 0)
            throw std::invalid_argument("steps must be >= 0");
        steps = opts.steps ? *opts.steps
                           : (((opts.defect_pos - start) % 2 + 2) % 2 == 0 ? 480 : 481);
        const CoinOperator coin = make_coin(opts.theta);
        const DefectConfig defect = make_defect(opts.defect_pos, opts.phi);
        const InitialState ini{opts.varphi, opts.delta, start};

        WalkerState state = make_initial_state(ini, steps);
        state = evolve(std::move(state), coin, defect, steps);

        std::vector<SimulationRecord> records;
        records.reserve(static_cast<std::size_t>(2 * steps + 1));
        for (int p = start - steps; p <= start + steps; ++p)
            records.push_back({p, probability_at(state, p), state.alpha_at(p),
                               state.beta_at(p)});

        const RunManifest manifest = make_manifest(
            "simulate", {{"theta", format_double(opts.theta)},
                         {"phi", format_double(opts.phi)},
                         {"defect-pos", format_int(opts.defect_pos)},
                         {"steps", format_int(steps)},
                         {"varphi", format_double(opts.varphi)},
                         {"delta", format_double(opts.delta)}});
        std::ostringstream body;
        if (opts.format == OutputFormat::csv)
            write_simulation_csv(body, manifest, records);
        else
            write_simulation_json(body, manifest, records);
        return detail::deliver_output(opts.out, body.str(), diag) ? 0 : 2;
    } catch (const WindowOverflowError& e) {
        diag << "window overflow: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        diag << "usage error: " << e.what() << "\n";
        return 2;
    }
}

struct BoundstatesOptions {
    double theta = pi / 4;
    double phi = 0.0;
    int defect_pos = 0;
    std::optional<int> window;
    std::string out = "-";
    OutputFormat format = OutputFormat::csv;
};

inline int run_boundstates(const BoundstatesOptions& opts,
                           std::ostream& diag = std::cerr) {
    try {
        if (opts.window && (*opts.window < 2 || *opts.window % 2 != 0))
            throw std::invalid_argument("window must be even and >= 2");
        if (!(opts.theta > 0.0 && opts.theta < pi / 2))
            throw std::invalid_argument("coin angle must lie in (0, pi/2)");
        make_defect(opts.defect_pos, opts.phi);  // range check

        std::vector<BoundState> states;
        if (opts.phi != 0.0) {
            for (Complex lambda : find_eigenvalues(opts.theta, opts.phi)) {
                const Complex y =
                    compute_y(lambda, make_defect(0, opts.phi).omega, opts.theta);
                states.push_back(build_bound_state(
                    lambda, opts.theta, opts.phi, opts.defect_pos,
                    opts.window ? *opts.window : default_window(y)));
            }
        }

        std::vector<BoundStateRecord> records;
        for (std::size_t s = 0; s < states.size(); ++s) {
            const BoundState& bs = states[s];
            for (int k = -bs.window; k <= bs.window; ++k)
                records.push_back({static_cast<int>(s), bs.eigenphase(), bs.y, k,
                                   bs.alpha_at(k), bs.beta_at(k)});
        }

        std::vector<std::pair<std::string, std::string>> params{
            {"theta", format_double(opts.theta)},
            {"phi", format_double(opts.phi)},
            {"defect-pos", format_int(opts.defect_pos)},
            {"window", opts.window ? format_int(*opts.window) : std::string("auto")},
            {"states", format_int(static_cast<int>(states.size()))}};
        if (opts.phi == 0.0)
            params.emplace_back("note", "phi = 0 has no defect and no localized states");
        const RunManifest manifest = make_manifest("boundstates", std::move(params));

        std::ostringstream body;
        if (opts.format == OutputFormat::csv)
            write_boundstate_csv(body, manifest, records);
        else
            write_boundstate_json(body, manifest, records);
        if (!detail::deliver_output(opts.out, body.str(), diag)) return 2;
        if (opts.phi != 0.0 && states.empty()) {
            diag << "no localized states found at these parameters\n";
            return 4;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        diag << "usage error: " << e.what() << "\n";
        return 2;
    }
}

enum class ScanKind { theta, defect_pos };

struct ScanOptions {
    ScanKind kind = ScanKind::theta;
    std::vector<std::string> values;
    double theta = pi / 4;   // fixed coin angle for defect-pos scans
    double phi = 0.5;
    int defect_pos = 0;      // fixed defect site for theta scans
    double varphi = pi / 4;
    double delta = pi / 2;
    std::optional<int> simulate_check;
    std::string out = "-";
    OutputFormat format = OutputFormat::csv;
};

// Predicted localization probability at the defect site across a parameter
// sweep, optionally checked against a late-time simulated average. Points
// are evaluated concurrently; records are emitted in scan-value order.
inline int run_scan(const ScanOptions& opts, std::ostream& diag = std::cerr) {
    try {
        if (opts.values.empty())
            throw std::invalid_argument("scan needs at least one value");
        if (opts.simulate_check && *opts.simulate_check < 200)
            throw std::invalid_argument("simulate-check needs at least 200 steps");
        make_defect(opts.defect_pos, opts.phi);  // range check
        const InitialState ini{opts.varphi, opts.delta, 0};

        struct Point {
            double theta;
            int m;
            std::string label;
            double sort_key;
        };
        std::vector<Point> points;
        for (const std::string& raw : opts.values) {
            if (opts.kind == ScanKind::theta) {
                const double theta = parse_angle(raw);
                if (!(theta > 0.0 && theta < pi / 2))
                    throw std::invalid_argument("coin angle must lie in (0, pi/2)");
                points.push_back({theta, opts.defect_pos, format_double(theta), theta});
            } else {
                int m = 0;
                const char* first = raw.data();
                const char* last = raw.data() + raw.size();
                const std::from_chars_result r = std::from_chars(first, last, m);
                if (r.ec != std::errc{} || r.ptr != last)
                    throw std::invalid_argument("unparseable defect position: '" + raw +
                                                "'");
                points.push_back(
                    {opts.theta, m, format_int(m), static_cast<double>(m)});
            }
        }
        std::sort(points.begin(), points.end(),
                  [](const Point& a, const Point& b) { return a.sort_key < b.sort_key; });

        std::vector<ScanRecord> records(points.size());
        detail::parallel_for_index(points.size(), [&](std::size_t i) {
            const Point& pt = points[i];
            const CoinOperator coin = make_coin(pt.theta);
            const DefectConfig defect = make_defect(pt.m, opts.phi);
            const std::vector<BoundState> states =
                solve_bound_states(pt.theta, opts.phi, pt.m);
            const int site = pt.m;  // probability measured at the defect
            ScanRecord rec;
            rec.value = pt.label;
            rec.predicted = asymptotic_probability(ini, coin, defect, states, site);
            if (opts.simulate_check) {
                const int t_hi = *opts.simulate_check;
                const int t_lo = t_hi - 100;
                const int parity = ((site - ini.start) % 2 + 2) % 2;
                const WalkerState initial = make_initial_state(ini, t_hi);
                const double sim = average_site_probability(initial, coin, defect,
                                                            site, t_lo, t_hi, parity);
                rec.simulated = sim;
                const double denom = sim != 0.0 ? sim : (rec.predicted != 0.0
                                                             ? rec.predicted
                                                             : 1.0);
                rec.rel_deviation = std::abs(rec.predicted - sim) / std::abs(denom);
            }
            records[i] = std::move(rec);
        });

        std::string joined;
        for (const Point& pt : points) {
            if (!joined.empty()) joined += ',';
            joined += pt.label;
        }
        std::vector<std::pair<std::string, std::string>> params{
            {"scan", opts.kind == ScanKind::theta ? "theta" : "defect-pos"},
            {"values", joined},
            {"phi", format_double(opts.phi)}};
        if (opts.kind == ScanKind::theta)
            params.emplace_back("defect-pos", format_int(opts.defect_pos));
        else
            params.emplace_back("theta", format_double(opts.theta));
        params.emplace_back("varphi", format_double(opts.varphi));
        params.emplace_back("delta", format_double(opts.delta));
        if (opts.simulate_check)
            params.emplace_back("simulate-check", format_int(*opts.simulate_check));
        const RunManifest manifest = make_manifest("scan", std::move(params));

        std::ostringstream body;
        if (opts.format == OutputFormat::csv)
            write_scan_csv(body, manifest, records);
        else
            write_scan_json(body, manifest, records);
        return detail::deliver_output(opts.out, body.str(), diag) ? 0 : 2;
    } catch (const WindowOverflowError& e) {
        diag << "window overflow: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        diag << "usage error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace qwalk
