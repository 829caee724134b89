#pragma once

// One-step evolution of the defected walk and the derived observables:
// position distribution, spread, time-averaged site probability.
//
// A step applies the coin at every site, multiplies both outgoing
// amplitudes from the defect site by omega, then shifts component 0 one
// site left and component 1 one site right.

#include <cmath>
#include <utility>

#include "qwalk/core.hpp"

namespace qwalk {

struct Distribution {
    int lo = 0;
    std::vector<double> p;

    int size() const { return static_cast<int>(p.size()); }
    double at(int position) const {
        const int i = position - lo;
        return (i >= 0 && i < size()) ? p[static_cast<std::size_t>(i)] : 0.0;
    }
};

namespace detail {

// Advances src into dst assuming src is zero outside indices [i0, i1].
// Writes only [i0 - 1, i1 + 1] (clearing it first), so callers reusing
// buffers must keep dst zero elsewhere. Returns the new occupied span.
// Exact zeros are skipped, which keeps parity-forbidden sites at exactly
// zero instead of accumulating rounding noise.
inline std::pair<int, int> step_span(const WalkerState& src, WalkerState& dst,
                                     const CoinOperator& coin,
                                     const DefectConfig& defect, int i0, int i1) {
    const int n = src.size();
    if (i0 < 0) i0 = 0;
    if (i1 > n - 1) i1 = n - 1;

    dst.lo = src.lo;
    dst.t = src.t + 1;
    const int z0 = (i0 > 0) ? i0 - 1 : 0;
    const int z1 = (i1 < n - 1) ? i1 + 1 : n - 1;
    for (int i = z0; i <= z1; ++i) {
        dst.alpha[static_cast<std::size_t>(i)] = Complex{};
        dst.beta[static_cast<std::size_t>(i)] = Complex{};
    }

    const double ct = coin.matrix[0][0];
    const double st = coin.matrix[0][1];
    const int defect_index = defect.m - src.lo;

    for (int i = i0; i <= i1; ++i) {
        const Complex a = src.alpha[static_cast<std::size_t>(i)];
        const Complex b = src.beta[static_cast<std::size_t>(i)];
        if (a == Complex{} && b == Complex{}) continue;

        Complex to_left = ct * a + st * b;
        Complex to_right = st * a - ct * b;
        if (i == defect_index) {
            to_left *= defect.omega;
            to_right *= defect.omega;
        }
        if (to_left != Complex{}) {
            if (i == 0)
                throw WindowOverflowError("amplitude reached the left window edge");
            dst.alpha[static_cast<std::size_t>(i - 1)] = to_left;
        }
        if (to_right != Complex{}) {
            if (i == n - 1)
                throw WindowOverflowError("amplitude reached the right window edge");
            dst.beta[static_cast<std::size_t>(i + 1)] = to_right;
        }
    }
    return {z0, z1};
}

// Smallest index span containing every nonzero amplitude.
inline std::pair<int, int> occupied_span(const WalkerState& s) {
    const int n = s.size();
    int i0 = 0;
    while (i0 < n && s.alpha[static_cast<std::size_t>(i0)] == Complex{} &&
           s.beta[static_cast<std::size_t>(i0)] == Complex{})
        ++i0;
    if (i0 == n) return {0, -1};  // all-zero state
    int i1 = n - 1;
    while (s.alpha[static_cast<std::size_t>(i1)] == Complex{} &&
           s.beta[static_cast<std::size_t>(i1)] == Complex{})
        --i1;
    return {i0, i1};
}

}  // namespace detail

inline WalkerState step(const WalkerState& s, const CoinOperator& coin,
                        const DefectConfig& defect) {
    WalkerState out = make_blank_state(s.lo, s.size());
    detail::step_span(s, out, coin, defect, 0, s.size() - 1);
    return out;
}

// Runs `steps` steps, calling observer(state) after each one.
template <class Observer>
WalkerState evolve_observed(WalkerState s, const CoinOperator& coin,
                            const DefectConfig& defect, int steps,
                            Observer&& observer) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    WalkerState buf = make_blank_state(s.lo, s.size());
    auto [i0, i1] = detail::occupied_span(s);
    for (int k = 0; k < steps; ++k) {
        if (i1 < i0) {  // all-zero state stays all-zero
            s.t += 1;
        } else {
            std::tie(i0, i1) = detail::step_span(s, buf, coin, defect, i0, i1);
            std::swap(s, buf);
        }
        observer(static_cast<const WalkerState&>(s));
    }
    return s;
}

inline WalkerState evolve(WalkerState s, const CoinOperator& coin,
                          const DefectConfig& defect, int steps) {
    return evolve_observed(std::move(s), coin, defect, steps,
                           [](const WalkerState&) {});
}

inline Distribution distribution(const WalkerState& s) {
    Distribution d;
    d.lo = s.lo;
    d.p.resize(s.alpha.size());
    for (std::size_t i = 0; i < s.alpha.size(); ++i)
        d.p[i] = std::norm(s.alpha[i]) + std::norm(s.beta[i]);
    return d;
}

inline double spread_stddev(const Distribution& d) {
    double total = 0.0, mean = 0.0;
    for (int i = 0; i < d.size(); ++i) {
        const double x = static_cast<double>(d.lo + i);
        total += d.p[static_cast<std::size_t>(i)];
        mean += x * d.p[static_cast<std::size_t>(i)];
    }
    if (total <= 0.0) return 0.0;
    mean /= total;
    double var = 0.0;
    for (int i = 0; i < d.size(); ++i) {
        const double x = static_cast<double>(d.lo + i) - mean;
        var += x * x * d.p[static_cast<std::size_t>(i)];
    }
    var /= total;
    return std::sqrt(var > 0.0 ? var : 0.0);
}

// Mean of P(site) over steps t in [t_lo, t_hi] with t = step_parity (mod 2).
// Only those steps can carry probability at a site whose distance from the
// starting site has that parity.
inline double average_site_probability(const WalkerState& initial,
                                       const CoinOperator& coin,
                                       const DefectConfig& defect, int site,
                                       int t_lo, int t_hi, int step_parity) {
    if (t_lo < 0 || t_hi < t_lo) throw std::invalid_argument("bad step range");
    if (initial.t > t_hi) throw std::invalid_argument("state already past t_hi");
    double acc = 0.0;
    int count = 0;
    auto record = [&](const WalkerState& s) {
        if (s.t >= t_lo && s.t <= t_hi && (s.t & 1) == (step_parity & 1)) {
            acc += probability_at(s, site);
            ++count;
        }
    };
    record(initial);
    evolve_observed(initial, coin, defect, static_cast<int>(t_hi - initial.t),
                    record);
    return count > 0 ? acc / count : 0.0;
}

}  // namespace qwalk
