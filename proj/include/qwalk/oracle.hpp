#pragma once

// Independent spectral probes of the evolved walk. Nothing here touches the
// closed-form machinery: eigenphases are read off the time series of the
// evolution itself, and decay rates are fit to late-time site probabilities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/detail/minimize.hpp"
#include "qwalk/evolution.hpp"

namespace qwalk {

// Return-amplitude series of the squared walk: c[N] = <ini|U^{2N}|ini> for
// N in [0, n_max). The window must be sized for 2*n_max steps.
inline std::vector<Complex> autocorrelation_series(const WalkerState& ini,
                                                   const CoinOperator& coin,
                                                   const DefectConfig& defect,
                                                   int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<Complex> c;
    c.reserve(static_cast<std::size_t>(n_max));
    c.push_back(inner_product(ini, ini));
    auto record = [&](const WalkerState& s) {
        if (s.t % 2 == 0) c.push_back(inner_product(ini, s));
    };
    evolve_observed(ini, coin, defect, 2 * (n_max - 1), record);
    return c;
}

// Probe released at the defect site with coin state (1, 0), window sized
// for the full series. This coin state overlaps every localized profile
// through its defect-site component-0 amplitude.
inline WalkerState spectral_probe(const DefectConfig& defect, int n_max) {
    const int reach = 2 * n_max + 2;
    WalkerState s = make_blank_state(defect.m - reach, 2 * reach + 1);
    s.alpha[static_cast<std::size_t>(s.index_of(defect.m))] = Complex{1.0, 0.0};
    return s;
}

struct SpectrumEstimate {
    std::vector<double> eigenphases;  // ascending, in [0, 2*pi)
    std::vector<double> weights;      // refined DFT amplitude at each peak
    double resolution = 0.0;          // bin width 2*pi/len
};

namespace detail {

// In-place iterative radix-2 FFT, forward sign convention
// X[k] = sum_N x[N] exp(-2*pi*i*k*N/L).
inline void fft_radix2(std::vector<Complex>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("series length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        const Complex wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            Complex w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = x[i + k];
                const Complex v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Normalized DFT amplitude of the first `len` samples at a continuous phase.
inline double dft_amplitude(const std::vector<Complex>& c, std::size_t len,
                            double kappa) {
    Complex acc{};
    Complex rot{1.0, 0.0};
    const Complex w{std::cos(-kappa), std::sin(-kappa)};
    for (std::size_t i = 0; i < len; ++i) {
        acc += c[i] * rot;
        rot *= w;
    }
    return std::abs(acc) / static_cast<double>(len);
}

}  // namespace detail

// Locates point-spectrum eigenphases of the squared walk in a return-
// amplitude series. Candidate bins rise above 3x the median magnitude;
// each candidate cluster is refined off-grid, then kept only if its peak
// amplitude is stable when the series is halved (a point-spectrum line
// keeps its amplitude; a continuum band-edge loses a factor ~1/sqrt(2)).
inline SpectrumEstimate estimate_eigenphases(const std::vector<Complex>& c) {
    const std::size_t len = c.size();
    if (len < 8 || (len & (len - 1)) != 0)
        throw std::invalid_argument("series length must be a power of two >= 8");

    std::vector<Complex> spectrum(c);
    detail::fft_radix2(spectrum);
    std::vector<double> mag(len);
    for (std::size_t i = 0; i < len; ++i) mag[i] = std::abs(spectrum[i]);

    std::vector<double> sorted(mag);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(len / 2),
                     sorted.end());
    const double median = sorted[len / 2];
    const double peak = *std::max_element(mag.begin(), mag.end());
    // relative floor keeps roundoff dust out when the median is ~zero
    const double threshold = std::max(3.0 * median, 1e-8 * peak);

    SpectrumEstimate est;
    est.resolution = 2.0 * pi / static_cast<double>(len);
    if (peak <= 0.0) return est;

    std::vector<char> above(len), visited(len, 0);
    for (std::size_t i = 0; i < len; ++i) above[i] = mag[i] > threshold ? 1 : 0;

    for (std::size_t i = 0; i < len; ++i) {
        if (!above[i] || visited[i]) continue;
        // grow the cluster cyclically in both directions
        std::size_t best = i;
        visited[i] = 1;
        std::size_t j = i;
        for (std::size_t n = 1; n < len; ++n) {
            j = (j + 1) % len;
            if (!above[j] || visited[j]) break;
            visited[j] = 1;
            if (mag[j] > mag[best]) best = j;
        }
        j = i;
        for (std::size_t n = 1; n < len; ++n) {
            j = (j + len - 1) % len;
            if (!above[j] || visited[j]) break;
            visited[j] = 1;
            if (mag[j] > mag[best]) best = j;
        }

        const double center = est.resolution * static_cast<double>(best);
        const double kappa = detail::golden_section_max(
            [&](double k) { return detail::dft_amplitude(c, len, k); },
            center - est.resolution, center + est.resolution, 1e-10);
        const double amp_full = detail::dft_amplitude(c, len, kappa);
        const double amp_half = detail::dft_amplitude(c, len / 2, kappa);
        if (amp_half <= 0.0 || amp_full / amp_half <= 0.85) continue;

        double k = std::fmod(kappa, 2.0 * pi);
        if (k < 0.0) k += 2.0 * pi;
        est.eigenphases.push_back(k);
        est.weights.push_back(amp_full);
    }

    // sort by eigenphase, drop duplicates closer than one bin
    std::vector<std::size_t> order(est.eigenphases.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return est.eigenphases[a] < est.eigenphases[b];
    });
    SpectrumEstimate out;
    out.resolution = est.resolution;
    for (std::size_t idx : order) {
        if (!out.eigenphases.empty() &&
            est.eigenphases[idx] - out.eigenphases.back() < out.resolution)
            continue;
        out.eigenphases.push_back(est.eigenphases[idx]);
        out.weights.push_back(est.weights[idx]);
    }
    return out;
}

struct DecayFit {
    double y_abs = 0.0;        // geometric mean of the two sides
    double y_abs_left = 0.0;   // fit over offsets -2..-10
    double y_abs_right = 0.0;  // fit over offsets +2..+10
};

namespace detail {

// Least-squares slope of ln(p) against half-offsets 1..5; the fitted decay
// per two sites is exp(slope / 2) since p scales as |y|^(2 * half-offset).
inline double decay_rate(const std::vector<double>& p) {
    const std::size_t n = p.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1);
        const double y = std::log(p[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope =
        (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
    return std::exp(slope / 2.0);
}

}  // namespace detail

// Fits the late-time decay of time-averaged probability at offsets
// m +/- {2,4,6,8,10} and reports the per-two-site rate. The averaging
// window must start late enough that the ballistic part has left the
// neighborhood; offsets with no stationary weight raise errors.
inline DecayFit decay_profile_fit(const CoinOperator& coin, const DefectConfig& defect,
                                  const InitialState& ini, int t_lo, int t_hi) {
    if (t_lo < 400)
        throw std::invalid_argument("averaging window must start at t >= 400");
    if (t_hi < t_lo) throw std::invalid_argument("bad step range");

    const std::vector<int> offsets{2, 4, 6, 8, 10};
    std::vector<int> sites;
    for (int k : offsets) {
        sites.push_back(defect.m + k);
        sites.push_back(defect.m - k);
    }

    std::vector<double> acc(sites.size(), 0.0);
    std::vector<int> cnt(sites.size(), 0);
    auto record = [&](const WalkerState& s) {
        if (s.t < t_lo || s.t > t_hi) return;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const int par = (((sites[i] - ini.start) % 2) + 2) % 2;
            if ((s.t & 1) != par) continue;
            acc[i] += probability_at(s, sites[i]);
            cnt[i] += 1;
        }
    };
    const WalkerState initial = make_initial_state(ini, t_hi);
    evolve_observed(initial, coin, defect, t_hi, record);

    std::vector<double> right, left;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (cnt[i] == 0)
            throw InsufficientSignalError("no sampled steps for a fit site");
        const double p = acc[i] / cnt[i];
        if (p < 1e-12)
            throw InsufficientSignalError("site probability below fit floor");
        (i % 2 == 0 ? right : left).push_back(p);
    }

    DecayFit fit;
    fit.y_abs_right = detail::decay_rate(right);
    fit.y_abs_left = detail::decay_rate(left);
    if (fit.y_abs_right >= 0.95 || fit.y_abs_left >= 0.95)
        throw NoStationaryProfileError("late-time profile does not decay");
    fit.y_abs = std::sqrt(fit.y_abs_left * fit.y_abs_right);
    return fit;
}

}  // namespace qwalk
