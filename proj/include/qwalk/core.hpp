#pragma once

// Core value types for a discrete-time coined walk on the line with a
// single phase defect: the coin, the defect parameters, the initial coin
// state, and the windowed two-component amplitude field.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr const char* tool_version = "0.1.0";

// A step would move nonzero amplitude past the stored window.
struct WindowOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A closed-form expression was evaluated at a pole.
struct SingularDenominatorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The amplitude-matching coefficient is undefined at these parameters.
struct DegenerateCoefficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested offset lies outside a stored profile window.
struct WindowRangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Site probabilities too small to support a decay fit.
struct InsufficientSignalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Late-time profile does not decay away from the defect.
struct NoStationaryProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-parameter coin: [[cos t, sin t], [sin t, -cos t]].
// Real, symmetric and involutory for every angle.
struct CoinOperator {
    double theta = 0.0;
    std::array<std::array<double, 2>, 2> matrix{};
};

inline CoinOperator make_coin(double theta) {
    if (!std::isfinite(theta))
        throw std::invalid_argument("coin angle must be finite");
    CoinOperator c;
    c.theta = theta;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    c.matrix = {{{ct, st}, {st, -ct}}};
    return c;
}

// Defect site m carries the extra phase omega = exp(2*pi*i*phi) on both
// amplitudes leaving it. phi = 0 gives omega = 1 exactly (no defect).
struct DefectConfig {
    int m = 0;
    double phi = 0.0;
    Complex omega{1.0, 0.0};
};

inline DefectConfig make_defect(int m, double phi) {
    if (!(phi >= 0.0 && phi < 1.0))
        throw std::invalid_argument("defect strength must lie in [0, 1)");
    DefectConfig d;
    d.m = m;
    d.phi = phi;
    d.omega = Complex{std::cos(2.0 * pi * phi), std::sin(2.0 * pi * phi)};
    return d;
}

// Walker starts at a single site with coin state
// cos(varphi)*e^{i delta}|0> + sin(varphi)|1>.
struct InitialState {
    double varphi = pi / 4;
    double delta = pi / 2;
    int start = 0;
};

// Dense amplitude field over the window [lo, lo + size - 1].
// alpha = coin component 0 (moves left), beta = component 1 (moves right).
struct WalkerState {
    int lo = 0;
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
    std::int64_t t = 0;

    int size() const { return static_cast<int>(alpha.size()); }
    int hi() const { return lo + size() - 1; }
    bool contains(int position) const { return position >= lo && position <= hi(); }
    int index_of(int position) const { return position - lo; }

    Complex alpha_at(int position) const {
        return contains(position) ? alpha[static_cast<std::size_t>(index_of(position))]
                                  : Complex{};
    }
    Complex beta_at(int position) const {
        return contains(position) ? beta[static_cast<std::size_t>(index_of(position))]
                                  : Complex{};
    }
};

inline WalkerState make_blank_state(int lo, int size) {
    if (size <= 0) throw std::invalid_argument("window size must be positive");
    WalkerState s;
    s.lo = lo;
    s.alpha.assign(static_cast<std::size_t>(size), Complex{});
    s.beta.assign(static_cast<std::size_t>(size), Complex{});
    return s;
}

// Window sized for a planned number of steps plus slack, so the light cone
// never reaches the edge.
inline WalkerState make_initial_state(const InitialState& ini, int planned_steps) {
    if (planned_steps < 0) throw std::invalid_argument("planned steps must be >= 0");
    const int reach = planned_steps + 2;
    WalkerState s = make_blank_state(ini.start - reach, 2 * reach + 1);
    const std::size_t i = static_cast<std::size_t>(s.index_of(ini.start));
    s.alpha[i] = std::polar(std::cos(ini.varphi), ini.delta);
    s.beta[i] = Complex{std::sin(ini.varphi), 0.0};
    return s;
}

inline double norm_squared(const WalkerState& s) {
    double acc = 0.0;
    for (const Complex& a : s.alpha) acc += std::norm(a);
    for (const Complex& b : s.beta) acc += std::norm(b);
    return acc;
}

inline double probability_at(const WalkerState& s, int position) {
    return std::norm(s.alpha_at(position)) + std::norm(s.beta_at(position));
}

// <a|b> summed over both coin components. Windows must coincide.
inline Complex inner_product(const WalkerState& a, const WalkerState& b) {
    if (a.lo != b.lo || a.size() != b.size())
        throw std::invalid_argument("inner product requires identical windows");
    Complex acc{};
    for (std::size_t i = 0; i < a.alpha.size(); ++i) {
        acc += std::conj(a.alpha[i]) * b.alpha[i];
        acc += std::conj(a.beta[i]) * b.beta[i];
    }
    return acc;
}

}  // namespace qwalk
