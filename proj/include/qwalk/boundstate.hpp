#pragma once

// Closed-form localized eigenstates of the squared walk operator.
//
// The two-step operator acting on a defect walk admits eigenstates whose
// amplitudes live on even offsets k = n - m from the defect and decay
// geometrically, two sites at a time, by a complex factor y with |y| < 1.
// Eigenvalues lambda = e^{i kappa} on the unit circle are located as roots
// of a scalar residual assembled from the defect-site matching conditions;
// the full profile then follows from y and one amplitude ratio.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/detail/minimize.hpp"

namespace qwalk {

// Decay factor per two sites for a candidate eigenvalue lambda:
//   y = (lambda^2 + omega^2 - 2 lambda omega sin^2) /
//       (lambda (1 + omega^2 - 2 omega sin^2)).
inline Complex compute_y(Complex lambda, Complex omega, double theta) {
    const double s2 = std::sin(theta) * std::sin(theta);
    const Complex den = lambda * (1.0 + omega * omega - 2.0 * omega * s2);
    if (std::abs(den) < 1e-14)
        throw SingularDenominatorError("decay factor undefined: vanishing denominator");
    return (lambda * lambda + omega * omega - 2.0 * lambda * omega * s2) / den;
}

// Scalar residual whose unit-circle roots are the bound-state eigenvalues.
// Vanishes when the two defect-site matching conditions admit a nonzero
// amplitude pair. Guarded at lambda = 1 and lambda*y = 1 where the
// intermediate ratios blow up.
inline Complex defect_residual(Complex lambda, Complex omega, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double s2 = s * s;
    const double c2 = c * c;
    if (std::abs(lambda - 1.0) < 1e-12)
        throw SingularDenominatorError("residual undefined at lambda = 1");
    const Complex y = compute_y(lambda, omega, theta);
    if (std::abs(1.0 - lambda * y) < 1e-12)
        throw SingularDenominatorError("residual undefined at lambda*y = 1");
    const Complex a_term = y * c2 + ((y - lambda) / (lambda - 1.0)) * c2 +
                           omega * s2 - lambda;
    const Complex b_term = lambda - y * c2 - omega * s2 +
                           ((lambda - 1.0) / (1.0 - lambda * y)) * y * s2;
    return omega * omega * s2 * c2 - a_term * b_term;
}

namespace detail {

// |defect_residual|^2 as a function of the eigenphase, +inf at the guards.
inline double residual_mag2(double kappa, Complex omega, double theta) {
    const Complex lambda = std::polar(1.0, kappa);
    try {
        return std::norm(defect_residual(lambda, omega, theta));
    } catch (const SingularDenominatorError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace detail

// Scans the unit circle for roots of the defect residual: a dense grid of
// eigenphases, golden-section refinement around each local minimum, then
// acceptance tests on the refined point. Returns eigenvalues sorted by
// eigenphase in [0, 2*pi).
inline std::vector<Complex> find_eigenvalues(double theta, double phi) {
    if (!(theta > 0.0 && theta < pi / 2))
        throw std::invalid_argument("coin angle must lie in (0, pi/2)");
    const DefectConfig defect = make_defect(0, phi);
    const Complex omega = defect.omega;

    constexpr int grid_size = 8192;
    constexpr double coarse_gate = 1e-4;   // local minimum must dip below this
    constexpr double accept_tol = 1e-9;    // |residual| at the refined root
    constexpr double refine_tol = 1e-12;   // bracket width in eigenphase
    const double dk = 2.0 * pi / grid_size;

    std::vector<double> mag2(grid_size);
    for (int i = 0; i < grid_size; ++i)
        mag2[static_cast<std::size_t>(i)] = detail::residual_mag2(i * dk, omega, theta);

    std::vector<double> kappas;
    for (int i = 0; i < grid_size; ++i) {
        const double here = mag2[static_cast<std::size_t>(i)];
        const double prev = mag2[static_cast<std::size_t>((i + grid_size - 1) % grid_size)];
        const double next = mag2[static_cast<std::size_t>((i + 1) % grid_size)];
        if (!(here < coarse_gate) || here > prev || here > next) continue;

        const double kappa = detail::golden_section_min(
            [&](double k) { return detail::residual_mag2(k, omega, theta); },
            i * dk - dk, i * dk + dk, refine_tol);
        const Complex lambda = std::polar(1.0, kappa);
        if (std::abs(lambda - 1.0) <= 1e-9) continue;
        Complex y;
        try {
            y = compute_y(lambda, omega, theta);
            if (std::abs(defect_residual(lambda, omega, theta)) >= accept_tol) continue;
        } catch (const SingularDenominatorError&) {
            continue;
        }
        if (std::abs(y) >= 1.0 - 1e-8) continue;  // must decay, not sit in the band
        kappas.push_back(kappa < 0.0 ? kappa + 2.0 * pi : kappa);
    }

    std::sort(kappas.begin(), kappas.end());
    std::vector<Complex> out;
    double last = -1.0;
    for (double k : kappas) {
        if (last >= 0.0 && k - last < 1e-6) continue;  // same root from adjacent bins
        last = k;
        out.push_back(std::polar(1.0, k));
    }
    return out;
}

// One localized eigenstate of the squared walk operator. Profile amplitudes
// are stored per offset k = site - m over [-window, window]; odd offsets
// are identically zero. Index k + window addresses offset k.
struct BoundState {
    Complex lambda{};
    Complex y{};
    Complex c_plus{};
    Complex c_minus{};
    int m = 0;
    int window = 0;
    std::vector<Complex> alpha_bar;
    std::vector<Complex> beta_bar;

    double eigenphase() const {
        double k = std::arg(lambda);
        return k < 0 ? k + 2.0 * pi : k;
    }
    bool holds(int offset) const { return offset >= -window && offset <= window; }
    Complex alpha_at(int offset) const {
        if (!holds(offset)) throw WindowRangeError("offset outside profile window");
        return alpha_bar[static_cast<std::size_t>(offset + window)];
    }
    Complex beta_at(int offset) const {
        if (!holds(offset)) throw WindowRangeError("offset outside profile window");
        return beta_bar[static_cast<std::size_t>(offset + window)];
    }
    Complex alpha_or_zero(int offset) const {
        return holds(offset) ? alpha_bar[static_cast<std::size_t>(offset + window)]
                             : Complex{};
    }
    Complex beta_or_zero(int offset) const {
        return holds(offset) ? beta_bar[static_cast<std::size_t>(offset + window)]
                             : Complex{};
    }
};

// Smallest even window at which the stored tail drops below 1e-14,
// capped at 400 half-sites either side.
inline int default_window(Complex y) {
    const double ay = std::abs(y);
    if (ay <= 1e-300) return 2;
    if (ay >= 1.0) return 400;
    // need |y|^(W/2) < 1e-14, i.e. W/2 strictly above the log ratio
    const double halves = std::log(1e-14) / std::log(ay);
    const int w = 2 * static_cast<int>(std::floor(halves)) + 2;
    return std::clamp(w, 2, 400);
}

// Fills the profile for an accepted eigenvalue. The right tail scales by
// c_plus, the left by c_minus; the ratio is fixed by the defect-site
// matching conditions:
//   c_minus / c_plus = [cos^2 (lambda - omega^2) + (omega sin^2 - lambda)
//                       (1 + omega^2 - 2 omega sin^2)] /
//                      [omega cos^2 (2 omega sin^2 - lambda - 1)].
// Component-1 amplitudes then follow from the one-step relation
//   beta_{k} = cot * (alpha_k - lambda alpha_{k-2}) / (lambda - 1)
// evaluated on each tail. The state is normalized before returning.
inline BoundState build_bound_state(Complex lambda, double theta, double phi, int m,
                                    int window) {
    if (!(theta > 0.0 && theta < pi / 2))
        throw std::invalid_argument("coin angle must lie in (0, pi/2)");
    if (window < 2 || window % 2 != 0)
        throw std::invalid_argument("window must be even and >= 2");
    const Complex omega = make_defect(m, phi).omega;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double s2 = s * s;
    const double c2 = c * c;
    const double cot = c / s;

    if (std::abs(lambda - 1.0) < 1e-12)
        throw SingularDenominatorError("profile undefined at lambda = 1");
    const Complex y = compute_y(lambda, omega, theta);
    if (std::abs(1.0 - lambda * y) < 1e-12)
        throw SingularDenominatorError("profile undefined at lambda*y = 1");

    const Complex denom = omega * c2 * (2.0 * omega * s2 - lambda - 1.0);
    if (std::abs(denom) < 1e-14)
        throw DegenerateCoefficientError("amplitude ratio undefined at these parameters");
    const Complex c_plus = 1.0;
    const Complex c_minus =
        c_plus * (c2 * (lambda - omega * omega) +
                  (omega * s2 - lambda) * (1.0 + omega * omega - 2.0 * omega * s2)) /
        denom;

    BoundState bs;
    bs.lambda = lambda;
    bs.y = y;
    bs.m = m;
    bs.window = window;
    const std::size_t n = static_cast<std::size_t>(2 * window + 1);
    bs.alpha_bar.assign(n, Complex{});
    bs.beta_bar.assign(n, Complex{});

    auto aref = [&](int k) -> Complex& {
        return bs.alpha_bar[static_cast<std::size_t>(k + window)];
    };
    auto bref = [&](int k) -> Complex& {
        return bs.beta_bar[static_cast<std::size_t>(k + window)];
    };

    const Complex right_beta_factor = (y - lambda) / (lambda - 1.0) * cot;
    const Complex left_beta_factor = (1.0 - lambda * y) / (lambda - 1.0) * cot;

    aref(0) = c_plus;
    bref(0) = c_minus * left_beta_factor;
    Complex ypow = 1.0;
    for (int k = 2; k <= window; k += 2) {
        // tails pick up one factor of y per two sites
        const Complex ynext = ypow * y;
        aref(k) = c_plus * ynext;
        bref(k) = c_plus * right_beta_factor * ypow;
        aref(-k) = c_minus * ynext;
        bref(-k) = c_minus * left_beta_factor * ynext;
        ypow = ynext;
    }

    double nrm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        nrm2 += std::norm(bs.alpha_bar[i]) + std::norm(bs.beta_bar[i]);
    const double inv = 1.0 / std::sqrt(nrm2);
    for (std::size_t i = 0; i < n; ++i) {
        bs.alpha_bar[i] *= inv;
        bs.beta_bar[i] *= inv;
    }
    bs.c_plus = c_plus * inv;
    bs.c_minus = c_minus * inv;
    return bs;
}

// Root search plus construction at the default window for each root.
inline std::vector<BoundState> solve_bound_states(double theta, double phi, int m) {
    std::vector<BoundState> out;
    if (phi == 0.0) return out;  // uniform walk has no localized states
    for (Complex lambda : find_eigenvalues(theta, phi)) {
        const Complex y = compute_y(lambda, make_defect(m, phi).omega, theta);
        out.push_back(build_bound_state(lambda, theta, phi, m, default_window(y)));
    }
    return out;
}

// Embeds the profile into a walker window centered on the defect with the
// given slack on each side, for direct evolution checks.
inline WalkerState to_walker_state(const BoundState& bs, int slack) {
    if (slack < 2) throw std::invalid_argument("slack must be >= 2");
    WalkerState s = make_blank_state(bs.m - bs.window - slack,
                                     2 * (bs.window + slack) + 1);
    for (int k = -bs.window; k <= bs.window; ++k) {
        const std::size_t i = static_cast<std::size_t>(s.index_of(bs.m + k));
        s.alpha[i] = bs.alpha_at(k);
        s.beta[i] = bs.beta_at(k);
    }
    return s;
}

}  // namespace qwalk
