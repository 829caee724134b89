#pragma once

// Derivative-free 1-d minimization on a bracket.

#include <cmath>

namespace qwalk::detail {

// Golden-section search for the minimizer of f on [a, b]; stops when the
// bracket is narrower than tol and returns its midpoint.
template <class F>
double golden_section_min(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

template <class F>
double golden_section_max(F&& f, double a, double b, double tol) {
    return golden_section_min([&](double x) { return -f(x); }, a, b, tol);
}

}  // namespace qwalk::detail
