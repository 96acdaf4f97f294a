#ifndef QNET_GOLDEN_HPP
#define QNET_GOLDEN_HPP

#include <cmath>
#include <functional>
#include <utility>

namespace qnet {

// Maximize a smooth scalar function over [lo, hi]: coarse scan to bracket the
// dominant peak, then golden-section refinement to the given x tolerance.
// Returns {x*, f(x*)}. If the scan sees a flat objective (range below
// flat_eps), returns {0, f(0)} by convention.
inline std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                                    double lo, double hi, double xtol,
                                                    int scan_points = 160,
                                                    double flat_eps = 1e-12) {
    const double step = (hi - lo) / (scan_points - 1);
    double best_x = lo, best_f = f(lo);
    double fmin = best_f;
    for (int i = 1; i < scan_points; ++i) {
        const double x = lo + i * step;
        const double v = f(x);
        if (v > best_f) {
            best_f = v;
            best_x = x;
        }
        if (v < fmin) fmin = v;
    }
    // x = 0 is always a candidate so the refined optimum never loses to it.
    if (lo <= 0.0 && 0.0 <= hi) {
        const double v0 = f(0.0);
        if (v0 > best_f) {
            best_f = v0;
            best_x = 0.0;
        }
        if (v0 < fmin) fmin = v0;
    }
    if (best_f - fmin < flat_eps) return {0.0, f(0.0)};

    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (fm >= best_f) return {xm, fm};
    return {best_x, best_f};
}

}  // namespace qnet

#endif
