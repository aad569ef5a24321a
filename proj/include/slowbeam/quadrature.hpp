#pragma once

#include <cmath>

namespace slowbeam {

// Adaptive Simpson quadrature with a relative tolerance (scaled by the
// first whole-interval estimate). Good enough for the smooth one-dimensional
// normalizations and moments this toolkit needs.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, int max_depth = 30) {
    struct Impl {
        const F& fn;
        static double simpson(double a, double fa, double b, double fb, double fm) {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        double recurse(double a, double fa, double b, double fb, double fm, double whole,
                       double eps, int depth) const {
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = fn(lm), frm = fn(rm);
            double left = simpson(a, fa, m, fm, flm);
            double right = simpson(m, fm, b, fb, frm);
            double delta = left + right - whole;
            if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
                return left + right + delta / 15.0;
            return recurse(a, fa, m, fm, flm, left, 0.5 * eps, depth - 1) +
                   recurse(m, fm, b, fb, frm, right, 0.5 * eps, depth - 1);
        }
    };
    Impl impl{f};
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = Impl::simpson(a, fa, b, fb, fm);
    double eps = rel_tol * std::max(std::fabs(whole), 1e-300);
    return impl.recurse(a, fa, b, fb, fm, whole, eps, max_depth);
}

}  // namespace slowbeam
