#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>

namespace fgplate {

/// Adaptive Gauss-Kronrod 7/15 quadrature on [a, b].
/// Bisects until the local Kronrod-Gauss discrepancy is below
/// rel_tol * |integral estimate|, so endpoint derivative singularities
/// (fractional power-law profiles) still converge.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
    // 15-point Kronrod nodes / weights and embedded 7-point Gauss weights.
    static constexpr double xk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static constexpr double wk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};

    struct Panel {
        double integral;
        double error;
    };
    auto kronrod = [&](double lo, double hi) -> Panel {
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        double resk = wk[7] * f(c);
        double resg = wg[3] * f(c);
        for (int i = 0; i < 7; ++i) {
            const double dx = h * xk[i];
            const double fsum = f(c - dx) + f(c + dx);
            resk += wk[i] * fsum;
            if (i % 2 == 1) resg += wg[i / 2] * fsum;
        }
        return {resk * h, std::abs((resk - resg) * h)};
    };

    const Panel whole = kronrod(a, b);
    const double scale = std::max(std::abs(whole.integral), 1e-300);

    std::function<double(double, double, Panel, int)> refine =
        [&](double lo, double hi, Panel est, int depth) -> double {
        if (est.error <= rel_tol * scale || depth >= 60) return est.integral;
        const double mid = 0.5 * (lo + hi);
        const Panel left = kronrod(lo, mid);
        const Panel right = kronrod(mid, hi);
        return refine(lo, mid, left, depth + 1) + refine(mid, hi, right, depth + 1);
    };
    return refine(a, b, whole, 0);
}

} // namespace fgplate
