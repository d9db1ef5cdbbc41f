#include <doctest.h>

#include <cmath>
#include <vector>

#include "fgplate/bessel.hpp"
#include "oracles.hpp"

using namespace fgplate;

namespace {
const double kPi = 3.141592653589793238462643;

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}
} // namespace

TEST_CASE("spot values against series/integral references") {
    // J0(1) = 0.7651976866 (ascending-series reference)
    const double j01 = static_cast<double>(oracles::bessel_j_series(0, 1.0L));
    CHECK(j01 == doctest::Approx(0.7651976866).epsilon(1e-9));
    CHECK(bessel(BesselKind::J, 0, 1.0).value == doctest::Approx(j01).epsilon(1e-12));

    // K0(1) = 0.4210244382 (integral-representation reference)
    const double k01 = static_cast<double>(oracles::bessel_k_scaled_integral(0, 1.0L) *
                                           std::exp(-1.0L));
    CHECK(k01 == doctest::Approx(0.4210244382).epsilon(1e-9));
    CHECK(bessel(BesselKind::K, 0, 1.0).value == doctest::Approx(k01).epsilon(1e-12));

    for (int p : {0, 1, 3, 8}) {
        for (double x : {0.3, 1.7, 4.0, 7.5}) {
            const double jref = static_cast<double>(oracles::bessel_j_series(p, x));
            CHECK(bessel(BesselKind::J, p, x).value == doctest::Approx(jref).epsilon(1e-12));
        }
    }
}

TEST_CASE("scaled modified functions reconstruct the references") {
    for (int p : {0, 2, 10}) {
        for (double x : {60.0, 120.0, 350.0}) {
            const auto I = bessel(BesselKind::I, p, x);
            const auto K = bessel(BesselKind::K, p, x);
            CHECK(I.scaled);
            CHECK(K.scaled);
            CHECK(I.log_scale == doctest::Approx(x));
            CHECK(K.log_scale == doctest::Approx(-x));
            const double iref = static_cast<double>(oracles::bessel_i_scaled_series(p, x));
            const double kref = static_cast<double>(oracles::bessel_k_scaled_integral(p, x));
            CHECK(I.value == doctest::Approx(iref).epsilon(1e-12));
            CHECK(K.value == doctest::Approx(kref).epsilon(1e-12));
        }
    }
    // below the threshold the values are plain
    const auto I = bessel(BesselKind::I, 1, 10.0);
    CHECK(!I.scaled);
    CHECK(I.value == doctest::Approx(static_cast<double>(
                         oracles::bessel_i_scaled_series(1, 10.0L) * std::exp(10.0L)))
                         .epsilon(1e-12));
}

TEST_CASE("wronskian identities over the contract grid") {
    const auto grid = log_grid(0.01, 500.0, 41);
    for (int p = 0; p <= 30; p += (p < 4 ? 1 : 5)) {
        for (double x : grid) {
            const auto [r1, r2] = wronskian_check(p, x);
            CHECK(r1 <= 1e-10 * (2.0 / (kPi * x)));
            CHECK(r2 <= 1e-10 * (1.0 / x));
        }
    }
    // values quoted by the contract at p = 0, x = 2
    const auto jy = bessel_jy(0, 2.0);
    const auto ik = bessel_ik(0, 2.0);
    CHECK(jy.j * jy.yp - jy.jp * jy.y == doctest::Approx(0.3183099).epsilon(1e-6));
    CHECK(ik.i * ik.kp - ik.ip * ik.k == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("cylinder equation residual by finite differences") {
    for (int p : {0, 1, 5, 12}) {
        for (double x : {0.8, 3.0, 17.0, 90.0}) {
            for (auto kind : {BesselKind::J, BesselKind::Y, BesselKind::I, BesselKind::K}) {
                auto f = [&](double t) { return bessel(kind, p, t).value; };
                const double h = 3e-4 * x;
                const double d2 = oracles::fd_second(f, x, h);
                const double d1 = oracles::fd_first(f, x, h);
                const double c = f(x);
                const double sgn =
                    (kind == BesselKind::I || kind == BesselKind::K) ? -1.0 : 1.0;
                // scaled I/K solve the equation for e^{-+x} C, which adds
                // first/second derivative shifts; undo by comparing plain
                // values below the scaling threshold only
                if (x > bessel_scale_threshold &&
                    (kind == BesselKind::I || kind == BesselKind::K))
                    continue;
                const double res = x * x * d2 + x * d1 + sgn * (x * x - sgn * p * p) * c;
                const double scale = std::max({std::abs(x * x * d2), std::abs(x * d1),
                                               std::abs((x * x + p * p) * c), 1e-300});
                CHECK(res / scale == doctest::Approx(0.0).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("three-term recurrence consistency") {
    for (int p : {1, 2, 7, 20}) {
        for (double x : {0.5, 2.5, 30.0, 200.0}) {
            const auto lo = bessel_jy(p - 1, x);
            const auto md = bessel_jy(p, x);
            const auto hi = bessel_jy(p + 1, x);
            const double jr = 2.0 * p / x * md.j - lo.j;
            if (std::abs(hi.j) > 1e-3 * (std::abs(2.0 * p / x * md.j) + std::abs(lo.j)))
                CHECK(hi.j == doctest::Approx(jr).epsilon(1e-10));
            const double yr = 2.0 * p / x * md.y - lo.y;
            if (std::abs(hi.y) > 1e-3 * (std::abs(2.0 * p / x * md.y) + std::abs(lo.y)))
                CHECK(hi.y == doctest::Approx(yr).epsilon(1e-10));
            const auto ilo = bessel_ik(p - 1, x);
            const auto imd = bessel_ik(p, x);
            const auto ihi = bessel_ik(p + 1, x);
            // scaled families share the removed factor, so the recurrences
            // hold for the stored values directly
            const double ir = ilo.i - 2.0 * p / x * imd.i;
            if (std::abs(ihi.i) > 1e-3 * (std::abs(ilo.i) + std::abs(2.0 * p / x * imd.i)))
                CHECK(ihi.i == doctest::Approx(ir).epsilon(1e-10));
            const double kr = ilo.k + 2.0 * p / x * imd.k;
            CHECK(ihi.k == doctest::Approx(kr).epsilon(1e-10));
        }
    }
}

TEST_CASE("domain and origin behavior") {
    CHECK(bessel(BesselKind::J, 0, 0.0).value == 1.0);
    CHECK(bessel(BesselKind::J, 3, 0.0).value == 0.0);
    CHECK(bessel(BesselKind::J, 1, 0.0).derivative == doctest::Approx(0.5));
    CHECK(bessel(BesselKind::I, 0, 0.0).value == 1.0);
    CHECK_THROWS_AS(bessel(BesselKind::Y, 0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel(BesselKind::K, 2, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel(BesselKind::J, 0, -1.0), std::domain_error);
    CHECK_THROWS_AS(bessel(BesselKind::J, -1, 1.0), std::domain_error);
}

TEST_CASE("derivatives agree with finite differences") {
    for (int p : {0, 2, 6}) {
        for (double x : {0.7, 5.0, 40.0}) {
            for (auto kind : {BesselKind::J, BesselKind::Y, BesselKind::I, BesselKind::K}) {
                auto f = [&](double t) { return bessel(kind, p, t).value; };
                const double d = oracles::fd_first(f, x, 1e-4 * x);
                CHECK(bessel(kind, p, x).derivative ==
                      doctest::Approx(d).epsilon(1e-8));
            }
        }
    }
}
