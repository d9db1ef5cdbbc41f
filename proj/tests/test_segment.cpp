#include <doctest.h>

#include <cmath>

#include "fgplate/errors.hpp"
#include "fgplate/segment.hpp"
#include "oracles.hpp"

using namespace fgplate;

namespace {

SegmentSpectralBasis benchmark_basis(int segment, int p, double beta,
                                     BoundaryCondition bc = BoundaryCondition::clamped) {
    const auto cfg = oracles::benchmark_plate(bc);
    const auto& seg = cfg.segments[static_cast<size_t>(segment)];
    const auto si = section_integrals(seg, cfg.material, cfg.h1());
    return build_segment_basis(seg, cfg.material, cfg, si, p, beta);
}

} // namespace

TEST_CASE("cubic solver: synthetic factored cubic") {
    const auto roots = solve_cubic(1.0, -6.0, 11.0, -6.0, 1.0);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(solve_cubic(1.0, 0.0, 1.0, 1.0, 2.5), UnsupportedRegimeError);
}

TEST_CASE("dispersion coefficients: structure and limits") {
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    const auto si = section_integrals(cfg.segments[1], cfg.material, cfg.h1());

    SUBCASE("homogeneous cross terms vanish: A1 = S2 d^2 K1 K3") {
        auto homo = si;
        homo.K2 = 0.0;
        homo.I2 = 0.0;
        const auto sc = scale_factors(cfg.segments[1], cfg.material, cfg, 1000.0, homo);
        const auto A = dispersion_coefficients(homo, sc, cfg.segments[1].delta);
        const double d2 = cfg.segments[1].delta * cfg.segments[1].delta;
        CHECK(A.A1 == doctest::Approx(sc.S2 * d2 * homo.K1 * homo.K3).epsilon(1e-14));
    }
    SUBCASE("zero frequency degenerates the cubic") {
        const auto sc = scale_factors(cfg.segments[1], cfg.material, cfg, 0.0, si);
        const auto A = dispersion_coefficients(si, sc, cfg.segments[1].delta);
        CHECK(A.A1 > 0.0);
        CHECK(A.A2 == 0.0);
        CHECK(A.A3 == 0.0);
        CHECK(A.A4 == 0.0);
    }
}

TEST_CASE("characteristic roots satisfy the cubic and the quadratic") {
    for (double beta : {3.0, 9.188, 25.0, 70.0}) {
        for (int segment : {0, 1}) {
            const auto basis = benchmark_basis(segment, 1, beta);
            const auto& A = basis.cubic;
            // scaled polynomial residual and Vieta identities
            for (int k = 0; k < 3; ++k) {
                const double x = basis.roots[static_cast<size_t>(k)].x;
                const double res = ((A.A1 * x + A.A2) * x + A.A3) * x + A.A4;
                const double scale = std::max({std::abs(A.A1 * x * x * x),
                                               std::abs(A.A2 * x * x), std::abs(A.A3 * x),
                                               std::abs(A.A4)});
                CHECK(std::abs(res) <= 1e-9 * scale);
            }
            const double x1 = basis.roots[0].x, x2 = basis.roots[1].x, x3 = basis.roots[2].x;
            CHECK(x1 * x2 * x3 == doctest::Approx(-A.A4 / A.A1).epsilon(1e-9));
            CHECK(x1 + x2 + x3 == doctest::Approx(-A.A2 / A.A1).epsilon(1e-9));
            CHECK(x1 <= x2);
            CHECK(x2 <= x3);
            for (int m = 3; m < 5; ++m) {
                const double x = basis.roots[static_cast<size_t>(m)].x;
                const double res = x * x - basis.xi1 * x + basis.xi2;
                const double scale =
                    std::max({x * x, std::abs(basis.xi1 * x), std::abs(basis.xi2)});
                CHECK(std::abs(res) <= 1e-10 * scale);
            }
            CHECK(basis.roots[3].x >= basis.roots[4].x);
            for (const auto& rt : basis.roots) {
                CHECK(rt.chi == doctest::Approx(std::sqrt(std::abs(rt.x))));
                CHECK((rt.x < 0.0) == (rt.branch == RadialBranch::oscillatory));
            }
        }
    }
}

TEST_CASE("modal coefficients: sign structure and per-root consistency") {
    const auto basis = benchmark_basis(1, 2, 9.188);
    CHECK(!basis.decoupled);
    for (int k = 0; k < 10; ++k) {
        const bool flip = k == 3 || k == 4 || k == 8 || k == 9;
        if (flip)
            CHECK(basis.b[static_cast<size_t>(k)] == -basis.a[static_cast<size_t>(k)]);
        else
            CHECK(basis.b[static_cast<size_t>(k)] == basis.a[static_cast<size_t>(k)]);
    }
    CHECK(basis.a[8] == 1.0);
    CHECK(basis.a[9] == 1.0);

    // the deflection-coupled columns must satisfy the third linear relation
    // G6 a_k x + G7 a_{k+5} x + d^2 S2 x - G8 = 0 at each transverse root
    const auto& g = basis.g;
    const double d2 = basis.delta * basis.delta;
    for (int k = 0; k < 3; ++k) {
        const double x = basis.roots[static_cast<size_t>(k)].x;
        const double t1 = g.G6 * basis.a[static_cast<size_t>(k)] * x;
        const double t2 = g.G7 * basis.a[static_cast<size_t>(k + 5)] * x;
        const double t3 = d2 * basis.scales.S2 * x;
        const double t4 = -g.G8;
        const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
        CHECK(std::abs(t1 + t2 + t3 + t4) <= 1e-9 * scale);
    }
}

TEST_CASE("homogeneous material decouples bending from stretching") {
    auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    cfg.material.E_m = cfg.material.E_c;
    cfg.material.rho_m = cfg.material.rho_c;
    const auto si = section_integrals(cfg.segments[1], cfg.material, cfg.h1());
    const auto sc = scale_factors(cfg.segments[1], cfg.material, cfg, 500.0, si);
    const auto g = g_terms(si, sc, cfg.segments[1].delta);
    CHECK(std::abs(g.G2) <= 1e-10 * std::abs(g.G1));
    CHECK(std::abs(g.G3) <= 1e-10 * std::abs(g.G4));
    const auto basis = build_segment_basis(cfg.segments[1], cfg.material, cfg, si, 1,
                                           cfg.beta_from_omega(500.0));
    CHECK(basis.decoupled);
    // every deflection-carrying column has no membrane-potential content
    for (int k = 0; k < 3; ++k) {
        if (basis.w_weight[static_cast<size_t>(k)] != 0.0)
            CHECK(basis.a[static_cast<size_t>(k)] == 0.0);
        else
            CHECK(basis.a[static_cast<size_t>(k + 5)] == 0.0);
    }
}

TEST_CASE("defining identity ties the basis to its root") {
    const auto basis = benchmark_basis(1, 2, 9.188);
    for (int column : {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}) {
        for (double R : {0.55, 0.8, 0.97}) {
            const auto prof = column_profile(basis, column, R);
            const int root = column < 6 ? column % 3 : 3 + (column - 6) / 2;
            const double x = basis.roots[static_cast<size_t>(root)].x;
            const double p2 = 4.0; // p = 2
            const double lap = prof.d2S + prof.dS / R - p2 / (R * R) * prof.S;
            CHECK(lap == doctest::Approx(x * prof.S).epsilon(1e-8));
        }
    }
}

TEST_CASE("field evaluation is linear in the coefficients") {
    const auto basis = benchmark_basis(1, 2, 9.188);
    SegmentCoefficientVector c1, c2;
    for (int i = 0; i < 10; ++i) {
        c1.c[static_cast<size_t>(i)] = 0.1 * (i + 1);
        c2.c[static_cast<size_t>(i)] = 0.3 - 0.05 * i;
    }
    const double alpha = -1.7;
    SegmentCoefficientVector mix;
    for (int i = 0; i < 10; ++i)
        mix.c[static_cast<size_t>(i)] =
            alpha * c1.c[static_cast<size_t>(i)] + c2.c[static_cast<size_t>(i)];
    const double r = 1.43;
    const auto f1 = evaluate_fields(basis, c1, r);
    const auto f2 = evaluate_fields(basis, c2, r);
    const auto fm = evaluate_fields(basis, mix, r);
    CHECK(fm.w == doctest::Approx(alpha * f1.w + f2.w).epsilon(1e-13));
    CHECK(fm.u0 == doctest::Approx(alpha * f1.u0 + f2.u0).epsilon(1e-13));
    CHECK(fm.psi_theta == doctest::Approx(alpha * f1.psi_theta + f2.psi_theta).epsilon(1e-13));
    const auto r1 = evaluate_resultants(basis, c1, r);
    const auto r2 = evaluate_resultants(basis, c2, r);
    const auto rm = evaluate_resultants(basis, mix, r);
    CHECK(rm.N_r == doctest::Approx(alpha * r1.N_r + r2.N_r).epsilon(1e-13));
    CHECK(rm.M_rtheta == doctest::Approx(alpha * r1.M_rtheta + r2.M_rtheta).epsilon(1e-13));
    CHECK(rm.Q_r == doctest::Approx(alpha * r1.Q_r + r2.Q_r).epsilon(1e-13));
}

TEST_CASE("single oscillatory column reproduces the bare radial function") {
    const auto basis = benchmark_basis(0, 2, 9.188);
    REQUIRE(basis.roots[0].branch == RadialBranch::oscillatory);
    SegmentCoefficientVector c;
    c.c[0] = 1.0;
    const double R = 0.37;
    const auto F = evaluate_fields(basis, c, R * basis.plate_radius);
    const double jref = bessel(BesselKind::J, 2, basis.roots[0].chi * R).value;
    CHECK(F.w == doctest::Approx(basis.plate_radius * jref).epsilon(1e-12));
    // Laplacian identity through finite differences of the field values
    auto what = [&](double Rq) {
        return evaluate_fields(basis, c, Rq * basis.plate_radius).w / basis.plate_radius;
    };
    const double h = 2e-4; // balances stencil truncation against roundoff
    const double lap = oracles::fd_second(what, R, h) + oracles::fd_first(what, R, h) / R -
                       4.0 / (R * R) * what(R);
    CHECK(lap == doctest::Approx(basis.roots[0].x * what(R)).epsilon(1e-8));
}

TEST_CASE("zero coefficients give identically zero fields and resultants") {
    const auto basis = benchmark_basis(1, 1, 9.188);
    SegmentCoefficientVector c;
    const auto F = evaluate_fields(basis, c, 1.2);
    const auto N = evaluate_resultants(basis, c, 1.2);
    CHECK(F.w == 0.0);
    CHECK(F.u0 == 0.0);
    CHECK(N.N_r == 0.0);
    CHECK(N.Q_r == 0.0);
}

TEST_CASE("radius outside the segment is rejected") {
    const auto basis = benchmark_basis(1, 1, 9.188);
    SegmentCoefficientVector c;
    c.c[0] = 1.0;
    CHECK_THROWS_AS(evaluate_fields(basis, c, 0.5), std::domain_error);
    CHECK_THROWS_AS(evaluate_fields(basis, c, 2.5), std::domain_error);
}

TEST_CASE("branch transition guard rejects near-zero roots") {
    // at beta -> 0 all transverse roots collapse to zero
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    const auto si = section_integrals(cfg.segments[0], cfg.material, cfg.h1());
    CHECK_THROWS_AS(
        build_segment_basis(cfg.segments[0], cfg.material, cfg, si, 0, 1e-7),
        BranchTransitionError);
}
