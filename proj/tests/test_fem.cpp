#include <doctest.h>

#include <cmath>

#include "fgplate/assembly.hpp"
#include "fgplate/errors.hpp"
#include "fgplate/fem.hpp"
#include "oracles.hpp"

using namespace fgplate;

namespace {
const double kPi = 3.141592653589793238462643;
}

TEST_CASE("mesh construction honors interfaces and minimum density") {
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    const auto mesh = build_radial_mesh(cfg, 1, 24);
    CHECK(mesh.element_count() >= 8);
    // the interface radius must be a corner node
    bool found = false;
    for (size_t i = 0; i < mesh.nodes.size(); i += 2)
        if (std::abs(mesh.nodes[i] - 1.0) < 1e-12) found = true;
    CHECK(found);
    CHECK(mesh.nodes.front() == 0.0);
    CHECK(mesh.nodes.back() == doctest::Approx(2.0));
}

TEST_CASE("free-free annulus carries rigid modes at the bottom") {
    PlateConfig ann;
    ann.material = {70e9, 380e9, 2700.0, 3800.0, 0.3, 1.0, 5.0 / 6.0};
    ann.kind = PlateKind::annular;
    ann.inner_radius = 0.3;
    ann.inner_bc = BoundaryCondition::free_edge;
    ann.outer_bc = BoundaryCondition::free_edge;
    ann.segments = {{0, 1.0, 0.05, 0, 0, 0}};
    ann.finalize();
    const auto f = fem_frequencies(ann, 1, 60, 5);
    double first_elastic = 0.0;
    for (double fi : f)
        if (fi > 1.0) {
            first_elastic = fi;
            break;
        }
    REQUIRE(first_elastic > 0.0);
    CHECK(f[0] <= 1e-3 * first_elastic); // in-plane translation, ~zero
}

TEST_CASE("axisymmetric mass matrix recovers the plate mass") {
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::free_edge);
    const auto mesh = build_radial_mesh(cfg, 0, 40);
    const auto sys = assemble(cfg, 0, mesh);
    // sum of the w-block = 2 pi int I1 r dr (partition of unity)
    const Eigen::MatrixXd M = Eigen::MatrixXd(sys.mass);
    const int iw = 1; // p = 0 local order: u, w, psi_r
    std::vector<int> wdofs;
    for (int node = 0; node < sys.node_count; ++node) {
        const auto& m = sys.dof_map[static_cast<size_t>(node * sys.dof_per_node + iw)];
        if (m.size() == 1 && m[0].second == 1.0) wdofs.push_back(m[0].first);
    }
    double total = 0.0;
    for (int a : wdofs)
        for (int b : wdofs) total += M(a, b);
    double expected = 0.0;
    for (const auto& seg : cfg.segments) {
        const auto si = section_integrals(seg, cfg.material, cfg.h1());
        expected += 2.0 * kPi * cfg.material.rho_c * seg.thickness * si.I1 *
                    0.5 * (seg.outer_radius * seg.outer_radius -
                           seg.inner_radius * seg.inner_radius);
    }
    CHECK(total == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("thin clamped circular plate approaches the classical constant") {
    const auto cfg = oracles::homogeneous_circular(BoundaryCondition::clamped, 1.0, 0.001);
    const auto f = fem_frequencies(cfg, 0, 200, 1);
    const double beta = cfg.beta_from_omega(2.0 * kPi * f[0]);
    CHECK(beta == doctest::Approx(10.2158).epsilon(5e-3));
}

TEST_CASE("mesh refinement converges at second order or better") {
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    const auto f25 = fem_frequencies(cfg, 0, 26, 5);
    const auto f50 = fem_frequencies(cfg, 0, 52, 5);
    const auto f100 = fem_frequencies(cfg, 0, 104, 5);
    for (int i = 0; i < 5; ++i) {
        const double e1 = std::abs(f25[static_cast<size_t>(i)] - f50[static_cast<size_t>(i)]);
        const double e2 = std::abs(f50[static_cast<size_t>(i)] - f100[static_cast<size_t>(i)]);
        if (e2 < 1e-9 * f100[static_cast<size_t>(i)]) continue; // below solver precision
        const double order = std::log2(e1 / e2);
        CHECK(order >= 2.0);
    }
}

TEST_CASE("no shear locking drift across slenderness") {
    for (double h : {0.1, 0.01}) {
        const auto cfg = oracles::homogeneous_circular(BoundaryCondition::clamped, 1.0, h);
        const auto fem = fem_frequencies(cfg, 0, 200, 1);
        PlateAssembler as(cfg, 0);
        SearchOptions opt;
        opt.beta_min = 2.0;
        opt.beta_max = 15.0;
        const auto fs = as.find_frequencies(opt, 1);
        REQUIRE(fs.modes.size() == 1);
        CHECK(std::abs(fem[0] - fs.modes[0].frequency_hz) / fs.modes[0].frequency_hz < 0.02);
    }
}

TEST_CASE("benchmark cross-check within the contract band") {
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    const auto fem = fem_frequencies(cfg, 0, 200, 2);
    CHECK(fem[0] == doctest::Approx(110.629).epsilon(0.01));
    CHECK(fem[1] == doctest::Approx(493.537).epsilon(0.01));
}

TEST_CASE("eigencount matches the solved spectrum") {
    const auto cfg = oracles::benchmark_plate(BoundaryCondition::clamped);
    const auto mesh = build_radial_mesh(cfg, 0, 200);
    const auto sys = assemble(cfg, 0, mesh);
    CHECK(eigencount_below(sys, 2.0 * kPi * 500.0) == 2);  // 110.6, 493.5
    CHECK(eigencount_below(sys, 2.0 * kPi * 120.0) == 1);
    CHECK(eigencount_below(sys, 2.0 * kPi * 50.0) == 0);
}

TEST_CASE("non-positive mass is rejected") {
    FemSystem sys;
    sys.stiffness.resize(2, 2);
    sys.mass.resize(2, 2);
    std::vector<Eigen::Triplet<double>> k = {{0, 0, 1.0}, {1, 1, 2.0}};
    std::vector<Eigen::Triplet<double>> m = {{0, 0, 1.0}, {1, 1, -1.0}};
    sys.stiffness.setFromTriplets(k.begin(), k.end());
    sys.mass.setFromTriplets(m.begin(), m.end());
    CHECK_THROWS_AS(solve_eigens(sys, 1), OracleError);
}

TEST_CASE("diagonal two-by-two system solves exactly") {
    FemSystem sys;
    sys.stiffness.resize(2, 2);
    sys.mass.resize(2, 2);
    std::vector<Eigen::Triplet<double>> k = {{0, 0, 8.0}, {1, 1, 18.0}};
    std::vector<Eigen::Triplet<double>> m = {{0, 0, 2.0}, {1, 1, 3.0}};
    sys.stiffness.setFromTriplets(k.begin(), k.end());
    sys.mass.setFromTriplets(m.begin(), m.end());
    const auto sol = solve_eigens(sys, 2);
    CHECK(sol.eigenvalues[0] == doctest::Approx(4.0));
    CHECK(sol.eigenvalues[1] == doctest::Approx(6.0));
}

TEST_CASE("graded annulus with a free bore matches the reference solver") {
    PlateConfig cfg;
    cfg.material = {70e9, 380e9, 2700.0, 3800.0, 0.3, 1.0, 5.0 / 6.0};
    cfg.kind = PlateKind::annular;
    cfg.inner_radius = 0.3;
    cfg.inner_bc = BoundaryCondition::free_edge;
    cfg.outer_bc = BoundaryCondition::clamped;
    cfg.segments = {{0, 0.7, 0.09, 0, 0, 0}, {0, 1.2, 0.06, 0, 0, 0}};
    cfg.finalize();
    for (int p = 0; p <= 2; ++p) {
        SearchOptions opt;
        const auto fs = PlateAssembler(cfg, p).find_frequencies(opt, 2);
        const auto fem = fem_frequencies(cfg, p, 150, 2);
        REQUIRE(fs.modes.size() == 2);
        CHECK(fs.modes[0].frequency_hz == doctest::Approx(fem[0]).epsilon(5e-3));
        CHECK(fs.modes[1].frequency_hz == doctest::Approx(fem[1]).epsilon(5e-3));
    }
}

TEST_CASE("hard simple support matches the reference solver") {
    PlateConfig cfg = oracles::benchmark_plate(BoundaryCondition::hard_simply_supported);
    for (int p : {0, 1}) {
        SearchOptions opt;
        opt.beta_max = 60.0;
        const auto fs = PlateAssembler(cfg, p).find_frequencies(opt, 2);
        const auto fem = fem_frequencies(cfg, p, 150, 2);
        REQUIRE(fs.modes.size() == 2);
        CHECK(fs.modes[0].frequency_hz == doctest::Approx(fem[0]).epsilon(5e-3));
        CHECK(fs.modes[1].frequency_hz == doctest::Approx(fem[1]).epsilon(5e-3));
    }
    // the hard support pins the tangential rotation, so it sits slightly
    // above the soft-support fundamental 58.084 Hz
    SearchOptions opt;
    opt.beta_max = 10.0;
    const auto fs = PlateAssembler(cfg, 0).find_frequencies(opt, 1);
    REQUIRE(fs.modes.size() == 1);
    CHECK(fs.modes[0].frequency_hz == doctest::Approx(59.631).epsilon(1e-3));
    CHECK(fs.modes[0].frequency_hz > 58.084);
}

TEST_CASE("three-segment annular plate: both solvers produce a matched report") {
    PlateConfig cfg;
    cfg.material = {70e9, 380e9, 2700.0, 3800.0, 0.3, 1.0, 5.0 / 6.0};
    cfg.kind = PlateKind::annular;
    cfg.inner_radius = 0.25;
    cfg.inner_bc = BoundaryCondition::soft_simply_supported;
    cfg.outer_bc = BoundaryCondition::clamped;
    cfg.segments = {{0, 0.5, 0.10, 0, 0, 0}, {0, 0.75, 0.08, 0, 0, 0}, {0, 1.0, 0.06, 0, 0, 0}};
    cfg.finalize();
    CHECK(PlateAssembler(cfg, 1).system_size() == 30); // 10 unknowns per segment
    SearchOptions opt;
    opt.beta_max = 260.0;
    const auto table = mode_table(cfg, 1, 2, opt, 0, 2);
    const auto fem = fem_mode_table(cfg, 1, 2, 120, 0, 2);
    REQUIRE(table.entries.size() >= 3);
    int matched = 0;
    for (const auto& mode : table.entries)
        for (const auto& fm : fem)
            if (fm.m == mode.m && fm.n == mode.n) {
                CHECK(std::abs(fm.frequency_hz - mode.frequency_hz) / mode.frequency_hz < 0.01);
                ++matched;
            }
    CHECK(matched >= 3);
}

TEST_CASE("homogeneous clamped annulus: analytical and fem agree closely") {
    PlateConfig ann;
    ann.material = {70e9, 70e9, 2700.0, 2700.0, 0.3, 0.0, 5.0 / 6.0};
    ann.kind = PlateKind::annular;
    ann.inner_radius = 0.4;
    ann.inner_bc = BoundaryCondition::clamped;
    ann.outer_bc = BoundaryCondition::clamped;
    ann.segments = {{0, 1.0, 0.08, 0, 0, 0}};
    ann.finalize();
    SearchOptions opt;
    opt.beta_max = 300.0;
    const auto table = mode_table(ann, 2, 2, opt, 0, 2);
    const auto fem = fem_mode_table(ann, 2, 2, 200, 0, 2);
    int matched = 0;
    for (const auto& mode : table.entries) {
        for (const auto& fm : fem) {
            if (fm.m == mode.m && fm.n == mode.n) {
                CHECK(std::abs(fm.frequency_hz - mode.frequency_hz) / mode.frequency_hz <
                      0.005);
                ++matched;
            }
        }
    }
    CHECK(matched >= 5);
}
