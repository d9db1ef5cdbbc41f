#include "fgplate/fem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "fgplate/errors.hpp"
#include "fgplate/parallel.hpp"

namespace fgplate {
namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

struct GaussPoint {
    double xi, weight;
};
constexpr GaussPoint kGauss3[3] = {{-0.774596669241483377035853079956480, 5.0 / 9.0},
                                   {0.0, 8.0 / 9.0},
                                   {0.774596669241483377035853079956480, 5.0 / 9.0}};

// quadratic shape functions on [-1, 1], nodes at -1, 0, +1
void shape(double xi, double N[3], double dN[3]) {
    N[0] = 0.5 * xi * (xi - 1.0);
    N[1] = 1.0 - xi * xi;
    N[2] = 0.5 * xi * (xi + 1.0);
    dN[0] = xi - 0.5;
    dN[1] = -2.0 * xi;
    dN[2] = xi + 0.5;
}

struct SegmentProperties {
    double A, B, D, Ash;      // membrane/coupling/bending stiffness, shear
    double I1, I2, I3;        // dimensional inertias
};

SegmentProperties segment_properties(const PlateConfig& config, const SegmentGeometry& seg,
                                     const SectionIntegrals& si) {
    const auto& mat = config.material;
    const double h = seg.thickness;
    SegmentProperties sp;
    sp.A = mat.E_c * h * si.K1;
    sp.B = mat.E_c * h * h * si.K2;
    sp.D = mat.E_c * h * h * h * si.K3;
    sp.Ash = mat.shear_correction * 0.5 * (1.0 - mat.nu) * mat.E_c * h * si.K1;
    sp.I1 = mat.rho_c * h * si.I1;
    sp.I2 = mat.rho_c * h * h * si.I2;
    sp.I3 = mat.rho_c * h * h * h * si.I3;
    return sp;
}

} // namespace

RadialMesh build_radial_mesh(const PlateConfig& config, int wavenumber, int total_elements) {
    RadialMesh mesh;
    mesh.wavenumber = wavenumber;
    const double r0 = config.kind == PlateKind::annular ? config.inner_radius : 0.0;
    const double total_width = config.r_n() - r0;
    std::vector<int> counts;
    int assigned = 0;
    for (const auto& seg : config.segments) {
        const double width = seg.outer_radius - seg.inner_radius;
        int c = std::max(4, static_cast<int>(std::lround(total_elements * width / total_width)));
        counts.push_back(c);
        assigned += c;
    }
    // keep roughly the requested total
    while (assigned > std::max(total_elements, 4 * config.segment_count())) {
        auto it = std::max_element(counts.begin(), counts.end());
        if (*it <= 4) break;
        --*it;
        --assigned;
    }
    mesh.nodes.push_back(r0);
    for (size_t s = 0; s < config.segments.size(); ++s) {
        const auto& seg = config.segments[s];
        const int c = counts[s];
        const double a = seg.inner_radius, b = seg.outer_radius;
        for (int e = 0; e < c; ++e) {
            const double lo = a + (b - a) * e / c;
            const double hi = a + (b - a) * (e + 1) / c;
            mesh.nodes.push_back(0.5 * (lo + hi));
            mesh.nodes.push_back(hi);
            mesh.element_segment.push_back(static_cast<int>(s));
        }
    }
    return mesh;
}

FemSystem assemble(const PlateConfig& config, int wavenumber, const RadialMesh& mesh) {
    if (mesh.wavenumber != wavenumber)
        throw ConfigError("fem assemble: mesh built for a different wavenumber");
    if (mesh.element_count() < config.segment_count())
        throw ConfigError("fem assemble: mesh does not cover every segment");
    const int p = wavenumber;
    const double pd = p;
    const auto& mat = config.material;
    const double nu = mat.nu;

    FemSystem sys;
    sys.wavenumber = p;
    sys.dof_per_node = p == 0 ? 3 : 5;
    sys.node_count = static_cast<int>(mesh.nodes.size());
    const int nd = sys.dof_per_node;
    // local dof order: p = 0 -> (u, w, psi_r); p >= 1 -> (u, v, w, psi_r, psi_t)
    const int iu = 0;
    const int iv = p == 0 ? -1 : 1;
    const int iw = p == 0 ? 1 : 2;
    const int ipr = p == 0 ? 2 : 3;
    const int ipt = p == 0 ? -1 : 4;

    // Constraint map: essential boundary conditions by elimination, center
    // regularity for circular plates, and the p = 1 center pairing
    // v = -u, psi_theta = -psi_r expressed as slave dofs.
    std::vector<std::vector<std::pair<int, double>>> map(
        static_cast<size_t>(sys.node_count * nd), std::vector<std::pair<int, double>>{});
    std::vector<int> fixed(static_cast<size_t>(sys.node_count * nd), 0);
    std::vector<std::pair<int, std::pair<int, double>>> slaves; // dof -> (master dof, factor)

    auto fix = [&](int node, int ldof) {
        if (ldof >= 0) fixed[static_cast<size_t>(node * nd + ldof)] = 1;
    };
    auto apply_bc = [&](int node, BoundaryCondition bc) {
        switch (bc) {
            case BoundaryCondition::clamped:
                fix(node, iu);
                fix(node, iv);
                fix(node, iw);
                fix(node, ipr);
                fix(node, ipt);
                break;
            case BoundaryCondition::hard_simply_supported:
                fix(node, iu);
                fix(node, iv);
                fix(node, iw);
                fix(node, ipt);
                break;
            case BoundaryCondition::soft_simply_supported:
                fix(node, iw);
                break;
            case BoundaryCondition::free_edge:
                break;
        }
    };

    const int last = sys.node_count - 1;
    if (config.kind == PlateKind::annular) {
        apply_bc(0, *config.inner_bc);
    } else {
        // regularity at r = 0
        if (p == 0) {
            fix(0, iu); // w free, psi_r fixed below
            fix(0, ipr);
        } else if (p == 1) {
            fix(0, iw);
            slaves.push_back({iv, {iu, -1.0}});
            slaves.push_back({ipt, {ipr, -1.0}});
        } else {
            fix(0, iu);
            fix(0, iv);
            fix(0, iw);
            fix(0, ipr);
            fix(0, ipt);
        }
    }
    apply_bc(last, config.outer_bc);

    // number the retained dofs
    int ng = 0;
    for (int node = 0; node < sys.node_count; ++node) {
        for (int ld = 0; ld < nd; ++ld) {
            const size_t gi = static_cast<size_t>(node * nd + ld);
            if (fixed[gi]) continue;
            bool slave = false;
            if (node == 0)
                for (const auto& sl : slaves)
                    if (sl.first == ld) slave = true;
            if (slave) continue;
            map[gi] = {{ng++, 1.0}};
        }
    }
    for (const auto& sl : slaves) {
        const size_t gi = static_cast<size_t>(0 * nd + sl.first);
        const size_t master = static_cast<size_t>(0 * nd + sl.second.first);
        if (!fixed[gi] && !map[master].empty())
            map[gi] = {{map[master][0].first, sl.second.second}};
    }
    sys.dof_map = map;

    std::vector<Eigen::Triplet<double>> kt, mt;
    const double theta_factor = p == 0 ? 2.0 * kPi : kPi;
    std::vector<SectionIntegrals> si;
    for (const auto& seg : config.segments)
        si.push_back(section_integrals(seg, mat, config.h1()));

    const int ndl = 3 * nd; // element dofs
    Eigen::MatrixXd ke(ndl, ndl), me(ndl, ndl);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const int n0 = 2 * e;
        const double ra = mesh.nodes[static_cast<size_t>(n0)];
        const double rb = mesh.nodes[static_cast<size_t>(n0 + 2)];
        const double jac = 0.5 * (rb - ra);
        const auto sp = segment_properties(config, config.segments[static_cast<size_t>(
                                               mesh.element_segment[static_cast<size_t>(e)])],
                                           si[static_cast<size_t>(
                                               mesh.element_segment[static_cast<size_t>(e)])]);
        ke.setZero();
        me.setZero();
        for (const auto& gp : kGauss3) {
            double N[3], dN[3];
            shape(gp.xi, N, dN);
            const double r = ra + (gp.xi + 1.0) * jac;
            const double wgt = gp.weight * jac * r * theta_factor;
            double dNr[3];
            for (int i = 0; i < 3; ++i) dNr[i] = dN[i] / jac;

            // strain rows: [eps_r, eps_t, gamma_rt] for membrane (u, v) and
            // the same pattern for curvature (psi_r, psi_t); shear
            // [gamma_rz, gamma_tz].
            for (int a = 0; a < 3; ++a) {
                for (int bvi = 0; bvi < 3; ++bvi) {
                    auto idx = [&](int node, int ld) { return node * nd + ld; };
                    // membrane/bending generalized strains of shape a vs b
                    // eps_r(u_a) = dNr, eps_t(u_a) = N/r, eps_t(v_b) = p N/r,
                    // gamma_rt(u) = -p N/r, gamma_rt(v) = dNr - N/r
                    const double er_a = dNr[a], er_b = dNr[bvi];
                    const double et_ua = N[a] / r, et_ub = N[bvi] / r;
                    const double et_va = pd * N[a] / r, et_vb = pd * N[bvi] / r;
                    const double grt_ua = -pd * N[a] / r, grt_ub = -pd * N[bvi] / r;
                    const double grt_va = dNr[a] - N[a] / r, grt_vb = dNr[bvi] - N[bvi] / r;
                    const double sh = 0.5 * (1.0 - nu);

                    auto cmat = [&](double e1r, double e1t, double g1, double e2r, double e2t,
                                    double g2) {
                        // plane-stress pattern: e1' C e2 with C = [[1,nu,0],[nu,1,0],[0,0,sh]]
                        return e1r * e2r + e1t * e2t + nu * (e1r * e2t + e1t * e2r) +
                               sh * g1 * g2;
                    };

                    // u-u, u-v, v-v membrane blocks (A), psi blocks (D),
                    // u-psi coupling (B)
                    const double uu = cmat(er_a, et_ua, grt_ua, er_b, et_ub, grt_ub);
                    ke(idx(a, iu), idx(bvi, iu)) += wgt * sp.A * uu;
                    ke(idx(a, ipr), idx(bvi, ipr)) += wgt * sp.D * uu;
                    ke(idx(a, iu), idx(bvi, ipr)) += wgt * sp.B * uu;
                    ke(idx(a, ipr), idx(bvi, iu)) += wgt * sp.B * uu;
                    if (p != 0) {
                        const double uv = cmat(er_a, et_ua, grt_ua, 0.0, et_vb, grt_vb);
                        const double vu = cmat(0.0, et_va, grt_va, er_b, et_ub, grt_ub);
                        const double vv = cmat(0.0, et_va, grt_va, 0.0, et_vb, grt_vb);
                        ke(idx(a, iu), idx(bvi, iv)) += wgt * sp.A * uv;
                        ke(idx(a, iv), idx(bvi, iu)) += wgt * sp.A * vu;
                        ke(idx(a, iv), idx(bvi, iv)) += wgt * sp.A * vv;
                        ke(idx(a, ipr), idx(bvi, ipt)) += wgt * sp.D * uv;
                        ke(idx(a, ipt), idx(bvi, ipr)) += wgt * sp.D * vu;
                        ke(idx(a, ipt), idx(bvi, ipt)) += wgt * sp.D * vv;
                        ke(idx(a, iu), idx(bvi, ipt)) += wgt * sp.B * uv;
                        ke(idx(a, ipt), idx(bvi, iu)) += wgt * sp.B * vu;
                        ke(idx(a, iv), idx(bvi, ipr)) += wgt * sp.B * vu;
                        ke(idx(a, ipr), idx(bvi, iv)) += wgt * sp.B * uv;
                        ke(idx(a, iv), idx(bvi, ipt)) += wgt * sp.B * vv;
                        ke(idx(a, ipt), idx(bvi, iv)) += wgt * sp.B * vv;
                    }

                    // transverse shear: gamma_rz = psi_r + w', gamma_tz = psi_t - p w / r
                    const double grz_wa = dNr[a], grz_wb = dNr[bvi];
                    const double grz_pa = N[a], grz_pb = N[bvi];
                    ke(idx(a, iw), idx(bvi, iw)) += wgt * sp.Ash * grz_wa * grz_wb;
                    ke(idx(a, iw), idx(bvi, ipr)) += wgt * sp.Ash * grz_wa * grz_pb;
                    ke(idx(a, ipr), idx(bvi, iw)) += wgt * sp.Ash * grz_pa * grz_wb;
                    ke(idx(a, ipr), idx(bvi, ipr)) += wgt * sp.Ash * grz_pa * grz_pb;
                    if (p != 0) {
                        const double gtz_wa = -pd * N[a] / r, gtz_wb = -pd * N[bvi] / r;
                        const double gtz_pa = N[a], gtz_pb = N[bvi];
                        ke(idx(a, iw), idx(bvi, iw)) += wgt * sp.Ash * gtz_wa * gtz_wb;
                        ke(idx(a, iw), idx(bvi, ipt)) += wgt * sp.Ash * gtz_wa * gtz_pb;
                        ke(idx(a, ipt), idx(bvi, iw)) += wgt * sp.Ash * gtz_pa * gtz_wb;
                        ke(idx(a, ipt), idx(bvi, ipt)) += wgt * sp.Ash * gtz_pa * gtz_pb;
                    }

                    // consistent mass
                    const double nn = N[a] * N[bvi];
                    me(idx(a, iu), idx(bvi, iu)) += wgt * sp.I1 * nn;
                    me(idx(a, iw), idx(bvi, iw)) += wgt * sp.I1 * nn;
                    me(idx(a, ipr), idx(bvi, ipr)) += wgt * sp.I3 * nn;
                    me(idx(a, iu), idx(bvi, ipr)) += wgt * sp.I2 * nn;
                    me(idx(a, ipr), idx(bvi, iu)) += wgt * sp.I2 * nn;
                    if (p != 0) {
                        me(idx(a, iv), idx(bvi, iv)) += wgt * sp.I1 * nn;
                        me(idx(a, ipt), idx(bvi, ipt)) += wgt * sp.I3 * nn;
                        me(idx(a, iv), idx(bvi, ipt)) += wgt * sp.I2 * nn;
                        me(idx(a, ipt), idx(bvi, iv)) += wgt * sp.I2 * nn;
                    }
                }
            }
        }
        // scatter through the constraint map
        for (int a = 0; a < 3; ++a) {
            for (int la = 0; la < nd; ++la) {
                const auto& ma = map[static_cast<size_t>((n0 + a) * nd + la)];
                if (ma.empty()) continue;
                for (int bvi = 0; bvi < 3; ++bvi) {
                    for (int lb = 0; lb < nd; ++lb) {
                        const auto& mb = map[static_cast<size_t>((n0 + bvi) * nd + lb)];
                        if (mb.empty()) continue;
                        const double kv = ke(a * nd + la, bvi * nd + lb);
                        const double mv = me(a * nd + la, bvi * nd + lb);
                        for (const auto& [ga, fa] : ma) {
                            for (const auto& [gb, fb] : mb) {
                                if (kv != 0.0) kt.emplace_back(ga, gb, fa * fb * kv);
                                if (mv != 0.0) mt.emplace_back(ga, gb, fa * fb * mv);
                            }
                        }
                    }
                }
            }
        }
    }

    int ng_total = 0;
    for (const auto& ma : map)
        for (const auto& [g, f] : ma) ng_total = std::max(ng_total, g + 1);
    sys.stiffness.resize(ng_total, ng_total);
    sys.mass.resize(ng_total, ng_total);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    // shift at a first-bending frequency scale keeps K - sigma M well
    // conditioned even with rigid-body modes present
    const double omega_scale = config.omega_from_beta(5.0);
    sys.shift_suggestion = -omega_scale * omega_scale;
    return sys;
}

namespace {

// LDLT inertia of K - sigma M; retries with a nudged shift on breakdown.
int negative_inertia(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
                     double sigma) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        Eigen::SparseMatrix<double> A = K - sigma * M;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
        if (ldlt.info() == Eigen::Success) {
            const auto d = ldlt.vectorD();
            int neg = 0;
            for (Eigen::Index i = 0; i < d.size(); ++i)
                if (d(i) < 0.0) ++neg;
            return neg;
        }
        sigma *= 1.0 + 1e-8;
    }
    throw OracleError("inertia count: LDLT factorization failed");
}

} // namespace

int eigencount_below(const FemSystem& system, double omega) {
    return negative_inertia(system.stiffness, system.mass, omega * omega);
}

EigenSolution solve_eigens(const FemSystem& system, int count) {
    const int n = static_cast<int>(system.stiffness.rows());
    if (count < 1) throw OracleError("solve_eigens: count must be positive");
    count = std::min(count, n);
    EigenSolution out;

    // mass must be positive definite
    {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mldlt(system.mass);
        if (mldlt.info() != Eigen::Success)
            throw OracleError("solve_eigens: mass matrix factorization failed");
        const auto d = mldlt.vectorD();
        for (Eigen::Index i = 0; i < d.size(); ++i)
            if (!(d(i) > 0.0)) throw OracleError("solve_eigens: mass matrix is not SPD");
    }

    const double kscale = system.stiffness.diagonal().cwiseAbs().mean();
    const double sigma = system.shift_suggestion < 0.0
                             ? system.shift_suggestion
                             : -1e-8 * kscale / system.mass.diagonal().cwiseAbs().mean();

    auto solve_dense = [&]() {
        Eigen::MatrixXd K = Eigen::MatrixXd(system.stiffness);
        Eigen::MatrixXd M = Eigen::MatrixXd(system.mass);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
        if (es.info() != Eigen::Success) throw OracleError("solve_eigens: dense solve failed");
        out.eigenvalues.clear();
        out.vectors.resize(n, count);
        for (int i = 0; i < count; ++i) {
            out.eigenvalues.push_back(std::max(es.eigenvalues()(i), 0.0));
            out.vectors.col(i) = es.eigenvectors().col(i);
        }
        out.iterations = -1; // direct path
    };

    if (n <= 240) {
        solve_dense();
    } else {
        // shift-invert subspace iteration with Rayleigh-Ritz projection
        const int q = std::min(n, 2 * count + 8);
        Eigen::SparseMatrix<double> A = system.stiffness - sigma * system.mass;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
        if (solver.info() != Eigen::Success)
            throw OracleError("solve_eigens: shifted factorization failed");

        std::mt19937 rng(12345);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::MatrixXd X(n, q);
        for (int j = 0; j < q; ++j)
            for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);

        auto residuals_ok = [&](const Eigen::MatrixXd& vecs, const Eigen::VectorXd& lam) {
            for (int i = 0; i < count; ++i) {
                const Eigen::VectorXd phi = vecs.col(i);
                const Eigen::VectorXd kphi = system.stiffness * phi;
                const Eigen::VectorXd res = kphi - lam(i) * (system.mass * phi);
                const double floor = 1e-10 * kscale * phi.norm();
                if (res.norm() > 1e-8 * kphi.norm() + floor) return false;
            }
            return true;
        };

        Eigen::VectorXd prev = Eigen::VectorXd::Constant(count, -1.0);
        bool converged = false;
        for (int iter = 1; iter <= 300; ++iter) {
            const Eigen::MatrixXd Y = solver.solve(system.mass * X);
            const Eigen::MatrixXd Kp = Y.transpose() * (system.stiffness * Y);
            const Eigen::MatrixXd Mp = Y.transpose() * (system.mass * Y);
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(Kp, Mp);
            if (small.info() != Eigen::Success)
                throw OracleError("solve_eigens: projected solve failed");
            X = Y * small.eigenvectors();
            const Eigen::VectorXd lam = small.eigenvalues().head(count);
            out.iterations = iter;
            // rigid-body eigenvalues hover at roundoff scale, so settle
            // relative to the requested part of the spectrum
            const double spec_scale = lam.cwiseAbs().maxCoeff();
            const bool settled =
                ((lam - prev).cwiseAbs().array() <=
                 1e-11 * (lam.cwiseAbs().array() + spec_scale))
                    .all();
            prev = lam;
            if (settled && residuals_ok(X, lam)) {
                converged = true;
                for (int i = 0; i < count; ++i) out.eigenvalues.push_back(std::max(lam(i), 0.0));
                out.vectors = X.leftCols(count);
                break;
            }
        }
        // stiff thin-section systems can stall the iteration at roundoff;
        // the direct reduction still resolves them
        if (!converged) solve_dense();
    }

    // residual acceptance (rigid-body modes pass through the absolute floor)
    for (int i = 0; i < count; ++i) {
        const Eigen::VectorXd phi = out.vectors.col(i);
        const Eigen::VectorXd kphi = system.stiffness * phi;
        const Eigen::VectorXd res =
            kphi - out.eigenvalues[static_cast<size_t>(i)] * (system.mass * phi);
        const double floor = 1e-9 * kscale * phi.norm();
        if (res.norm() > 1e-8 * kphi.norm() + floor)
            throw OracleError("solve_eigens: residual above tolerance");
    }
    for (double ev : out.eigenvalues)
        out.frequencies_hz.push_back(std::sqrt(std::max(ev, 0.0)) / (2.0 * kPi));
    return out;
}

std::vector<double> fem_frequencies(const PlateConfig& config, int wavenumber, int elements,
                                    int count) {
    const RadialMesh mesh = build_radial_mesh(config, wavenumber, elements);
    const FemSystem sys = assemble(config, wavenumber, mesh);
    return solve_eigens(sys, count).frequencies_hz;
}

Eigen::MatrixXd expand_mode(const FemSystem& system, const Eigen::VectorXd& reduced) {
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(system.node_count, system.dof_per_node);
    for (int node = 0; node < system.node_count; ++node) {
        for (int ld = 0; ld < system.dof_per_node; ++ld) {
            const auto& m = system.dof_map[static_cast<size_t>(node * system.dof_per_node + ld)];
            double v = 0.0;
            for (const auto& [g, f] : m) v += f * reduced(g);
            full(node, ld) = v;
        }
    }
    return full;
}

std::vector<FemMode> fem_mode_table(const PlateConfig& config, int p_max, int modes_per_p,
                                    int elements, int total_modes, int threads,
                                    double rigid_cutoff_hz) {
    std::vector<std::vector<double>> freqs(static_cast<size_t>(p_max) + 1);
    parallel_for(
        p_max + 1,
        [&](int p) {
            freqs[static_cast<size_t>(p)] =
                fem_frequencies(config, p, elements, modes_per_p + 4);
        },
        threads);
    std::vector<FemMode> modes;
    for (int p = 0; p <= p_max; ++p) {
        int ordinal = 1;
        for (double f : freqs[static_cast<size_t>(p)]) {
            if (f < rigid_cutoff_hz) continue; // rigid-body mode
            if (ordinal > modes_per_p) break;
            modes.push_back({p, ordinal++, f});
        }
    }
    std::sort(modes.begin(), modes.end(), [](const FemMode& a, const FemMode& b) {
        if (a.frequency_hz != b.frequency_hz) return a.frequency_hz < b.frequency_hz;
        if (a.m != b.m) return a.m < b.m;
        return a.n < b.n;
    });
    if (total_modes > 0 && static_cast<int>(modes.size()) > total_modes)
        modes.resize(static_cast<size_t>(total_modes));
    return modes;
}

} // namespace fgplate
