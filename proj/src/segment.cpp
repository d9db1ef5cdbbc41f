#include "fgplate/segment.hpp"

#include <algorithm>
#include <cmath>

#include "fgplate/errors.hpp"

namespace fgplate {
namespace {

constexpr double kBranchGuard = 1e-8; ///< |x_k| below this is a branch transition

// value * exp(shift) without overflowing the intermediate exponential.
double rescale(double value, double shift) {
    if (value == 0.0) return 0.0;
    const double lg = std::log(std::abs(value)) + shift;
    if (lg < -745.0) return 0.0;
    const double mag = std::exp(lg);
    return value > 0.0 ? mag : -mag;
}

struct ProfilePair {
    ColumnProfile first;  // J or I
    ColumnProfile second; // Y or K
};

// Both radial profiles of one root at dimensionless radius R. Evanescent
// profiles are premultiplied by exp(-chi R_outer) (first kind) and
// exp(+chi R_inner) (second kind) so entries stay representable; the
// rescaling is constant per column and drops out of the eigenproblem.
ProfilePair root_profiles(const SegmentSpectralBasis& basis, int root, double R) {
    const auto& rt = basis.roots[static_cast<size_t>(root)];
    const int p = basis.wavenumber;
    const double arg = rt.chi * R;
    ProfilePair out;
    if (arg == 0.0) {
        // center of a circular plate; second-kind profiles are excluded there
        out.first.S = (p == 0) ? 1.0 : 0.0;
        out.first.dS = (p == 1) ? 0.5 * rt.chi : 0.0;
        if (p == 0)
            out.first.d2S = 0.5 * rt.chi * rt.chi *
                            (rt.branch == RadialBranch::oscillatory ? -1.0 : 1.0);
        else if (p == 2)
            out.first.d2S = 0.25 * rt.chi * rt.chi;
        if (rt.branch == RadialBranch::evanescent)
            out.first = {rescale(out.first.S, -rt.chi * basis.R_outer),
                         rescale(out.first.dS, -rt.chi * basis.R_outer),
                         rescale(out.first.d2S, -rt.chi * basis.R_outer)};
        return out;
    }
    if (rt.branch == RadialBranch::oscillatory) {
        const auto jy = bessel_jy(p, arg);
        out.first.S = jy.j;
        out.first.dS = rt.chi * jy.jp;
        out.second.S = jy.y;
        out.second.dS = rt.chi * jy.yp;
    } else {
        const auto ik = bessel_ik(p, arg);
        const double ls_i = ik.scaled ? arg : 0.0;  // true I = i * exp(ls_i)
        const double ls_k = ik.scaled ? -arg : 0.0; // true K = k * exp(ls_k)
        const double mi = ls_i - rt.chi * basis.R_outer;
        const double mk = ls_k + rt.chi * basis.R_inner;
        out.first.S = rescale(ik.i, mi);
        out.first.dS = rt.chi * rescale(ik.ip, mi);
        out.second.S = rescale(ik.k, mk);
        out.second.dS = rt.chi * rescale(ik.kp, mk);
    }
    // Defining identity of the basis: S'' = (x + p^2/R^2) S - S'/R.
    const double pp = static_cast<double>(p) * p;
    out.first.d2S = (rt.x + pp / (R * R)) * out.first.S - out.first.dS / R;
    out.second.d2S = (rt.x + pp / (R * R)) * out.second.S - out.second.dS / R;
    return out;
}

struct ColumnRef {
    int root;     // 0..4
    bool second;  // second-kind function
};

constexpr ColumnRef kColumns[10] = {{0, false}, {1, false}, {2, false}, {0, true},
                                    {1, true},  {2, true},  {3, false}, {3, true},
                                    {4, false}, {4, true}};

} // namespace

DispersionCoefficients dispersion_coefficients(const SectionIntegrals& I,
                                               const ScaleFactors& sc, double delta) {
    const double s = sc.S1 * sc.lambda * sc.lambda;
    const double dK = I.detK();
    const double dI = I.detI();
    const double mix = I.K1 * I.I3 + I.K3 * I.I1 - 2.0 * I.K2 * I.I2;
    const double d2 = delta * delta;
    DispersionCoefficients out;
    out.A1 = sc.S2 * d2 * dK;
    out.A2 = s * (I.I1 * dK + sc.S2 * d2 * mix);
    out.A3 = s * (s * (I.I1 * mix + sc.S2 * d2 * dI) - sc.S2 * I.K1 * I.I1);
    out.A4 = s * s * I.I1 * (s * dI - sc.S2 * I.I1);
    return out;
}

GTerms g_terms(const SectionIntegrals& I, const ScaleFactors& sc, double delta) {
    const double s = sc.S1 * sc.lambda * sc.lambda;
    const double denom = I.K2 * I.K2 - I.K1 * I.K3; // negative of detK
    GTerms g;
    g.G1 = s * (I.K3 * I.I1 - I.K2 * I.I2) / denom;
    g.G2 = s * (I.K1 * I.I2 - I.K2 * I.I1) / denom;
    g.G3 = (s * (I.K3 * I.I2 - I.K2 * I.I3) + sc.S2 * I.K2) / denom;
    g.G4 = (s * (I.K1 * I.I3 - I.K2 * I.I2) - sc.S2 * I.K1) / denom;
    g.G5 = sc.S2;
    g.G6 = sc.S2 * delta * delta * I.K2 / denom;
    g.G7 = -sc.S2 * delta * delta * I.K1 / denom;
    g.G8 = -s * I.I1;
    return g;
}

std::array<double, 3> solve_cubic(double c3, double c2, double c1, double c0, double beta) {
    if (c3 == 0.0) throw std::domain_error("solve_cubic: leading coefficient is zero");
    const double p = c2 / c3, q = c1 / c3, r = c0 / c3;
    // depressed form t^3 + at + b with x = t - p/3
    const double a = q - p * p / 3.0;
    const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    std::array<double, 3> roots{};
    const double ascale = std::abs(a) + std::cbrt(std::abs(b)) * std::cbrt(std::abs(b));
    if (a > 1e-14 * ascale) {
        throw UnsupportedRegimeError(
            "dispersion cubic has a complex-conjugate root pair (a > 0)", beta);
    }
    if (a >= -1e-300) {
        // triple-root neighborhood
        const double t = std::cbrt(-b);
        roots = {t, t, t};
    } else {
        const double m = 2.0 * std::sqrt(-a / 3.0);
        double cosphi = 3.0 * b / (a * m);
        if (cosphi > 1.0) {
            if (cosphi > 1.0 + 1e-9)
                throw UnsupportedRegimeError(
                    "dispersion cubic has a complex-conjugate root pair", beta);
            cosphi = 1.0;
        } else if (cosphi < -1.0) {
            if (cosphi < -1.0 - 1e-9)
                throw UnsupportedRegimeError(
                    "dispersion cubic has a complex-conjugate root pair", beta);
            cosphi = -1.0;
        }
        const double phi = std::acos(cosphi);
        for (int k = 0; k < 3; ++k)
            roots[static_cast<size_t>(k)] =
                m * std::cos((phi - 2.0 * 3.141592653589793 * k) / 3.0);
    }
    for (auto& t : roots) {
        double x = t - p / 3.0;
        for (int it = 0; it < 3; ++it) { // Newton polish on the original cubic
            const double f = ((c3 * x + c2) * x + c1) * x + c0;
            const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
            if (df == 0.0) break;
            const double step = f / df;
            if (!std::isfinite(step)) break;
            x -= step;
            if (std::abs(step) <= 1e-15 * std::abs(x)) break;
        }
        t = x;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

void characteristic_roots(const DispersionCoefficients& coeffs, const GTerms& g, double nu,
                          double beta, SegmentSpectralBasis& basis) {
    basis.cubic = coeffs;
    basis.g = g;
    const auto transverse = solve_cubic(coeffs.A1, coeffs.A2, coeffs.A3, coeffs.A4, beta);

    basis.xi1 = 2.0 * (g.G1 + g.G4) / (1.0 - nu);
    basis.xi2 = 4.0 * (g.G1 * g.G4 - g.G2 * g.G3) / ((1.0 - nu) * (1.0 - nu));
    const double disc = basis.xi1 * basis.xi1 - 4.0 * basis.xi2;
    if (disc < 0.0) {
        if (disc < -1e-10 * std::max(basis.xi1 * basis.xi1, std::abs(4.0 * basis.xi2)))
            throw UnsupportedRegimeError("in-plane quadratic has complex roots", beta);
    }
    const double sq = std::sqrt(std::max(disc, 0.0));
    double x4, x5;
    if (basis.xi1 >= 0.0) {
        x4 = 0.5 * (basis.xi1 + sq);
        x5 = (x4 != 0.0 && basis.xi2 != 0.0) ? basis.xi2 / x4 : 0.5 * (basis.xi1 - sq);
    } else {
        x5 = 0.5 * (basis.xi1 - sq);
        x4 = (x5 != 0.0 && basis.xi2 != 0.0) ? basis.xi2 / x5 : 0.5 * (basis.xi1 + sq);
    }

    const double xs[5] = {transverse[0], transverse[1], transverse[2], x4, x5};
    for (int k = 0; k < 5; ++k) {
        if (std::abs(xs[k]) < kBranchGuard)
            throw BranchTransitionError("characteristic root inside the branch guard band",
                                        beta, k + 1);
        auto& rt = basis.roots[static_cast<size_t>(k)];
        rt.x = xs[k];
        rt.chi = std::sqrt(std::abs(xs[k]));
        rt.branch = xs[k] < 0.0 ? RadialBranch::oscillatory : RadialBranch::evanescent;
    }
}

void modal_coefficients(const GTerms& g, double nu, double beta, SegmentSpectralBasis& basis) {
    const double gref = std::max({std::abs(g.G1), std::abs(g.G4), 1e-300});
    basis.decoupled = std::abs(g.G2) <= 1e-9 * gref && std::abs(g.G3) <= 1e-9 * gref;
    basis.a.fill(0.0);
    basis.w_weight = {1.0, 1.0, 1.0};

    if (!basis.decoupled) {
        for (int k = 0; k < 3; ++k) {
            const double x = basis.roots[static_cast<size_t>(k)].x;
            const double qk = x * x - (g.G1 + g.G4) * x + g.G1 * g.G4 - g.G2 * g.G3;
            const double qscale =
                std::abs(x * x) + std::abs((g.G1 + g.G4) * x) + std::abs(g.G1 * g.G4 - g.G2 * g.G3);
            if (std::abs(qk) <= 1e-12 * qscale)
                throw DegenerateFrequencyError(
                    "transverse root collides with an in-plane root", beta);
            basis.a[static_cast<size_t>(k)] = g.G2 * g.G5 / qk;
            basis.a[static_cast<size_t>(k + 5)] = (x - g.G1) * g.G5 / qk;
        }
        for (int m = 3; m < 5; ++m) {
            const double x = basis.roots[static_cast<size_t>(m)].x;
            const double dm = 0.5 * (1.0 - nu) * x - g.G1;
            const double dscale = std::abs(0.5 * (1.0 - nu) * x) + std::abs(g.G1);
            if (std::abs(dm) <= 1e-12 * dscale)
                throw DegenerateFrequencyError("in-plane coefficient denominator vanished", beta);
            basis.a[static_cast<size_t>(m)] = g.G2 / dm;
            basis.a[static_cast<size_t>(m + 5)] = 1.0;
        }
    } else {
        // Homogeneous material: membrane and bending motion split exactly.
        // The transverse root nearest G1 is the pure in-plane dilatation
        // wave (no deflection content); the in-plane root nearest
        // 2 G1/(1-nu) is the pure membrane shear wave.
        int dil = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(basis.roots[static_cast<size_t>(k)].x - g.G1) <
                std::abs(basis.roots[static_cast<size_t>(dil)].x - g.G1))
                dil = k;
        for (int k = 0; k < 3; ++k) {
            if (k == dil) {
                basis.w_weight[static_cast<size_t>(k)] = 0.0;
                basis.a[static_cast<size_t>(k)] = 1.0;
                basis.a[static_cast<size_t>(k + 5)] = 0.0;
            } else {
                const double x = basis.roots[static_cast<size_t>(k)].x;
                const double dm = x - g.G4;
                if (std::abs(dm) <= 1e-12 * (std::abs(x) + std::abs(g.G4)))
                    throw DegenerateFrequencyError(
                        "transverse root collides with an in-plane root", beta);
                basis.a[static_cast<size_t>(k)] = 0.0;
                basis.a[static_cast<size_t>(k + 5)] = g.G5 / dm;
            }
        }
        const double shear_x = 2.0 * g.G1 / (1.0 - nu);
        const int shear = std::abs(basis.roots[3].x - shear_x) <=
                                  std::abs(basis.roots[4].x - shear_x)
                              ? 3
                              : 4;
        for (int m = 3; m < 5; ++m) {
            basis.a[static_cast<size_t>(m)] = (m == shear) ? 1.0 : 0.0;
            basis.a[static_cast<size_t>(m + 5)] = (m == shear) ? 0.0 : 1.0;
        }
    }
    for (int k = 0; k < 10; ++k) {
        const bool flip = k == 3 || k == 4 || k == 8 || k == 9;
        basis.b[static_cast<size_t>(k)] =
            flip ? -basis.a[static_cast<size_t>(k)] : basis.a[static_cast<size_t>(k)];
    }
}

SegmentSpectralBasis build_segment_basis(const SegmentGeometry& segment, const MaterialPair& mat,
                                         const PlateConfig& plate,
                                         const SectionIntegrals& integrals, int wavenumber,
                                         double beta) {
    SegmentSpectralBasis basis;
    basis.wavenumber = wavenumber;
    basis.beta = beta;
    basis.integrals = integrals;
    basis.scales = scale_factors(segment, mat, plate, plate.omega_from_beta(beta), integrals);
    basis.delta = segment.delta;
    basis.thickness = segment.thickness;
    basis.plate_radius = plate.r_n();
    basis.R_inner = segment.inner_radius / plate.r_n();
    basis.R_outer = segment.outer_radius / plate.r_n();
    basis.E_c = mat.E_c;
    basis.nu = mat.nu;
    basis.kappa_sq = mat.shear_correction;

    const auto coeffs = dispersion_coefficients(integrals, basis.scales, segment.delta);
    const auto g = g_terms(integrals, basis.scales, segment.delta);
    characteristic_roots(coeffs, g, mat.nu, beta, basis);
    modal_coefficients(g, mat.nu, beta, basis);
    return basis;
}

ColumnProfile column_profile(const SegmentSpectralBasis& basis, int column, double R) {
    const auto& ref = kColumns[static_cast<size_t>(column)];
    const auto pair = root_profiles(basis, ref.root, R);
    return ref.second ? pair.second : pair.first;
}

std::array<ColumnEval, 10> evaluate_columns(const SegmentSpectralBasis& basis, double r) {
    const double rn = basis.plate_radius;
    const double R = r / rn;
    if (R < basis.R_inner - 1e-9 || R > basis.R_outer + 1e-9)
        throw std::domain_error("evaluate_columns: radius outside the segment");
    const int p = basis.wavenumber;
    const double pd = static_cast<double>(p);
    const double K1 = basis.integrals.K1, K2 = basis.integrals.K2, K3 = basis.integrals.K3;
    const double detK = basis.integrals.detK();
    const double h = basis.thickness;
    const double A = basis.E_c * h * K1;
    const double B = basis.E_c * h * h * K2;
    const double D = basis.E_c * h * h * h * K3;
    const double Ssh = basis.kappa_sq * 0.5 * (1.0 - basis.nu) * basis.E_c * h * K1;
    const double nu = basis.nu;

    std::array<ColumnEval, 10> out{};
    ProfilePair pairs[5];
    for (int k = 0; k < 5; ++k) {
        if (p == 0 && k >= 3) continue; // in-plane family is torsional at p = 0
        pairs[k] = root_profiles(basis, k, R);
    }

    for (int j = 0; j < 10; ++j) {
        const auto& ref = kColumns[static_cast<size_t>(j)];
        if (p == 0 && ref.root >= 3) continue; // stays zero
        const auto& P = ref.second ? pairs[ref.root].second : pairs[ref.root].first;
        if (ref.second && R == 0.0) continue;  // singular kinds are excluded at the center

        double wv = 0.0, dwv = 0.0;
        double f1, f2, f3, f4, df1, df2, df3, df4;
        if (ref.root < 3) {
            const double ak = basis.a[static_cast<size_t>(ref.root)];
            const double ak5 = basis.a[static_cast<size_t>(ref.root + 5)];
            const double ww = basis.w_weight[static_cast<size_t>(ref.root)];
            wv = ww * P.S;
            dwv = ww * P.dS;
            f1 = ak * P.dS;
            df1 = ak * P.d2S;
            f3 = ak5 * P.dS;
            df3 = ak5 * P.d2S;
            const double sOverR = R > 0.0 ? P.S / R : 0.0;
            const double dOverR = R > 0.0 ? (P.dS / R - P.S / (R * R)) : 0.0;
            f2 = -pd * ak * sOverR;
            df2 = -pd * ak * dOverR;
            f4 = -pd * ak5 * sOverR;
            df4 = -pd * ak5 * dOverR;
        } else {
            const double am = basis.a[static_cast<size_t>(ref.root)];
            const double am5 = basis.a[static_cast<size_t>(ref.root + 5)];
            const double sOverR = R > 0.0 ? P.S / R : 0.0;
            const double dOverR = R > 0.0 ? (P.dS / R - P.S / (R * R)) : 0.0;
            f1 = pd * am * sOverR;
            df1 = pd * am * dOverR;
            f3 = pd * am5 * sOverR;
            df3 = pd * am5 * dOverR;
            f2 = -am * P.dS;
            df2 = -am * P.d2S;
            f4 = -am5 * P.dS;
            df4 = -am5 * P.d2S;
        }

        // invert the auxiliary definitions for the displacement profiles
        const double u0 = (K3 * f1 - K2 * f3) / detK;
        const double du0 = (K3 * df1 - K2 * df3) / detK;
        const double psir = (K1 * f3 - K2 * f1) / detK;
        const double dpsir = (K1 * df3 - K2 * df1) / detK;
        const double v0 = (K3 * f2 - K2 * f4) / detK;
        const double dv0 = (K3 * df2 - K2 * df4) / detK;
        const double psit = (K1 * f4 - K2 * f2) / detK;
        const double dpsit = (K1 * df4 - K2 * df2) / detK;

        FieldState& F = out[static_cast<size_t>(j)].field;
        F.w = rn * wv;
        F.dw = dwv; // (r_n w)' d/dr = dw/dR
        F.u0 = h * u0;
        F.du0 = h * du0 / rn;
        F.v0 = p == 0 ? 0.0 : h * v0;
        F.dv0 = p == 0 ? 0.0 : h * dv0 / rn;
        F.psi_r = psir;
        F.dpsi_r = dpsir / rn;
        F.psi_theta = p == 0 ? 0.0 : psit;
        F.dpsi_theta = p == 0 ? 0.0 : dpsit / rn;

        ResultantState& N = out[static_cast<size_t>(j)].resultant;
        const double rdim = R * rn;
        if (rdim > 0.0) {
            const double memb_r = F.du0 + nu * (F.u0 + pd * F.v0) / rdim;
            const double memb_t = nu * F.du0 + (F.u0 + pd * F.v0) / rdim;
            const double memb_rt = F.dv0 - (F.v0 + pd * F.u0) / rdim;
            const double bend_r = F.dpsi_r + nu * (F.psi_r + pd * F.psi_theta) / rdim;
            const double bend_t = nu * F.dpsi_r + (F.psi_r + pd * F.psi_theta) / rdim;
            const double bend_rt = F.dpsi_theta - (F.psi_theta + pd * F.psi_r) / rdim;
            N.N_r = A * memb_r + B * bend_r;
            N.N_theta = A * memb_t + B * bend_t;
            N.N_rtheta = 0.5 * (1.0 - nu) * (A * memb_rt + B * bend_rt);
            N.M_r = B * memb_r + D * bend_r;
            N.M_theta = B * memb_t + D * bend_t;
            N.M_rtheta = 0.5 * (1.0 - nu) * (B * memb_rt + D * bend_rt);
            N.Q_r = Ssh * (F.psi_r + F.dw);
            N.Q_theta = Ssh * (F.psi_theta - pd * F.w / rdim);
        }
        if (p == 0) {
            N.N_rtheta = 0.0;
            N.M_rtheta = 0.0;
            N.Q_theta = 0.0;
        }
    }
    return out;
}

FieldState evaluate_fields(const SegmentSpectralBasis& basis, const SegmentCoefficientVector& c,
                           double r) {
    const auto cols = evaluate_columns(basis, r);
    FieldState F;
    for (int j = 0; j < 10; ++j) {
        const double cj = c.c[static_cast<size_t>(j)];
        if (cj == 0.0) continue;
        const FieldState& Fc = cols[static_cast<size_t>(j)].field;
        F.w += cj * Fc.w;
        F.dw += cj * Fc.dw;
        F.u0 += cj * Fc.u0;
        F.du0 += cj * Fc.du0;
        F.v0 += cj * Fc.v0;
        F.dv0 += cj * Fc.dv0;
        F.psi_r += cj * Fc.psi_r;
        F.dpsi_r += cj * Fc.dpsi_r;
        F.psi_theta += cj * Fc.psi_theta;
        F.dpsi_theta += cj * Fc.dpsi_theta;
    }
    return F;
}

ResultantState evaluate_resultants(const SegmentSpectralBasis& basis,
                                   const SegmentCoefficientVector& c, double r) {
    const auto cols = evaluate_columns(basis, r);
    ResultantState N;
    for (int j = 0; j < 10; ++j) {
        const double cj = c.c[static_cast<size_t>(j)];
        if (cj == 0.0) continue;
        const ResultantState& Nc = cols[static_cast<size_t>(j)].resultant;
        N.N_r += cj * Nc.N_r;
        N.N_theta += cj * Nc.N_theta;
        N.N_rtheta += cj * Nc.N_rtheta;
        N.M_r += cj * Nc.M_r;
        N.M_theta += cj * Nc.M_theta;
        N.M_rtheta += cj * Nc.M_rtheta;
        N.Q_r += cj * Nc.Q_r;
        N.Q_theta += cj * Nc.Q_theta;
    }
    return N;
}

} // namespace fgplate
