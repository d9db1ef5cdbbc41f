#pragma once

#include <array>

#include "fgplate/bessel.hpp"
#include "fgplate/material.hpp"

namespace fgplate {

/// Coefficients of the characteristic cubic A1 x^3 + A2 x^2 + A3 x + A4 = 0
/// whose roots select the three transverse radial wave types.
struct DispersionCoefficients {
    double A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0;
};

/// Constants coupling the in-plane/rotation potentials to the deflection.
struct GTerms {
    double G1 = 0.0, G2 = 0.0, G3 = 0.0, G4 = 0.0;
    double G5 = 0.0, G6 = 0.0, G7 = 0.0, G8 = 0.0;
};

/// x < 0 selects the oscillatory pair (J, Y); x > 0 the evanescent (I, K).
enum class RadialBranch { oscillatory, evanescent };

/// Everything needed to evaluate one segment's solution at one trial
/// frequency: characteristic roots, branch selection, modal coefficients,
/// and the segment context (integrals, scales, geometry).
///
/// Index convention for roots[]: 0..2 are the transverse cubic roots in
/// ascending order; 3 and 4 are the in-plane quadratic roots (3 takes the
/// plus sign of the discriminant). Coefficient indices follow the solution
/// expansion: a[0..2] weight the transverse potentials in the first
/// auxiliary pair, a[3..4] the in-plane potentials; a[5..7] and a[8..9] are
/// the corresponding weights in the second auxiliary pair.
struct SegmentSpectralBasis {
    int wavenumber = 0;   ///< circumferential wave number p
    double beta = 0.0;

    struct Root {
        double x = 0.0;
        double chi = 0.0; ///< sqrt(|x|)
        RadialBranch branch = RadialBranch::oscillatory;
    };
    std::array<Root, 5> roots;
    double xi1 = 0.0, xi2 = 0.0; ///< in-plane quadratic: x^2 - xi1 x + xi2 = 0

    DispersionCoefficients cubic;
    GTerms g;

    std::array<double, 10> a{}; ///< modal coefficients a_1..a_10
    std::array<double, 10> b{}; ///< companions: b_k = a_k except k in {4,5,9,10}
    std::array<double, 3> w_weight{1.0, 1.0, 1.0}; ///< deflection content per transverse root
    bool decoupled = false; ///< homogeneous material: membrane/bending split handled explicitly

    // Segment context captured at build time.
    SectionIntegrals integrals;
    ScaleFactors scales;
    double delta = 0.0;
    double thickness = 0.0;   ///< m
    double plate_radius = 0.0;///< r_n (m)
    double R_inner = 0.0, R_outer = 0.0; ///< dimensionless segment span
    double E_c = 0.0, nu = 0.0, kappa_sq = 0.0;
};

/// The ten expansion coefficients of one segment. For the innermost segment
/// of a circular plate only c1, c2, c3, c7, c9 may be nonzero (the
/// second-kind functions are singular at r = 0).
struct SegmentCoefficientVector {
    std::array<double, 10> c{};
};

/// Dimensional displacement/rotation amplitudes and their radial
/// derivatives at one radius, with the circumferential factor stripped
/// (w, u0, psi_r carry cos(p theta); v0, psi_theta carry sin(p theta)).
struct FieldState {
    double w = 0.0, u0 = 0.0, v0 = 0.0, psi_r = 0.0, psi_theta = 0.0;
    double dw = 0.0, du0 = 0.0, dv0 = 0.0, dpsi_r = 0.0, dpsi_theta = 0.0; ///< d/dr (1/m scale)
};

/// Dimensional stress-resultant amplitudes at one radius (theta factor
/// stripped; N_rtheta, M_rtheta, Q_theta carry sin(p theta)).
struct ResultantState {
    double N_r = 0.0, N_theta = 0.0, N_rtheta = 0.0; ///< N/m
    double M_r = 0.0, M_theta = 0.0, M_rtheta = 0.0; ///< N
    double Q_r = 0.0, Q_theta = 0.0;                 ///< N/m
};

/// Dispersion cubic coefficients for one segment at one frequency.
DispersionCoefficients dispersion_coefficients(const SectionIntegrals& integrals,
                                               const ScaleFactors& scales, double delta);

GTerms g_terms(const SectionIntegrals& integrals, const ScaleFactors& scales, double delta);

/// Roots of a general real cubic; throws UnsupportedRegimeError (tagged with
/// `beta`) when a complex pair appears. Roots are ascending.
std::array<double, 3> solve_cubic(double c3, double c2, double c1, double c0, double beta);

/// Fills roots/branches/chi and the in-plane quadratic of a basis under
/// construction. Throws BranchTransitionError if any |x_k| < 1e-8.
void characteristic_roots(const DispersionCoefficients& coeffs, const GTerms& g, double nu,
                          double beta, SegmentSpectralBasis& basis);

/// Fills the modal coefficients a_k, b_k (and the homogeneous-decoupling
/// weights). Throws DegenerateFrequencyError on vanishing denominators.
void modal_coefficients(const GTerms& g, double nu, double beta, SegmentSpectralBasis& basis);

/// Builds the complete spectral basis of one segment at frequency parameter
/// `beta` (global definition; the segment's lambda is derived internally).
SegmentSpectralBasis build_segment_basis(const SegmentGeometry& segment, const MaterialPair& mat,
                                         const PlateConfig& plate,
                                         const SectionIntegrals& integrals, int wavenumber,
                                         double beta);

/// Radial profile (value and d/dR) of one basis column, normalized so the
/// evanescent functions stay O(1) across the segment.
struct ColumnProfile {
    double S = 0.0;   ///< radial function
    double dS = 0.0;  ///< d/dR
    double d2S = 0.0; ///< d^2/dR^2, from the defining Bessel identity
};

/// column index convention (matches the coefficient vector):
/// 0..2 first-kind transverse, 3..5 second-kind transverse,
/// 6 first-kind in-plane root 3, 7 second-kind in-plane root 3,
/// 8 first-kind in-plane root 4, 9 second-kind in-plane root 4.
ColumnProfile column_profile(const SegmentSpectralBasis& basis, int column, double R);

/// Per-column dimensional fields and resultants at one radius; linear
/// functionals assembled from these build the system matrix.
struct ColumnEval {
    FieldState field;
    ResultantState resultant;
};
std::array<ColumnEval, 10> evaluate_columns(const SegmentSpectralBasis& basis, double r);

/// Fields/resultants for a full coefficient vector (weighted column sums).
FieldState evaluate_fields(const SegmentSpectralBasis& basis, const SegmentCoefficientVector& c,
                           double r);
ResultantState evaluate_resultants(const SegmentSpectralBasis& basis,
                                   const SegmentCoefficientVector& c, double r);

} // namespace fgplate
