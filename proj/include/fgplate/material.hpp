#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fgplate {

/// Two-constituent power-law graded material. The top surface of the
/// thickest segment is metal-rich, the bottom ceramic-rich; properties
/// blend through the thickness with exponent `power_index`.
struct MaterialPair {
    double E_m = 0.0;      ///< Young's modulus, metal constituent (Pa)
    double E_c = 0.0;      ///< Young's modulus, ceramic constituent (Pa)
    double rho_m = 0.0;    ///< density, metal (kg/m^3)
    double rho_c = 0.0;    ///< density, ceramic (kg/m^3)
    double nu = 0.3;       ///< Poisson's ratio (constant through thickness)
    double power_index = 1.0;       ///< volume-fraction exponent, >= 0
    double shear_correction = 5.0 / 6.0; ///< kappa^2

    void validate() const;
};

/// One annular (or central circular) piece of constant thickness.
/// Segments are ordered innermost first and share the mid-plane z = 0.
struct SegmentGeometry {
    int index = 0;             ///< 1-based ordinal, innermost first
    double outer_radius = 0.0; ///< m
    double thickness = 0.0;    ///< m
    double inner_radius = 0.0; ///< m, derived (0 for a circular core)
    double delta = 0.0;        ///< thickness / plate outer radius
    double tau = 0.0;          ///< thickness / outermost segment thickness
};

enum class PlateKind { circular, annular };

enum class BoundaryCondition { free_edge, soft_simply_supported, hard_simply_supported, clamped };

/// Which tangential resultants are matched across a step interface.
/// conjugate_shear matches N_rtheta/M_rtheta (the work conjugates of the
/// tangential displacements); literal_hoop matches N_theta/M_theta instead.
enum class InterfaceVariant { conjugate_shear, literal_hoop };

/// Full problem description: material pair, ordered segments, edge supports.
struct PlateConfig {
    MaterialPair material;
    std::vector<SegmentGeometry> segments;
    PlateKind kind = PlateKind::circular;
    BoundaryCondition outer_bc = BoundaryCondition::clamped;
    std::optional<BoundaryCondition> inner_bc; ///< annular plates only
    double inner_radius = 0.0;                 ///< annular plates only (m)
    InterfaceVariant interface_variant = InterfaceVariant::conjugate_shear;

    /// Fills derived segment fields and checks every geometric invariant.
    /// Throws ConfigError with the offending field named.
    void finalize();

    int segment_count() const { return static_cast<int>(segments.size()); }
    double h1() const { return segments.front().thickness; }     ///< thickest (first) segment
    double h_n() const { return segments.back().thickness; }     ///< outermost thickness
    double r_n() const { return segments.back().outer_radius; }  ///< plate outer radius
    /// Flexural rigidity of the outermost segment, E_c h_n^3 / (12 (1-nu^2)).
    double reference_rigidity() const;
    /// omega (rad/s) <-> dimensionless frequency parameter
    /// beta = omega r_n^2 sqrt(rho_c h_n / D_n).
    double omega_from_beta(double beta) const;
    double beta_from_omega(double omega) const;
};

/// Thickness-integrated, nondimensional inertia (I1..I3) and stiffness
/// (K1..K3) of one segment. The k-th member weights the integrand with
/// the (k-1)-th power of the through-thickness coordinate.
struct SectionIntegrals {
    double I1 = 0.0, I2 = 0.0, I3 = 0.0;
    double K1 = 0.0, K2 = 0.0, K3 = 0.0;

    double detI() const { return I1 * I3 - I2 * I2; }
    double detK() const { return K1 * K3 - K2 * K2; }
};

/// Per-segment dimensionless factors of the equations of motion at one
/// trial frequency.
struct ScaleFactors {
    double S1 = 0.0;       ///< delta^2 / (12 (1-nu^2))
    double S2 = 0.0;       ///< kappa^2 (1-nu) K1 / (2 delta^2)
    double lambda = 0.0;   ///< omega r_n^2 sqrt(rho_c h_i / D_i)
    double D = 0.0;        ///< segment flexural rigidity (N m)
    double beta = 0.0;     ///< global frequency parameter
    double omega = 0.0;    ///< rad/s
};

/// Volume fraction (z / h1 + 1/2)^g of the metal constituent at height z.
/// z is measured from the shared mid-plane; |z| <= h1/2.
double volume_fraction(double z, double h1, double power_index);

/// Young's modulus / density at height z (Pa, kg/m^3).
double youngs_modulus_at(double z, double h1, const MaterialPair& mat);
double density_at(double z, double h1, const MaterialPair& mat);

/// Nondimensional section integrals of one segment, evaluated by adaptive
/// quadrature to 1e-12 relative tolerance. The volume fraction is always
/// referenced to the thickest segment's span h1, so thinner segments sample
/// the central part of the gradient.
SectionIntegrals section_integrals(const SegmentGeometry& segment, const MaterialPair& mat,
                                   double h1);

/// Frequency-dependent scale factors of one segment.
ScaleFactors scale_factors(const SegmentGeometry& segment, const MaterialPair& mat,
                           const PlateConfig& plate, double omega);

/// Same, with the (frequency-independent) section integrals precomputed.
ScaleFactors scale_factors(const SegmentGeometry& segment, const MaterialPair& mat,
                           const PlateConfig& plate, double omega,
                           const SectionIntegrals& integrals);

} // namespace fgplate
