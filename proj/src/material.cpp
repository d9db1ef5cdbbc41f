#include "fgplate/material.hpp"

#include <cmath>
#include <sstream>

#include "fgplate/errors.hpp"
#include "fgplate/quadrature.hpp"

namespace fgplate {

void MaterialPair::validate() const {
    if (!(E_m > 0.0)) throw ConfigError("material.E_m must be positive");
    if (!(E_c > 0.0)) throw ConfigError("material.E_c must be positive");
    if (!(rho_m > 0.0)) throw ConfigError("material.rho_m must be positive");
    if (!(rho_c > 0.0)) throw ConfigError("material.rho_c must be positive");
    if (!(nu > 0.0 && nu < 0.5)) throw ConfigError("material.nu must lie in (0, 0.5)");
    if (!(power_index >= 0.0)) throw ConfigError("material.g must be non-negative");
    if (!(shear_correction > 0.0)) throw ConfigError("material.kappa_sq must be positive");
}

void PlateConfig::finalize() {
    material.validate();
    if (segments.empty()) throw ConfigError("segments: at least one segment is required");
    if (kind == PlateKind::circular) {
        if (inner_bc) throw ConfigError("inner_bc: circular plates have no inner edge");
        inner_radius = 0.0;
    } else {
        if (!inner_bc) throw ConfigError("inner_bc: required for annular plates");
        if (!(inner_radius > 0.0))
            throw ConfigError("inner_radius: must be positive for annular plates");
        if (!(inner_radius < segments.front().outer_radius))
            throw ConfigError("inner_radius: must be smaller than the first segment outer_radius");
    }
    double prev = kind == PlateKind::annular ? inner_radius : 0.0;
    for (size_t i = 0; i < segments.size(); ++i) {
        auto& s = segments[i];
        s.index = static_cast<int>(i) + 1;
        if (!(s.thickness > 0.0)) {
            std::ostringstream msg;
            msg << "segments[" << i << "].thickness must be positive";
            throw ConfigError(msg.str());
        }
        if (!(s.outer_radius > prev)) {
            std::ostringstream msg;
            msg << "segments[" << i << "].outer_radius must exceed the previous radius";
            throw ConfigError(msg.str());
        }
        s.inner_radius = i == 0 ? (kind == PlateKind::annular ? inner_radius : 0.0)
                                : segments[i - 1].outer_radius;
        prev = s.outer_radius;
    }
    const double thickest = segments.front().thickness;
    for (size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].thickness > thickest * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "segments[" << i << "].thickness exceeds segment 1; the first segment must be the thickest";
            throw ConfigError(msg.str());
        }
    }
    for (auto& s : segments) {
        s.delta = s.thickness / r_n();
        s.tau = s.thickness / h_n();
    }
}

double PlateConfig::reference_rigidity() const {
    const double h = h_n();
    return material.E_c * h * h * h / (12.0 * (1.0 - material.nu * material.nu));
}

double PlateConfig::omega_from_beta(double beta) const {
    const double rn = r_n();
    return beta / (rn * rn * std::sqrt(material.rho_c * h_n() / reference_rigidity()));
}

double PlateConfig::beta_from_omega(double omega) const {
    const double rn = r_n();
    return omega * rn * rn * std::sqrt(material.rho_c * h_n() / reference_rigidity());
}

double volume_fraction(double z, double h1, double power_index) {
    const double half = 0.5 * h1;
    if (!(z >= -half - 1e-14 * h1 && z <= half + 1e-14 * h1))
        throw std::domain_error("volume_fraction: z outside the graded span");
    double t = z / h1 + 0.5;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    if (power_index == 0.0) return 1.0;
    return std::pow(t, power_index);
}

double youngs_modulus_at(double z, double h1, const MaterialPair& mat) {
    return (mat.E_m - mat.E_c) * volume_fraction(z, h1, mat.power_index) + mat.E_c;
}

double density_at(double z, double h1, const MaterialPair& mat) {
    return (mat.rho_m - mat.rho_c) * volume_fraction(z, h1, mat.power_index) + mat.rho_c;
}

SectionIntegrals section_integrals(const SegmentGeometry& segment, const MaterialPair& mat,
                                   double h1) {
    const double h = segment.thickness;
    if (h > h1 * (1.0 + 1e-12))
        throw ConfigError("section_integrals: segment thicker than the graded span");
    SectionIntegrals out;
    // Inertia integrals over the normalized coordinate Z = z / h_i.
    auto rho = [&](double Z) { return density_at(Z * h, h1, mat) / mat.rho_c; };
    out.I1 = integrate([&](double Z) { return rho(Z); }, -0.5, 0.5);
    out.I2 = integrate([&](double Z) { return rho(Z) * Z; }, -0.5, 0.5);
    out.I3 = integrate([&](double Z) { return rho(Z) * Z * Z; }, -0.5, 0.5);
    // Stiffness integrals over the dimensional coordinate, normalized by
    // E_c h^k and the plane-stress factor.
    const double plane = 1.0 - mat.nu * mat.nu;
    auto E = [&](double z) { return youngs_modulus_at(z, h1, mat) / plane; };
    const double a = -0.5 * h, b = 0.5 * h;
    out.K1 = integrate([&](double z) { return E(z); }, a, b) / (mat.E_c * h);
    out.K2 = integrate([&](double z) { return E(z) * z; }, a, b) / (mat.E_c * h * h);
    out.K3 = integrate([&](double z) { return E(z) * z * z; }, a, b) / (mat.E_c * h * h * h);
    return out;
}

ScaleFactors scale_factors(const SegmentGeometry& segment, const MaterialPair& mat,
                           const PlateConfig& plate, double omega) {
    return scale_factors(segment, mat, plate, omega, section_integrals(segment, mat, plate.h1()));
}

ScaleFactors scale_factors(const SegmentGeometry& segment, const MaterialPair& mat,
                           const PlateConfig& plate, double omega,
                           const SectionIntegrals& integrals) {
    if (!(omega >= 0.0)) throw std::domain_error("scale_factors: omega must be non-negative");
    ScaleFactors out;
    const double plane = 1.0 - mat.nu * mat.nu;
    out.S1 = segment.delta * segment.delta / (12.0 * plane);
    out.S2 = mat.shear_correction * (1.0 - mat.nu) * integrals.K1 /
             (2.0 * segment.delta * segment.delta);
    const double h = segment.thickness;
    out.D = mat.E_c * h * h * h / (12.0 * plane);
    const double rn = plate.r_n();
    out.lambda = omega * rn * rn * std::sqrt(mat.rho_c * h / out.D);
    out.omega = omega;
    out.beta = plate.beta_from_omega(omega);
    return out;
}

} // namespace fgplate
