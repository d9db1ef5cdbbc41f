#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fgplate/material.hpp"
#include "fgplate/segment.hpp"

namespace fgplate {

/// What a system row constrains; used for unit-balancing row scales.
enum class RowQuantity {
    disp_w,
    disp_u,
    disp_v,
    rot_r,
    rot_theta,
    shear_q,
    force_n,
    force_nt,
    moment_m,
    moment_mt
};

/// One labeled boundary/continuity block over the full 10-column space of
/// the segments it touches.
struct RowBlock {
    Eigen::MatrixXd block;               ///< rows x (10 or 20) columns
    std::vector<RowQuantity> quantities; ///< one per row
};

/// Boundary rows of one edge: 5 rows for p >= 1, 3 for p = 0 (tangential
/// conditions hold identically and are dropped).
RowBlock boundary_rows(const SegmentSpectralBasis& basis, BoundaryCondition bc, double r);

/// Interface rows between adjacent segments, (left - right) evaluation of
/// the dimensional fields and tractions: 10 rows for p >= 1, 6 for p = 0.
RowBlock continuity_rows(const SegmentSpectralBasis& left, const SegmentSpectralBasis& right,
                         double r, InterfaceVariant variant);

/// Scaled characteristic determinant at one trial frequency.
struct DetEval {
    double value = 0.0;   ///< sign * |det|^(1/size) of the normalized matrix
    int sign = 0;
    double log_abs = 0.0; ///< log |det| of the normalized matrix
    double beta = 0.0;    ///< frequency actually evaluated (after guard nudges)
    std::vector<int> signature; ///< sign(x_k) per segment root, branch bookkeeping
};

/// One converged eigenfrequency with its labeled position and the
/// normalized coefficient vectors of every segment.
struct ModeResult {
    int m = 0;          ///< nodal diameters (circumferential wave number)
    int n = 0;          ///< 1-based ordinal within fixed m, ascending beta
    double beta = 0.0;
    double omega = 0.0; ///< rad/s
    double frequency_hz = 0.0;
    double residual = 0.0;    ///< |scaled determinant| at the root
    double sigma_ratio = 0.0; ///< smallest/largest singular value at the root
    std::vector<SegmentCoefficientVector> coefficients; ///< per segment
};

struct SearchOptions {
    double beta_min = 0.05;
    double beta_max = 120.0;
    double initial_step = 0.05;
    double refine_rel_tol = 1e-10;
};

struct FrequencySearch {
    std::vector<ModeResult> modes;
    bool shortfall = false; ///< fewer roots in range than requested
    std::vector<std::string> diagnostics;
};

/// Assembles and analyzes the characteristic system of one plate at one
/// circumferential wave number.
class PlateAssembler {
public:
    PlateAssembler(const PlateConfig& config, int wavenumber);

    int system_size() const { return size_; }
    int wavenumber() const { return p_; }
    const PlateConfig& config() const { return config_; }

    /// Active coefficient indices (0-based positions in the 10-vector) of
    /// one segment's columns in the global matrix.
    const std::vector<int>& active_columns(int segment) const {
        return active_[static_cast<size_t>(segment)];
    }

    std::vector<SegmentSpectralBasis> bases(double beta) const;

    /// Raw row-scaled global matrix (columns not yet normalized).
    Eigen::MatrixXd assemble(double beta) const;
    Eigen::MatrixXd assemble(const std::vector<SegmentSpectralBasis>& bases) const;

    /// Scaled determinant; nudges beta off branch transitions when
    /// allow_perturb is set, otherwise lets BranchTransitionError through.
    DetEval determinant(double beta, bool allow_perturb = true) const;

    /// Null direction of the (normalized) system at a converged root.
    struct NullVector {
        std::vector<SegmentCoefficientVector> coefficients;
        double sigma_ratio = 0.0;
    };
    NullVector null_vector(double beta) const;

    /// Sweeps [options.beta_min, beta_max], brackets sign changes of the
    /// scaled determinant, and refines each bracket by bisection.
    FrequencySearch find_frequencies(const SearchOptions& options, int max_modes) const;

private:
    PlateConfig config_;
    int p_ = 0;
    int size_ = 0;
    std::vector<std::vector<int>> active_;
    std::vector<SectionIntegrals> integrals_;
    double force_scale_ = 1.0;
    double moment_scale_ = 1.0;

    void normalize_columns(Eigen::MatrixXd& m, std::vector<double>* factors) const;
    ModeResult make_mode(double beta) const;
};

/// Globally sorted, (m, n)-labeled table of the lowest modes.
struct ModeTable {
    std::vector<ModeResult> entries; ///< ascending frequency
    std::vector<std::string> diagnostics;
};

ModeTable mode_table(const PlateConfig& config, int p_max, int modes_per_p,
                     const SearchOptions& options = {}, int total_modes = 0, int threads = 0);

} // namespace fgplate
