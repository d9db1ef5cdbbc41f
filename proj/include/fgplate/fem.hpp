#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fgplate/material.hpp"

namespace fgplate {

/// 1-D radial mesh of 3-node quadratic elements for one Fourier harmonic.
/// Element boundaries coincide with segment interfaces and edges.
struct RadialMesh {
    std::vector<double> nodes;        ///< radii (m), ascending, corner+mid nodes
    std::vector<int> element_segment; ///< element -> 0-based segment index
    int order = 2;
    int wavenumber = 0;

    int element_count() const { return static_cast<int>(element_segment.size()); }
};

/// Builds a mesh with >= 4 elements per segment, distributing
/// `total_elements` proportionally to segment width.
RadialMesh build_radial_mesh(const PlateConfig& config, int wavenumber, int total_elements);

/// Assembled generalized eigensystem with essential conditions applied.
/// p = 0 carries 3 unknowns per node (u0, w, psi_r); p >= 1 carries 5
/// (u0, v0, w, psi_r, psi_theta).
struct FemSystem {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
    int wavenumber = 0;
    int dof_per_node = 0;
    /// (node, local dof) -> (global index, factor); empty list = fixed.
    std::vector<std::vector<std::pair<int, double>>> dof_map;
    int node_count = 0;
    double shift_suggestion = -1.0; ///< negative shift (omega^2 scale) for shift-invert
};

FemSystem assemble(const PlateConfig& config, int wavenumber, const RadialMesh& mesh);

/// Smallest generalized eigenpairs of (K, M), M positive definite.
struct EigenSolution {
    std::vector<double> eigenvalues;    ///< omega^2, ascending
    std::vector<double> frequencies_hz; ///< including near-zero rigid modes
    Eigen::MatrixXd vectors;            ///< reduced-system columns
    int iterations = 0;
};

EigenSolution solve_eigens(const FemSystem& system, int count);

/// Number of eigenvalues of (K, M) strictly below omega^2 (matrix inertia
/// of K - omega^2 M).
int eigencount_below(const FemSystem& system, double omega);

/// Convenience: first `count` frequencies (Hz) of one harmonic, rigid-body
/// modes included.
std::vector<double> fem_frequencies(const PlateConfig& config, int wavenumber, int elements,
                                    int count);

/// Expands a reduced eigenvector to per-node fields (node_count x dof_per_node).
Eigen::MatrixXd expand_mode(const FemSystem& system, const Eigen::VectorXd& reduced);

/// Labeled FEM mode table merged over p = 0..p_max, ascending frequency,
/// rigid-body modes (below `rigid_cutoff_hz`) dropped.
struct FemMode {
    int m = 0;
    int n = 0;
    double frequency_hz = 0.0;
};
std::vector<FemMode> fem_mode_table(const PlateConfig& config, int p_max, int modes_per_p,
                                    int elements, int total_modes, int threads = 0,
                                    double rigid_cutoff_hz = 0.5);

} // namespace fgplate
