#pragma once

#include <stdexcept>
#include <string>

namespace fgplate {

/// Invalid problem description: bad config file, inconsistent geometry,
/// or a plate/mesh combination that cannot be assembled.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The dispersion equation left the regime the solution basis covers
/// (complex characteristic roots). Carries the offending frequency parameter.
class UnsupportedRegimeError : public std::runtime_error {
public:
    UnsupportedRegimeError(const std::string& what, double beta)
        : std::runtime_error(what), beta_(beta) {}
    double beta() const noexcept { return beta_; }

private:
    double beta_;
};

/// A characteristic root sits inside the oscillatory/evanescent transition
/// guard band; the caller must perturb the trial frequency.
class BranchTransitionError : public std::runtime_error {
public:
    BranchTransitionError(const std::string& what, double beta, int root_index)
        : std::runtime_error(what), beta_(beta), root_index_(root_index) {}
    double beta() const noexcept { return beta_; }
    int root_index() const noexcept { return root_index_; }

private:
    double beta_;
    int root_index_;
};

/// A modal-coefficient denominator vanished (characteristic root collides
/// with an in-plane root). The caller must perturb the trial frequency.
class DegenerateFrequencyError : public std::runtime_error {
public:
    DegenerateFrequencyError(const std::string& what, double beta)
        : std::runtime_error(what), beta_(beta) {}
    double beta() const noexcept { return beta_; }

private:
    double beta_;
};

/// The finite-element reference solver failed to converge or produced an
/// inconsistent system (non-SPD mass, residual above tolerance).
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fgplate
