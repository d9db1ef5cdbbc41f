#include "fgplate/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "fgplate/errors.hpp"
#include "fgplate/parallel.hpp"

namespace fgplate {
namespace {

double pick(const ColumnEval& col, RowQuantity q) {
    switch (q) {
        case RowQuantity::disp_w: return col.field.w;
        case RowQuantity::disp_u: return col.field.u0;
        case RowQuantity::disp_v: return col.field.v0;
        case RowQuantity::rot_r: return col.field.psi_r;
        case RowQuantity::rot_theta: return col.field.psi_theta;
        case RowQuantity::shear_q: return col.resultant.Q_r;
        case RowQuantity::force_n: return col.resultant.N_r;
        case RowQuantity::force_nt: return col.resultant.N_rtheta;
        case RowQuantity::moment_m: return col.resultant.M_r;
        case RowQuantity::moment_mt: return col.resultant.M_rtheta;
    }
    return 0.0;
}

double pick_literal(const ColumnEval& col, RowQuantity q) {
    // the literal interface variant swaps the tangential tractions for the
    // hoop resultants
    if (q == RowQuantity::force_nt) return col.resultant.N_theta;
    if (q == RowQuantity::moment_mt) return col.resultant.M_theta;
    return pick(col, q);
}

std::vector<RowQuantity> boundary_quantities(BoundaryCondition bc, int p) {
    using Q = RowQuantity;
    std::vector<Q> rows;
    switch (bc) {
        case BoundaryCondition::clamped:
            rows = {Q::disp_u, Q::disp_v, Q::disp_w, Q::rot_r, Q::rot_theta};
            break;
        case BoundaryCondition::hard_simply_supported:
            rows = {Q::disp_u, Q::disp_v, Q::disp_w, Q::rot_theta, Q::moment_m};
            break;
        case BoundaryCondition::soft_simply_supported:
            rows = {Q::disp_w, Q::force_n, Q::force_nt, Q::moment_m, Q::moment_mt};
            break;
        case BoundaryCondition::free_edge:
            rows = {Q::force_n, Q::force_nt, Q::shear_q, Q::moment_m, Q::moment_mt};
            break;
    }
    if (p == 0) {
        std::erase_if(rows, [](Q q) {
            return q == Q::disp_v || q == Q::rot_theta || q == Q::force_nt ||
                   q == Q::moment_mt;
        });
    }
    return rows;
}

std::vector<RowQuantity> continuity_quantities(int p) {
    using Q = RowQuantity;
    if (p == 0)
        return {Q::disp_w, Q::disp_u, Q::rot_r, Q::shear_q, Q::force_n, Q::moment_m};
    return {Q::disp_w,  Q::disp_u,  Q::disp_v,   Q::rot_r,   Q::rot_theta,
            Q::shear_q, Q::force_n, Q::force_nt, Q::moment_m, Q::moment_mt};
}

} // namespace

RowBlock boundary_rows(const SegmentSpectralBasis& basis, BoundaryCondition bc, double r) {
    const auto cols = evaluate_columns(basis, r);
    const auto quantities = boundary_quantities(bc, basis.wavenumber);
    RowBlock out;
    out.quantities = quantities;
    out.block.setZero(static_cast<Eigen::Index>(quantities.size()), 10);
    for (size_t i = 0; i < quantities.size(); ++i)
        for (int j = 0; j < 10; ++j)
            out.block(static_cast<Eigen::Index>(i), j) =
                pick(cols[static_cast<size_t>(j)], quantities[i]);
    return out;
}

RowBlock continuity_rows(const SegmentSpectralBasis& left, const SegmentSpectralBasis& right,
                         double r, InterfaceVariant variant) {
    const auto lcols = evaluate_columns(left, r);
    const auto rcols = evaluate_columns(right, r);
    const auto quantities = continuity_quantities(left.wavenumber);
    const bool literal = variant == InterfaceVariant::literal_hoop;
    RowBlock out;
    out.quantities = quantities;
    out.block.setZero(static_cast<Eigen::Index>(quantities.size()), 20);
    for (size_t i = 0; i < quantities.size(); ++i) {
        for (int j = 0; j < 10; ++j) {
            const double lv = literal ? pick_literal(lcols[static_cast<size_t>(j)], quantities[i])
                                      : pick(lcols[static_cast<size_t>(j)], quantities[i]);
            const double rv = literal ? pick_literal(rcols[static_cast<size_t>(j)], quantities[i])
                                      : pick(rcols[static_cast<size_t>(j)], quantities[i]);
            out.block(static_cast<Eigen::Index>(i), j) = lv;
            out.block(static_cast<Eigen::Index>(i), 10 + j) = -rv;
        }
    }
    return out;
}

PlateAssembler::PlateAssembler(const PlateConfig& config, int wavenumber)
    : config_(config), p_(wavenumber) {
    if (wavenumber < 0) throw ConfigError("wavenumber must be non-negative");
    const int n = config_.segment_count();
    active_.resize(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        const bool center = s == 0 && config_.kind == PlateKind::circular;
        std::vector<int>& act = active_[static_cast<size_t>(s)];
        if (p_ == 0) {
            act = center ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1, 2, 3, 4, 5};
        } else {
            act = center ? std::vector<int>{0, 1, 2, 6, 8}
                         : std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        }
    }
    int cols = 0;
    for (const auto& a : active_) cols += static_cast<int>(a.size());
    const int bc_rows = p_ == 0 ? 3 : 5;
    const int iface_rows = p_ == 0 ? 6 : 10;
    int rows = (config_.kind == PlateKind::annular ? bc_rows : 0) + bc_rows +
               (n - 1) * iface_rows;
    if (rows != cols) throw ConfigError("assembler: system is not square");
    size_ = rows;
    integrals_.reserve(static_cast<size_t>(n));
    for (const auto& seg : config_.segments)
        integrals_.push_back(section_integrals(seg, config_.material, config_.h1()));
    force_scale_ = config_.material.E_c * config_.h_n();
    moment_scale_ = force_scale_ * config_.h_n();
}

std::vector<SegmentSpectralBasis> PlateAssembler::bases(double beta) const {
    std::vector<SegmentSpectralBasis> out;
    out.reserve(config_.segments.size());
    for (size_t s = 0; s < config_.segments.size(); ++s)
        out.push_back(build_segment_basis(config_.segments[s], config_.material, config_,
                                          integrals_[s], p_, beta));
    return out;
}

Eigen::MatrixXd PlateAssembler::assemble(double beta) const { return assemble(bases(beta)); }

Eigen::MatrixXd PlateAssembler::assemble(const std::vector<SegmentSpectralBasis>& bases) const {
    const int n = config_.segment_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_, size_);
    std::vector<int> col_offset(static_cast<size_t>(n), 0);
    for (int s = 1; s < n; ++s)
        col_offset[static_cast<size_t>(s)] =
            col_offset[static_cast<size_t>(s - 1)] +
            static_cast<int>(active_[static_cast<size_t>(s - 1)].size());

    auto row_scale = [&](RowQuantity q) {
        switch (q) {
            case RowQuantity::disp_w:
            case RowQuantity::disp_u:
            case RowQuantity::disp_v: return config_.r_n();
            case RowQuantity::rot_r:
            case RowQuantity::rot_theta: return 1.0;
            case RowQuantity::shear_q:
            case RowQuantity::force_n:
            case RowQuantity::force_nt: return force_scale_;
            case RowQuantity::moment_m:
            case RowQuantity::moment_mt: return moment_scale_;
        }
        return 1.0;
    };
    auto put_block = [&](const RowBlock& rb, int row0, int seg, int block_col0) {
        const auto& act = active_[static_cast<size_t>(seg)];
        for (Eigen::Index i = 0; i < rb.block.rows(); ++i) {
            const double scale = row_scale(rb.quantities[static_cast<size_t>(i)]);
            for (size_t jj = 0; jj < act.size(); ++jj)
                m(row0 + i, col_offset[static_cast<size_t>(seg)] + static_cast<int>(jj)) +=
                    rb.block(i, block_col0 + act[jj]) / scale;
        }
    };

    int row = 0;
    if (config_.kind == PlateKind::annular) {
        const RowBlock rb = boundary_rows(bases.front(), *config_.inner_bc, config_.inner_radius);
        put_block(rb, row, 0, 0);
        row += static_cast<int>(rb.block.rows());
    }
    for (int s = 0; s + 1 < n; ++s) {
        const RowBlock rb = continuity_rows(bases[static_cast<size_t>(s)],
                                            bases[static_cast<size_t>(s + 1)],
                                            config_.segments[static_cast<size_t>(s)].outer_radius,
                                            config_.interface_variant);
        put_block(rb, row, s, 0);
        put_block(rb, row, s + 1, 10);
        row += static_cast<int>(rb.block.rows());
    }
    const RowBlock rb = boundary_rows(bases.back(), config_.outer_bc, config_.r_n());
    put_block(rb, row, n - 1, 0);
    row += static_cast<int>(rb.block.rows());
    return m;
}

void PlateAssembler::normalize_columns(Eigen::MatrixXd& m, std::vector<double>* factors) const {
    if (factors) factors->assign(static_cast<size_t>(m.cols()), 1.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double mx = m.col(j).cwiseAbs().maxCoeff();
        if (!(mx > 0.0))
            throw ConfigError("degenerate configuration: a basis column vanished identically");
        m.col(j) /= mx;
        if (factors) (*factors)[static_cast<size_t>(j)] = mx;
    }
}

DetEval PlateAssembler::determinant(double beta, bool allow_perturb) const {
    std::vector<SegmentSpectralBasis> b;
    double used = beta;
    bool built = false;
    try {
        b = bases(beta);
        built = true;
    } catch (const BranchTransitionError&) {
        if (!allow_perturb) throw;
    } catch (const DegenerateFrequencyError&) {
        if (!allow_perturb) throw;
    }
    if (!built) {
        for (double dir : {1.0, -1.0}) {
            try {
                used = beta * (1.0 + dir * 1e-6);
                b = bases(used);
                built = true;
                break;
            } catch (const BranchTransitionError&) {
            } catch (const DegenerateFrequencyError&) {
            }
        }
        if (!built) b = bases(beta); // rethrows the original guard error
    }
    Eigen::MatrixXd m = assemble(b);
    normalize_columns(m, nullptr);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const auto& lum = lu.matrixLU();
    double log_abs = 0.0;
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (Eigen::Index i = 0; i < lum.rows(); ++i) {
        const double d = lum(i, i);
        if (d == 0.0) {
            sign = 0;
            log_abs = -std::numeric_limits<double>::infinity();
            break;
        }
        log_abs += std::log(std::abs(d));
        if (d < 0.0) sign = -sign;
    }
    DetEval out;
    out.beta = used;
    out.sign = sign;
    out.log_abs = log_abs;
    out.value = sign * std::exp(log_abs / size_);
    out.signature.reserve(b.size() * 5);
    for (const auto& basis : b)
        for (const auto& rt : basis.roots)
            out.signature.push_back(rt.x < 0.0 ? -1 : 1);
    return out;
}

PlateAssembler::NullVector PlateAssembler::null_vector(double beta) const {
    Eigen::MatrixXd m = assemble(beta);
    std::vector<double> factors;
    normalize_columns(m, &factors);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(size_ - 1);
    const auto& sv = svd.singularValues();
    NullVector out;
    out.sigma_ratio = sv(size_ - 1) / std::max(sv(0), 1e-300);

    out.coefficients.assign(config_.segments.size(), SegmentCoefficientVector{});
    int idx = 0;
    for (size_t s = 0; s < config_.segments.size(); ++s) {
        for (int cidx : active_[s]) {
            out.coefficients[s].c[static_cast<size_t>(cidx)] =
                v(idx) / factors[static_cast<size_t>(idx)];
            ++idx;
        }
    }

    // normalize to max-abs 1 with the first nonzero entry positive
    double mx = 0.0;
    for (const auto& seg : out.coefficients)
        for (double c : seg.c) mx = std::max(mx, std::abs(c));
    if (mx > 0.0) {
        double first = 0.0;
        for (const auto& seg : out.coefficients) {
            for (double c : seg.c)
                if (first == 0.0 && std::abs(c) > 1e-12 * mx) {
                    first = c;
                    break;
                }
            if (first != 0.0) break;
        }
        const double scale = (first < 0.0 ? -1.0 : 1.0) / mx;
        for (auto& seg : out.coefficients)
            for (double& c : seg.c) c *= scale;
    }
    return out;
}

ModeResult PlateAssembler::make_mode(double beta) const {
    ModeResult mode;
    mode.m = p_;
    mode.beta = beta;
    mode.omega = config_.omega_from_beta(beta);
    mode.frequency_hz = mode.omega / (2.0 * 3.141592653589793);
    const DetEval de = determinant(beta, false);
    mode.residual = std::abs(de.value);
    auto nv = null_vector(beta);
    mode.sigma_ratio = nv.sigma_ratio;
    mode.coefficients = std::move(nv.coefficients);
    return mode;
}

FrequencySearch PlateAssembler::find_frequencies(const SearchOptions& options,
                                                 int max_modes) const {
    FrequencySearch out;
    if (max_modes < 1) return out;

    struct Sample {
        double beta;
        int sign;
        std::vector<int> signature;
    };
    auto eval = [&](double beta, bool allow_perturb) -> Sample {
        const DetEval de = determinant(beta, allow_perturb);
        return {de.beta, de.sign, de.signature};
    };

    // Plain sign bisection. Brackets always come from sweep intervals whose
    // endpoints share a branch signature; a transition sitting exactly on a
    // midpoint is stepped over with an off-center probe.
    auto refine = [&](Sample lo, Sample hi) -> double {
        while ((hi.beta - lo.beta) > options.refine_rel_tol * lo.beta) {
            const double mid_beta = 0.5 * (lo.beta + hi.beta);
            Sample mid;
            try {
                mid = eval(mid_beta, false);
            } catch (const BranchTransitionError&) {
                try {
                    mid = eval(mid_beta + 0.131 * (hi.beta - mid_beta), false);
                } catch (const BranchTransitionError&) {
                    break;
                }
            } catch (const DegenerateFrequencyError&) {
                try {
                    mid = eval(mid_beta + 0.131 * (hi.beta - mid_beta), false);
                } catch (const DegenerateFrequencyError&) {
                    break;
                }
            }
            if (mid.sign == 0) return mid.beta;
            if (mid.sign == lo.sign)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo.beta + hi.beta);
    };

    std::vector<double> roots;
    // Recursive handler for one sweep interval.
    std::function<void(const Sample&, const Sample&, int)> process =
        [&](const Sample& a, const Sample& b, int depth) {
            if (static_cast<int>(roots.size()) >= max_modes) return;
            if (a.signature == b.signature) {
                if (a.sign != 0 && b.sign != 0 && a.sign != b.sign)
                    roots.push_back(refine(a, b));
                else if (a.sign == 0)
                    roots.push_back(a.beta);
                return;
            }
            if ((b.beta - a.beta) < 1e-9 * a.beta || depth > 48) {
                if (a.sign != b.sign) {
                    std::ostringstream msg;
                    msg << "possible root skipped at a branch transition near beta="
                        << 0.5 * (a.beta + b.beta);
                    out.diagnostics.push_back(msg.str());
                }
                return;
            }
            Sample mid;
            try {
                mid = eval(0.5 * (a.beta + b.beta), true);
            } catch (const BranchTransitionError&) {
                out.diagnostics.push_back("unresolvable branch transition during subdivision");
                return;
            }
            process(a, mid, depth + 1);
            process(mid, b, depth + 1);
        };

    Sample prev;
    double start = options.beta_min;
    for (;;) {
        try {
            prev = eval(start, true);
            break;
        } catch (const BranchTransitionError&) {
        } catch (const DegenerateFrequencyError&) {
        }
        start += options.initial_step;
        if (start >= options.beta_max) {
            out.shortfall = true;
            return out;
        }
    }
    double beta = prev.beta;
    while (beta < options.beta_max && static_cast<int>(roots.size()) < max_modes) {
        beta = std::min(beta + options.initial_step, options.beta_max);
        Sample cur;
        try {
            cur = eval(beta, true);
        } catch (const BranchTransitionError&) {
            continue; // unlucky sample; the next step resumes the sweep
        } catch (const DegenerateFrequencyError&) {
            continue;
        }
        process(prev, cur, 0);
        prev = cur;
        if (beta >= options.beta_max) break;
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-8 * a; }),
                roots.end());
    if (static_cast<int>(roots.size()) > max_modes) roots.resize(static_cast<size_t>(max_modes));

    int ordinal = 1;
    for (double root : roots) {
        ModeResult mode = make_mode(root);
        mode.n = ordinal++;
        out.modes.push_back(std::move(mode));
    }
    out.shortfall = static_cast<int>(out.modes.size()) < max_modes;
    return out;
}

ModeTable mode_table(const PlateConfig& config, int p_max, int modes_per_p,
                     const SearchOptions& options, int total_modes, int threads) {
    ModeTable table;
    std::vector<FrequencySearch> per_p(static_cast<size_t>(p_max) + 1);
    parallel_for(
        p_max + 1,
        [&](int p) {
            PlateAssembler assembler(config, p);
            per_p[static_cast<size_t>(p)] = assembler.find_frequencies(options, modes_per_p);
        },
        threads);
    for (auto& fs : per_p) {
        for (auto& mode : fs.modes) table.entries.push_back(std::move(mode));
        for (auto& d : fs.diagnostics) table.diagnostics.push_back(std::move(d));
    }
    std::sort(table.entries.begin(), table.entries.end(),
              [](const ModeResult& a, const ModeResult& b) {
                  if (a.beta != b.beta) return a.beta < b.beta;
                  if (a.m != b.m) return a.m < b.m;
                  return a.n < b.n;
              });
    if (total_modes > 0 && static_cast<int>(table.entries.size()) > total_modes)
        table.entries.resize(static_cast<size_t>(total_modes));
    return table;
}

} // namespace fgplate
