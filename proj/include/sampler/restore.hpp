#pragma once

#include "sampler/projector.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sampler {

/// Output grid (tau-spaced, tensor in 2-D).
struct OutputGrid {
    double tau = 0;
    std::vector<double> xs, ys;  // ys empty in 1-D

    int size() const { return static_cast<int>(xs.size() * std::max<size_t>(ys.size(), 1)); }
};

inline OutputGrid make_output_grid(const BoxDomain& dom, double tau) {
    OutputGrid g;
    g.tau = tau;
    int nx = static_cast<int>(std::floor(dom.length(0) / tau + 1e-9));
    for (int i = 0; i <= nx; ++i) g.xs.push_back(dom.lo[0] + i * tau);
    if (dom.dim == 2) {
        int ny = static_cast<int>(std::floor(dom.length(1) / tau + 1e-9));
        for (int i = 0; i <= ny; ++i) g.ys.push_back(dom.lo[1] + i * tau);
    }
    return g;
}

/// Everything Algorithms RESTORE / INTEGRATE multiply: the point-evaluation
/// matrices Phi_s (nodes) and Phi_c (output grid) and the projector inner
/// products M_{psi phit}.
struct OperatorPack {
    Eigen::MatrixXd phi_s;  // (M+1) x (N+1)
    Eigen::MatrixXd phi_c;  // grid x (N+1)
    ProjectorMatrix m;      // (N+1) x (M+1)
    OutputGrid grid;
    std::optional<int> phi_s_bandwidth;
    std::optional<int> phi_c_bandwidth;
    DensityCertificate certificate;
    bool density_override = false;
    const Basis* basis = nullptr;
    const SamplingSet* sampling = nullptr;
};

/// Multiply-add count for one application of both banded pack matrices; the
/// banded path walks only in-band entries, so the count scales with
/// bandwidth x size rather than size^2.
inline std::int64_t pack_apply_flops(const OperatorPack& pack) {
    auto count = [](const Eigen::MatrixXd& m, std::optional<int> bw) -> std::int64_t {
        if (!bw) return static_cast<std::int64_t>(m.rows()) * m.cols();
        std::int64_t c = 0;
        for (int i = 0; i < m.rows(); ++i) {
            int lo = std::max(0, i - *bw), hi = std::min<int>(m.cols() - 1, i + *bw);
            c += std::max(0, hi - lo + 1);
        }
        return c;
    };
    return count(pack.m.m, pack.m.bandwidth) + count(pack.phi_s, pack.phi_s_bandwidth);
}

namespace detail {

/// y += A x, walking only the in-band entries when a bandwidth is declared.
inline void banded_matvec_add(const Eigen::MatrixXd& a, std::optional<int> bw,
                              const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    if (!bw) {
        y.noalias() += a * x;
        return;
    }
    for (int i = 0; i < a.rows(); ++i) {
        int lo = std::max(0, i - *bw), hi = std::min<int>(a.cols() - 1, i + *bw);
        double acc = 0;
        for (int j = lo; j <= hi; ++j) acc += a(i, j) * x[j];
        y[i] += acc;
    }
}

inline Eigen::VectorXd banded_matvec(const Eigen::MatrixXd& a, std::optional<int> bw,
                                     const Eigen::VectorXd& x) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(a.rows());
    banded_matvec_add(a, bw, x, y);
    return y;
}

}  // namespace detail

/// Assembles the operator pack for a basis / dual / node-set triple.
/// The density certificate is computed up front; a failing certificate
/// raises DensityError unless the caller overrides (the override is recorded).
inline OperatorPack assemble_pack(const Basis& basis, const DualRep& dual, const SamplingSet& set,
                                  double tau, double delta, bool density_override = false) {
    OperatorPack pack;
    pack.certificate = check_delta_dense(set.nodes, set.domain, delta, delta / 4);
    pack.density_override = density_override;
    if (!pack.certificate.pass && !density_override)
        throw DensityError("sampling set failed the delta-density certificate (worst gap " +
                           format_double(pack.certificate.worst_distance) + " > " +
                           format_double(delta) + ")");
    pack.grid = make_output_grid(basis.domain(), tau);
    pack.phi_s.resize(set.count(), basis.size());
    for (int l = 0; l < set.count(); ++l)
        for (int k = 0; k < basis.size(); ++k)
            pack.phi_s(l, k) = basis.evaluate(k, set.nodes[l][0], set.nodes[l][1]);
    if (basis.dimension() == 1) {
        pack.phi_c.resize(pack.grid.xs.size(), basis.size());
        for (size_t i = 0; i < pack.grid.xs.size(); ++i)
            for (int k = 0; k < basis.size(); ++k)
                pack.phi_c(i, k) = basis.evaluate(k, pack.grid.xs[i]);
    } else {
        pack.phi_c.resize(pack.grid.size(), basis.size());
        int ny = static_cast<int>(pack.grid.ys.size());
        for (size_t i = 0; i < pack.grid.xs.size(); ++i)
            for (int jj = 0; jj < ny; ++jj)
                for (int k = 0; k < basis.size(); ++k)
                    pack.phi_c(i * ny + jj, k) =
                        basis.evaluate(k, pack.grid.xs[i], pack.grid.ys[jj]);
    }
    pack.m = projector_matrix(basis, dual, set);
    pack.basis = &basis;
    pack.sampling = &set;
    return pack;
}

enum class RunStatus { converged, max_iterations, diverged, stalled_sparse };

/// Iteration record of one RESTORE run.
struct RestoreState {
    RunStatus status = RunStatus::max_iterations;
    int iterations = 0;
    std::vector<double> residual_history;  // ||f0_s - f_s||_inf per iteration
    std::vector<double> step_history;      // ||PQ_s(f0_s - f_s)||_inf per iteration
    Eigen::VectorXd f_s;                   // node values of the limit
    Eigen::VectorXd coeffs;                // accumulated basis coefficients
    Eigen::VectorXd f_c;                   // grid values (from coeffs)
    std::string diagnostic;
};

struct RestoreOptions {
    int n_max = 100000;
    double tol = 1e-10;          // stop when ||f0_s - f_s||_inf <= tol
    double step_tol = 0;         // optional: also stop when the update norm falls below this
    bool track_grid = false;     // additionally run the explicit f_c recursion
    Eigen::MatrixXd* grid_iterates = nullptr;  // with track_grid: one column per checkpoint
    int track_every = 1;
};

/// Algorithm RESTORE: from samples f0_s, iterate
///   f_c <- f_c + PQ_c(f0_s - f_s),  f_s <- f_s + PQ_s(f0_s - f_s)
/// with PQ_s = Phi_s M, PQ_c = Phi_c M.  The grid recursion is carried in
/// coefficient space (c <- c + M(f0_s - f_s); f_c = Phi_c c), which agrees
/// with the explicit recursion to roundoff and keeps per-iteration cost at
/// the banded matrix-vector level.
///
/// Failure detection: growth of the residual by 10x over 50 iterations, or a
/// stagnating residual-and-step pair (rank-deficient packs from too-sparse
/// node sets stall rather than grow).
inline RestoreState restore(const OperatorPack& pack, const Eigen::VectorXd& f0_s,
                            const RestoreOptions& opt = {}) {
    if (f0_s.size() != pack.phi_s.rows())
        throw std::invalid_argument("restore: sample vector does not match the pack nodes");
    if (pack.sampling) validate_samples(*pack.sampling, f0_s);
    RestoreState st;
    Eigen::VectorXd c = detail::banded_matvec(pack.m.m, pack.m.bandwidth, f0_s);
    Eigen::VectorXd f_s = detail::banded_matvec(pack.phi_s, pack.phi_s_bandwidth, c);
    if (opt.track_grid && opt.grid_iterates) {
        opt.grid_iterates->resize(pack.phi_c.rows(), 0);
    }
    double floor_scale = std::max(1.0, f0_s.lpNorm<Eigen::Infinity>());
    const int stall_window = 200;
    for (int n = 0;; ++n) {
        Eigen::VectorXd u = f0_s - f_s;
        double resid = u.lpNorm<Eigen::Infinity>();
        st.residual_history.push_back(resid);
        Eigen::VectorXd d = detail::banded_matvec(pack.m.m, pack.m.bandwidth, u);
        Eigen::VectorXd step = detail::banded_matvec(pack.phi_s, pack.phi_s_bandwidth, d);
        double step_norm = step.lpNorm<Eigen::Infinity>();
        st.step_history.push_back(step_norm);
        st.iterations = n;
        if (opt.track_grid && opt.grid_iterates && n % opt.track_every == 0) {
            opt.grid_iterates->conservativeResize(Eigen::NoChange, opt.grid_iterates->cols() + 1);
            opt.grid_iterates->col(opt.grid_iterates->cols() - 1) = pack.phi_c * c;
        }
        if (resid <= opt.tol) {
            st.status = RunStatus::converged;
            break;
        }
        if (opt.step_tol > 0 && step_norm <= opt.step_tol) {
            st.status = RunStatus::converged;
            st.diagnostic = "stopped on fixed-point step norm";
            break;
        }
        if (n >= opt.n_max) {
            st.status = RunStatus::max_iterations;
            break;
        }
        int nh = static_cast<int>(st.residual_history.size());
        if (nh > 50 && resid > 10.0 * st.residual_history[nh - 51] &&
            resid > 1e3 * 2.2e-16 * floor_scale) {
            st.status = RunStatus::diverged;
            st.diagnostic = "sampling set too sparse (eta >= 1): residual grew 10x over 50 iterations";
            break;
        }
        if (nh > stall_window && resid > 100 * opt.tol &&
            resid > 1e3 * 2.2e-16 * floor_scale) {
            double r_prev = st.residual_history[nh - 1 - stall_window];
            double s_prev = st.step_history[nh - 1 - stall_window];
            if (resid > 0.995 * r_prev && step_norm > 0.995 * s_prev &&
                step_norm > 1e3 * 2.2e-16 * floor_scale) {
                st.status = RunStatus::stalled_sparse;
                st.diagnostic =
                    "sampling set too sparse (eta >= 1): residual and update norms stagnate";
                break;
            }
        }
        c += d;
        f_s += step;
    }
    st.f_s = std::move(f_s);
    st.coeffs = std::move(c);
    st.f_c = pack.phi_c * st.coeffs;
    return st;
}

/// Geometric-mean contraction ratio of the sup residuals over the tail half
/// of the history.  Zero when the run hit an exact fixed point immediately.
inline double contraction_estimate(const std::vector<double>& residuals) {
    if (residuals.size() < 10)
        throw std::invalid_argument("contraction_estimate: need at least 10 recorded residuals");
    size_t lo = residuals.size() / 2;
    size_t hi = residuals.size() - 1;
    double floor = 1e-300;
    if (residuals[lo] <= floor || residuals[hi] <= floor) return 0.0;
    double ratio = residuals[hi] / residuals[lo];
    return std::pow(ratio, 1.0 / static_cast<double>(hi - lo));
}

inline double contraction_estimate(const RestoreState& st) {
    return contraction_estimate(st.residual_history);
}

/// ||PQ_s(f0_s - f_inf_s)||_inf: zero exactly at the fixed point, also for
/// samples of functions outside the space.
inline double fixed_point_residual(const OperatorPack& pack, const Eigen::VectorXd& f_inf_s,
                                   const Eigen::VectorXd& f0_s) {
    Eigen::VectorXd d = detail::banded_matvec(pack.m.m, pack.m.bandwidth, f0_s - f_inf_s);
    return detail::banded_matvec(pack.phi_s, pack.phi_s_bandwidth, d).lpNorm<Eigen::Infinity>();
}

}  // namespace sampler
