#pragma once

#include "sampler/restore.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace sampler {

/// omega_k = int_Omega phi_{j,k}, under the 2^{dj/2} normalization of the
/// basis; summing 2^{-dj/2} omega_k recovers the domain measure.
struct WeightVector {
    Eigen::VectorXd w;
};

inline WeightVector basis_weights(const Basis& basis) {
    WeightVector wv;
    wv.w.resize(basis.size());
    double nf = basis.normalization();
    if (basis.dimension() == 1) {
        const BasisAxis& ax = basis.axis(0);
        for (int k = 0; k < basis.size(); ++k)
            wv.w[k] = nf * detail::axis_cell_integral(ax, k, ax.a, ax.b);
    } else {
        const BasisAxis& ax = basis.axis(0);
        const BasisAxis& ay = basis.axis(1);
        Eigen::VectorXd wx(ax.dim()), wy(ay.dim());
        for (int i = 0; i < ax.dim(); ++i) wx[i] = detail::axis_cell_integral(ax, i, ax.a, ax.b);
        for (int i = 0; i < ay.dim(); ++i) wy[i] = detail::axis_cell_integral(ay, i, ay.a, ay.b);
        for (int k = 0; k < basis.size(); ++k) {
            auto [kx, ky] = basis.unravel(k);
            wv.w[k] = nf * wx[kx] * wy[ky];
        }
    }
    return wv;
}

/// Per-iteration trace of Algorithm INTEGRATE, mirroring the published
/// iteration / estimate / error table layout.
struct IntegrationTrace {
    std::vector<double> estimates;   // estimate after each iteration (index 0 = initial)
    std::vector<double> abs_errors;  // filled when a reference value is supplied
    std::optional<double> reference;
    RunStatus status = RunStatus::max_iterations;
    int iterations = 0;
    std::string diagnostic;
};

struct IntegrateOptions {
    int n_max = 100000;
    double tol = 1e-12;  // stop when |increment| <= tol * (1 + |int|)
    std::optional<double> reference;
};

/// Algorithm INTEGRATE: int <- int + w^T M (f0_s - f_s) alongside the RESTORE
/// node recursion.  Stops on a relative increment test; the full trace is
/// retained for reporting.
inline std::pair<double, IntegrationTrace> integrate(const OperatorPack& pack,
                                                     const WeightVector& weights,
                                                     const Eigen::VectorXd& f0_s,
                                                     const IntegrateOptions& opt = {}) {
    if (f0_s.size() != pack.phi_s.rows())
        throw std::invalid_argument("integrate: sample vector does not match the pack nodes");
    if (weights.w.size() != pack.m.m.rows())
        throw std::invalid_argument("integrate: weights built on a different basis");
    IntegrationTrace tr;
    tr.reference = opt.reference;
    Eigen::VectorXd d = detail::banded_matvec(pack.m.m, pack.m.bandwidth, f0_s);
    double est = weights.w.dot(d);
    Eigen::VectorXd f_s = detail::banded_matvec(pack.phi_s, pack.phi_s_bandwidth, d);
    auto record = [&](double v) {
        tr.estimates.push_back(v);
        if (tr.reference) tr.abs_errors.push_back(std::abs(v - *tr.reference));
    };
    record(est);
    std::vector<double> resid_hist;
    double floor_scale = std::max(1.0, f0_s.lpNorm<Eigen::Infinity>());
    for (int n = 1;; ++n) {
        Eigen::VectorXd u = f0_s - f_s;
        double resid = u.lpNorm<Eigen::Infinity>();
        resid_hist.push_back(resid);
        d = detail::banded_matvec(pack.m.m, pack.m.bandwidth, u);
        double inc = weights.w.dot(d);
        est += inc;
        f_s += detail::banded_matvec(pack.phi_s, pack.phi_s_bandwidth, d);
        record(est);
        tr.iterations = n;
        if (std::abs(inc) <= opt.tol * (1.0 + std::abs(est))) {
            tr.status = RunStatus::converged;
            break;
        }
        if (n >= opt.n_max) {
            tr.status = RunStatus::max_iterations;
            break;
        }
        size_t nh = resid_hist.size();
        if (nh > 50 && resid > 10.0 * resid_hist[nh - 51] && resid > 1e3 * 2.2e-16 * floor_scale) {
            tr.status = RunStatus::diverged;
            tr.diagnostic = "sampling set too sparse (eta >= 1)";
            break;
        }
    }
    return {est, tr};
}

/// Moment study: runs INTEGRATE on monomial samples up to the requested
/// degree and reports the absolute error against the exact moments.
struct ExactnessRow {
    int degree;
    double estimate;
    double exact;
    double abs_error;
};

inline std::vector<ExactnessRow> polynomial_exactness_check(const OperatorPack& pack,
                                                            const WeightVector& weights,
                                                            int max_degree,
                                                            const IntegrateOptions& opt = {}) {
    const SamplingSet& set = *pack.sampling;
    const BoxDomain& dom = pack.basis->domain();
    std::vector<ExactnessRow> rows;
    for (int p = 0; p <= max_degree; ++p) {
        Eigen::VectorXd f(set.count());
        for (int l = 0; l < set.count(); ++l) f[l] = std::pow(set.nodes[l][0], p);
        auto [est, tr] = integrate(pack, weights, f, opt);
        double exact = (std::pow(dom.hi[0], p + 1) - std::pow(dom.lo[0], p + 1)) / (p + 1);
        if (dom.dim == 2) exact *= dom.length(1);  // monomials in x on a rectangle
        rows.push_back({p, est, exact, std::abs(est - exact)});
    }
    return rows;
}

}  // namespace sampler
