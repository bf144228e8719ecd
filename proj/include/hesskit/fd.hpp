#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "hesskit/errors.hpp"
#include "hesskit/potentials.hpp"

namespace hesskit {

/// Central-difference parameters. The step is h * max(1, ||p||_inf).
struct FDParams {
    double h = 1e-4;
};

namespace detail {

inline int capped_thread_count(int work_items) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("HESSKIT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = std::min(cap, v);
    }
    return std::max(1, std::min(cap, work_items));
}

/// Every stencil point must stay inside the family domains; reject base
/// configurations whose edge lengths sit within 2h of a domain boundary.
inline void check_stencil_margin(const PotentialSpec& spec, const Configuration& c, double step) {
    const RelativePositions zr = relative_positions(spec.graph, c);
    const double margin = 2.0 * step;
    for (int k = 0; k < spec.graph.m(); ++k) {
        const double s = zr.lengths(k);
        const EdgeFamily& f = spec.families[k];
        if (s <= margin + kSingularityFloor)
            throw DomainError("edge length " + std::to_string(s) +
                                  " within the stencil margin of the s=0 singularity",
                              k);
        if (f.kind == FamilyKind::ConnectednessPreserving && f.delta - s <= margin + kSingularityFloor)
            throw DomainError("edge length " + std::to_string(s) +
                                  " within the stencil margin of delta=" + std::to_string(f.delta),
                              k);
    }
}

} // namespace detail

/// Central-difference gradient of total_potential. Pinned coordinates are
/// reported as zero without being differenced.
inline Eigen::VectorXd fd_gradient(const PotentialSpec& spec, const Configuration& c,
                                   const FDParams& params = {}) {
    spec.validate();
    c.validate(spec.graph.n);
    const double step = params.h * std::max(1.0, c.p.lpNorm<Eigen::Infinity>());
    detail::check_stencil_margin(spec, c, step);
    const int dim = static_cast<int>(c.p.size());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    Configuration work = c;
    for (int i = 0; i < dim; ++i) {
        if (c.is_pinned(i / c.d + 1)) continue;
        work.p = c.p;
        work.p(i) = c.p(i) + step;
        const double vp = total_potential(spec, work);
        work.p(i) = c.p(i) - step;
        const double vm = total_potential(spec, work);
        g(i) = (vp - vm) / (2.0 * step);
    }
    return g;
}

/// Central-difference Hessian, symmetrized by averaging with its transpose.
/// Rows are computed in parallel; HESSKIT_THREADS caps the thread count.
inline Eigen::MatrixXd fd_hessian(const PotentialSpec& spec, const Configuration& c,
                                  const FDParams& params = {}) {
    spec.validate();
    c.validate(spec.graph.n);
    const double step = params.h * std::max(1.0, c.p.lpNorm<Eigen::Infinity>());
    detail::check_stencil_margin(spec, c, step);
    const int dim = static_cast<int>(c.p.size());
    Eigen::MatrixXd Hv = Eigen::MatrixXd::Zero(dim, dim);

    auto entry = [&](int i, int j) {
        Configuration work = c;
        work.p = c.p;
        work.p(i) += step; work.p(j) += step;
        const double vpp = total_potential(spec, work);
        work.p = c.p;
        work.p(i) += step; work.p(j) -= step;
        const double vpm = total_potential(spec, work);
        work.p = c.p;
        work.p(i) -= step; work.p(j) += step;
        const double vmp = total_potential(spec, work);
        work.p = c.p;
        work.p(i) -= step; work.p(j) -= step;
        const double vmm = total_potential(spec, work);
        return (vpp - vpm - vmp + vmm) / (4.0 * step * step);
    };

    const int nthreads = detail::capped_thread_count(dim);
    auto run_rows = [&](int first, int last) {
        for (int i = first; i < last; ++i)
            for (int j = i; j < dim; ++j) Hv(i, j) = entry(i, j);
    };
    if (nthreads == 1) {
        run_rows(0, dim);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (dim + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(run_rows, t * chunk, std::min(dim, (t + 1) * chunk));
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < i; ++j) Hv(i, j) = Hv(j, i);
    return 0.5 * (Hv + Hv.transpose());
}

/// Worst-case comparison of an analytic gradient/Hessian pair against the
/// finite-difference reference. Failures are data, not exceptions.
struct VerifyReport {
    double grad_max_abs_err = 0, grad_max_rel_err = 0;
    double hess_max_abs_err = 0, hess_max_rel_err = 0;
    int hess_worst_row = -1, hess_worst_col = -1;
    bool pass = false;
};

inline VerifyReport verify(const PotentialSpec& spec, const Configuration& c,
                           const Eigen::VectorXd& grad_analytic,
                           const Eigen::MatrixXd& hess_analytic,
                           const FDParams& params = {},
                           double grad_tol = 1e-7, double hess_tol = 1e-5) {
    VerifyReport rep;
    const Eigen::VectorXd gfd = fd_gradient(spec, c, params);
    rep.grad_max_abs_err = (grad_analytic - gfd).lpNorm<Eigen::Infinity>();
    rep.grad_max_rel_err =
        rep.grad_max_abs_err / std::max(1.0, gfd.lpNorm<Eigen::Infinity>());

    const Eigen::MatrixXd hfd = fd_hessian(spec, c, params);
    const Eigen::MatrixXd diff = (hess_analytic - hfd).cwiseAbs();
    rep.hess_max_abs_err = diff.maxCoeff(&rep.hess_worst_row, &rep.hess_worst_col);
    rep.hess_max_rel_err =
        rep.hess_max_abs_err / std::max(1.0, hess_analytic.cwiseAbs().maxCoeff());

    rep.pass = rep.grad_max_rel_err < grad_tol && rep.hess_max_rel_err < hess_tol;
    return rep;
}

} // namespace hesskit
