#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hesskit/errors.hpp"
#include "hesskit/hessian.hpp"
#include "hesskit/potentials.hpp"

namespace hesskit {

/// Sampled gradient-flow trajectory of pdot = -grad V.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<double> potential;
    std::vector<double> grad_norm; // ||grad V||_inf, pinned coordinates excluded
    bool converged = false;
    int steps_taken = 0;
};

struct IntegratorParams {
    double dt = 1e-3;
    int max_steps = 100000;
    double grad_tol = 1e-6;
    int stride = 1; // sample every `stride` steps
};

/// Fixed-step RK4 on the gradient flow, pinned coordinates frozen.
/// Stops when ||grad V||_inf < grad_tol or max_steps is reached.
inline Trajectory integrate(const PotentialSpec& spec, const Configuration& c0,
                            const IntegratorParams& params = {}) {
    if (params.dt <= 0) throw SpecError("integrator step dt must be positive");
    if (params.stride < 1) throw SpecError("sample stride must be >= 1");
    spec.validate();
    c0.validate(spec.graph.n);

    Configuration c = c0;
    auto rhs = [&](const Eigen::VectorXd& p) {
        Configuration at = c;
        at.p = p;
        return Eigen::VectorXd(-gradient_pinned(spec, at));
    };

    Trajectory traj;
    auto sample = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(c.p);
        traj.potential.push_back(total_potential(spec, c));
        traj.grad_norm.push_back(gradient_pinned(spec, c).lpNorm<Eigen::Infinity>());
    };

    sample(0.0);
    if (traj.grad_norm.back() < params.grad_tol) {
        traj.converged = true;
        return traj;
    }

    for (int step = 1; step <= params.max_steps; ++step) {
        const Eigen::VectorXd k1 = rhs(c.p);
        const Eigen::VectorXd k2 = rhs(c.p + 0.5 * params.dt * k1);
        const Eigen::VectorXd k3 = rhs(c.p + 0.5 * params.dt * k2);
        const Eigen::VectorXd k4 = rhs(c.p + params.dt * k3);
        c.p += (params.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.steps_taken = step;

        if (!c.p.allFinite())
            throw DomainError("non-finite state at step " + std::to_string(step));

        const double gn = gradient_pinned(spec, c).lpNorm<Eigen::Infinity>();
        if (step % params.stride == 0 || gn < params.grad_tol || step == params.max_steps)
            sample(step * params.dt);
        if (gn < params.grad_tol) {
            traj.converged = true;
            break;
        }
    }
    return traj;
}

enum class Verdict { StrictMinimum, PsdDegenerate, Saddle };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::StrictMinimum: return "strict-minimum";
    case Verdict::PsdDegenerate: return "psd-degenerate";
    case Verdict::Saddle: return "saddle";
    }
    return "?";
}

/// Eigenvalue sign counts of a symmetric matrix and the resulting verdict.
struct EquilibriumReport {
    Eigen::VectorXd configuration;
    double grad_norm = 0;
    Eigen::VectorXd eigenvalues; // ascending
    int n_minus = 0, n_zero = 0, n_plus = 0;
    Verdict verdict = Verdict::PsdDegenerate;
};

/// Inertia of a symmetric matrix against the threshold tau_rel * max(1, max|lambda|).
inline EquilibriumReport classify(const Eigen::MatrixXd& hess, double tau_rel = 1e-8) {
    if ((hess - hess.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw SpecError("classify requires a symmetric matrix");
    EquilibriumReport rep;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hess + hess.transpose()));
    rep.eigenvalues = es.eigenvalues();
    const double tau = tau_rel * std::max(1.0, rep.eigenvalues.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
        const double lam = rep.eigenvalues(i);
        if (lam < -tau) ++rep.n_minus;
        else if (lam > tau) ++rep.n_plus;
        else ++rep.n_zero;
    }
    if (rep.n_minus > 0) rep.verdict = Verdict::Saddle;
    else if (rep.n_zero == 0) rep.verdict = Verdict::StrictMinimum;
    else rep.verdict = Verdict::PsdDegenerate;
    return rep;
}

/// Integrate to (near-)equilibrium, then classify the reduced Hessian there.
inline EquilibriumReport find_and_classify(const PotentialSpec& spec, const Configuration& c0,
                                           const IntegratorParams& params = {},
                                           double tau_rel = 1e-8) {
    const Trajectory traj = integrate(spec, c0, params);
    Configuration c = c0;
    c.p = traj.states.back();
    EquilibriumReport rep = classify(hessian_reduced(spec, c), tau_rel);
    rep.configuration = c.p;
    rep.grad_norm = traj.grad_norm.back();
    return rep;
}

} // namespace hesskit
