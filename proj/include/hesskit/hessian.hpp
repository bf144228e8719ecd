#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "hesskit/errors.hpp"
#include "hesskit/kinematics.hpp"
#include "hesskit/potentials.hpp"

namespace hesskit {

/// Diagonal weight matrices of the general edge Hessian:
/// W_kk = V'_k / s_k and Omega_kk = omega'_k / s_k.
struct WeightMatrices {
    Eigen::VectorXd w;     // omega_k
    Eigen::VectorXd omega; // omega'_k / s_k
};

inline WeightMatrices assemble_weight_matrices(const PotentialSpec& spec, const Configuration& c) {
    const RelativePositions zr = relative_positions(spec.graph, c);
    WeightMatrices wm;
    wm.w.resize(spec.graph.m());
    wm.omega.resize(spec.graph.m());
    for (int k = 0; k < spec.graph.m(); ++k) {
        const EdgeFamilyEval e = edge_family_eval(spec.families[k], zr.lengths(k), k);
        wm.w(k) = e.omega;
        wm.omega(k) = e.omegaprime / zr.lengths(k);
    }
    return wm;
}

namespace detail {

/// Stacked area-gradient direction for one triangle: block J(p_j-p_k) at i,
/// J(p_k-p_i) at j, J(p_i-p_j) at k, zeros elsewhere. dS = 1/2 Y^T dp.
inline Eigen::VectorXd area_direction(const AreaTerm& t, const Configuration& c, int n) {
    const Eigen::Matrix2d J = area_rotation();
    const Eigen::Vector2d pi = c.position(t.i), pj = c.position(t.j), pk = c.position(t.k);
    Eigen::VectorXd Y = Eigen::VectorXd::Zero(2 * n);
    Y.segment<2>(2 * (t.i - 1)) = J * (pj - pk);
    Y.segment<2>(2 * (t.j - 1)) = J * (pk - pi);
    Y.segment<2>(2 * (t.k - 1)) = J * (pi - pj);
    return Y;
}

/// Scatter the constant curvature pattern [[0,J,-J],[-J,0,J],[J,-J,0]] of one
/// triangle into the full 2n x 2n frame.
inline Eigen::MatrixXd area_curvature_pattern(const AreaTerm& t, int n) {
    const Eigen::Matrix2d J = area_rotation();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    auto put = [&](int a, int b, const Eigen::Matrix2d& blk) {
        M.block<2, 2>(2 * (a - 1), 2 * (b - 1)) += blk;
    };
    put(t.i, t.j, J);  put(t.i, t.k, -J);
    put(t.j, t.i, -J); put(t.j, t.k, J);
    put(t.k, t.i, J);  put(t.k, t.j, -J);
    return M;
}

} // namespace detail

/// Full-space gradient of the potential. Pinned coordinates are NOT zeroed
/// here; use reduce_vector / zero_pinned for the restricted views.
inline Eigen::VectorXd gradient(const PotentialSpec& spec, const Configuration& c) {
    spec.validate();
    c.validate(spec.graph.n);
    const int n = spec.graph.n, d = c.d;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * n);

    // Edge part: (H^T W H (x) I_d) p, accumulated edge by edge.
    const RelativePositions zr = relative_positions(spec.graph, c);
    for (int k = 0; k < spec.graph.m(); ++k) {
        const EdgeFamilyEval e = edge_family_eval(spec.families[k], zr.lengths(k), k);
        const Eigen::VectorXd zk = zr.edge(k);
        const int src = spec.graph.edges[k].first - 1, snk = spec.graph.edges[k].second - 1;
        g.segment(d * snk, d) += e.omega * zk;
        g.segment(d * src, d) -= e.omega * zk;
    }
    for (const auto& t : spec.area_terms) {
        const double S = signed_area(c.position(t.i), c.position(t.j), c.position(t.k));
        g += t.K * (S - t.S_star) * 0.5 * detail::area_direction(t, c, n);
    }
    return g;
}

/// Gradient with pinned coordinates zeroed.
inline Eigen::VectorXd gradient_pinned(const PotentialSpec& spec, const Configuration& c) {
    Eigen::VectorXd g = gradient(spec, c);
    for (int i : c.pinned) g.segment(c.d * (i - 1), c.d).setZero();
    return g;
}

/// General edge-tension Hessian:
///   (H^T (x) I_d) Z Omega Z^T (H (x) I_d) + (H^T W H) (x) I_d,
/// accumulated per edge so each term is symmetric by construction.
inline Eigen::MatrixXd hessian_edge_general(const PotentialSpec& spec, const Configuration& c) {
    spec.validate();
    c.validate(spec.graph.n);
    const int n = spec.graph.n, d = c.d;
    Eigen::MatrixXd Hv = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d) * n,
                                               static_cast<Eigen::Index>(d) * n);
    const RelativePositions zr = relative_positions(spec.graph, c);
    for (int k = 0; k < spec.graph.m(); ++k) {
        const EdgeFamilyEval e = edge_family_eval(spec.families[k], zr.lengths(k), k);
        const Eigen::VectorXd zk = zr.edge(k);
        const Eigen::MatrixXd blk =
            (e.omegaprime / zr.lengths(k)) * (zk * zk.transpose()) +
            e.omega * Eigen::MatrixXd::Identity(d, d);
        const int src = spec.graph.edges[k].first - 1, snk = spec.graph.edges[k].second - 1;
        Hv.block(d * src, d * src, d, d) += blk;
        Hv.block(d * snk, d * snk, d, d) += blk;
        Hv.block(d * src, d * snk, d, d) -= blk;
        Hv.block(d * snk, d * src, d, d) -= blk;
    }
    return Hv;
}

/// One d x d block of the edge Hessian, straight from the per-edge weights.
inline Eigen::MatrixXd hessian_block(const PotentialSpec& spec, const Configuration& c,
                                     int i, int j) {
    if (i < 1 || i > spec.graph.n || j < 1 || j > spec.graph.n)
        throw SpecError("hessian_block index out of range");
    const int d = c.d;
    const RelativePositions zr = relative_positions(spec.graph, c);
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < spec.graph.m(); ++k) {
        const auto [a, b] = spec.graph.edges[k];
        const bool diag = (i == j) && (a == i || b == i);
        const bool off = (i != j) && ((a == i && b == j) || (a == j && b == i));
        if (!diag && !off) continue;
        const EdgeFamilyEval e = edge_family_eval(spec.families[k], zr.lengths(k), k);
        const Eigen::VectorXd zk = zr.edge(k);
        const Eigen::MatrixXd term =
            (e.omegaprime / zr.lengths(k)) * (zk * zk.transpose()) +
            e.omega * Eigen::MatrixXd::Identity(d, d);
        blk += diag ? term : -term;
    }
    return blk;
}

/// Area part of the Hessian: per triangle K/4 Y Y^T + K/2 (S - S*) M.
inline Eigen::MatrixXd hessian_area(const PotentialSpec& spec, const Configuration& c) {
    spec.validate();
    c.validate(spec.graph.n);
    if (c.d != 2) throw SpecError("area Hessian requires dimension 2");
    const int n = spec.graph.n;
    Eigen::MatrixXd Hv = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (const auto& t : spec.area_terms) {
        const double S = signed_area(c.position(t.i), c.position(t.j), c.position(t.k));
        const Eigen::VectorXd Y = detail::area_direction(t, c, n);
        Hv += 0.25 * t.K * (Y * Y.transpose()) +
              0.5 * t.K * (S - t.S_star) * detail::area_curvature_pattern(t, n);
    }
    return Hv;
}

/// Edge part plus area part.
inline Eigen::MatrixXd hessian_total(const PotentialSpec& spec, const Configuration& c) {
    Eigen::MatrixXd Hv = hessian_edge_general(spec, c);
    if (!spec.area_terms.empty()) Hv += hessian_area(spec, c);
    return Hv;
}

/// Closed-form Hessian of the collision-avoidance catalog entry:
///   2 (H (x) I_d)^T blk-diag(rho_k I_d + 4 d_k^4/s_k^6 z_k z_k^T) (H (x) I_d).
/// An independent assembly route; must agree with hessian_edge_general.
inline Eigen::MatrixXd hessian_z4_direct(const PotentialSpec& spec, const Configuration& c) {
    spec.validate();
    c.validate(spec.graph.n);
    for (const auto& f : spec.families)
        if (f.kind != FamilyKind::CollisionZ4)
            throw SpecError("hessian_z4_direct requires every edge to use the collision family");
    const int d = c.d, m = spec.graph.m();
    const RelativePositions zr = relative_positions(spec.graph, c);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d) * m,
                                              static_cast<Eigen::Index>(d) * m);
    for (int k = 0; k < m; ++k) {
        const double s = zr.lengths(k);
        if (s < kSingularityFloor) throw DomainError("zero-length edge", k);
        const double d4 = std::pow(spec.families[k].d, 4);
        const double rho = (std::pow(s, 4) - d4) / std::pow(s, 4);
        const Eigen::VectorXd zk = zr.edge(k);
        D.block(d * k, d * k, d, d) =
            rho * Eigen::MatrixXd::Identity(d, d) + (4.0 * d4 / std::pow(s, 6)) * (zk * zk.transpose());
    }
    const Eigen::MatrixXd HI = incidence_kron(spec.graph, d);
    return 2.0 * HI.transpose() * D * HI;
}

/// Principal submatrix on the free coordinates.
inline Eigen::MatrixXd reduce_matrix(const Eigen::MatrixXd& M, const Configuration& c, int n) {
    const std::vector<int> idx = c.free_coordinates(n);
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (size_t r = 0; r < idx.size(); ++r)
        for (size_t q = 0; q < idx.size(); ++q) out(r, q) = M(idx[r], idx[q]);
    return out;
}

inline Eigen::VectorXd reduce_vector(const Eigen::VectorXd& v, const Configuration& c, int n) {
    const std::vector<int> idx = c.free_coordinates(n);
    Eigen::VectorXd out(idx.size());
    for (size_t r = 0; r < idx.size(); ++r) out(r) = v(idx[r]);
    return out;
}

/// Reduced Hessian: hessian_total restricted to free coordinates.
inline Eigen::MatrixXd hessian_reduced(const PotentialSpec& spec, const Configuration& c) {
    return reduce_matrix(hessian_total(spec, c), c, spec.graph.n);
}

} // namespace hesskit
