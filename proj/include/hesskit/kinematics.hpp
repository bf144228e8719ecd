#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hesskit/errors.hpp"
#include "hesskit/graph.hpp"

namespace hesskit {

/// Stacked agent positions p in R^{dn}, plus an optional pinned set.
/// Pinned agents enter all geometric quantities but their coordinates are
/// frozen: reduced gradients/Hessians restrict to the free coordinates.
struct Configuration {
    int d = 2;
    Eigen::VectorXd p; // length d*n
    std::set<int> pinned; // 1-based vertex ids

    Eigen::VectorXd position(int i) const { return p.segment(d * (i - 1), d); }

    void validate(int n) const {
        if (d != 2 && d != 3)
            throw SpecError("ambient dimension must be 2 or 3, got " + std::to_string(d));
        if (p.size() != static_cast<Eigen::Index>(d) * n)
            throw SpecError("position vector has length " + std::to_string(p.size()) +
                            ", expected " + std::to_string(d * n));
        for (int i : pinned)
            if (i < 1 || i > n)
                throw SpecError("pinned vertex " + std::to_string(i) + " out of range");
    }

    bool is_pinned(int i) const { return pinned.count(i) > 0; }

    /// 0-based indices of the free coordinates, in ascending order.
    std::vector<int> free_coordinates(int n) const {
        std::vector<int> idx;
        idx.reserve(static_cast<size_t>(d) * n);
        for (int i = 1; i <= n; ++i)
            if (!is_pinned(i))
                for (int c = 0; c < d; ++c) idx.push_back(d * (i - 1) + c);
        return idx;
    }
};

/// Per-edge relative positions z_k = p_sink - p_source and their lengths.
struct RelativePositions {
    Eigen::VectorXd z;       // length d*m
    Eigen::VectorXd lengths; // s_k = ||z_k||
    int d = 2;

    Eigen::VectorXd edge(int k) const { return z.segment(d * k, d); }
};

inline RelativePositions relative_positions(const Graph& g, const Configuration& c) {
    c.validate(g.n);
    RelativePositions out;
    out.d = c.d;
    out.z.resize(static_cast<Eigen::Index>(c.d) * g.m());
    out.lengths.resize(g.m());
    for (int k = 0; k < g.m(); ++k) {
        const Eigen::VectorXd zk = c.position(g.edges[k].second) - c.position(g.edges[k].first);
        out.z.segment(c.d * k, c.d) = zk;
        out.lengths(k) = zk.norm();
    }
    return out;
}

/// Z = blk-diag(z_1, ..., z_m), a dm x m matrix.
inline Eigen::MatrixXd edge_block_matrix(const RelativePositions& zr) {
    const int m = static_cast<int>(zr.lengths.size());
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(zr.d) * m, m);
    for (int k = 0; k < m; ++k) Z.block(zr.d * k, k, zr.d, 1) = zr.edge(k);
    return Z;
}

/// H (x) I_d, expanded dense.
inline Eigen::MatrixXd incidence_kron(const Graph& g, int d) {
    Eigen::MatrixXd HI = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d) * g.m(),
                                               static_cast<Eigen::Index>(d) * g.n);
    for (int k = 0; k < g.m(); ++k) {
        const int src = g.edges[k].first - 1, snk = g.edges[k].second - 1;
        for (int c = 0; c < d; ++c) {
            HI(d * k + c, d * src + c) = -1.0;
            HI(d * k + c, d * snk + c) = 1.0;
        }
    }
    return HI;
}

/// R = Z^T (H (x) I_d); row k carries z_k^T at the sink block, -z_k^T at the source.
inline Eigen::MatrixXd rigidity_matrix(const Graph& g, const Configuration& c) {
    const RelativePositions zr = relative_positions(g, c);
    return edge_block_matrix(zr).transpose() * incidence_kron(g, c.d);
}

/// 90-degree rotation used by the signed-area terms.
inline Eigen::Matrix2d area_rotation() {
    Eigen::Matrix2d J;
    J << 0.0, 1.0, -1.0, 0.0;
    return J;
}

/// Signed area of the triangle (p_i, p_j, p_k), orientation-sensitive.
inline double signed_area(const Eigen::Vector2d& pi, const Eigen::Vector2d& pj,
                          const Eigen::Vector2d& pk) {
    return -0.5 * (pj - pk).dot(area_rotation() * (pi - pj));
}

} // namespace hesskit
