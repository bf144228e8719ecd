#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hesskit/errors.hpp"

namespace hesskit {

/// Undirected interaction graph with a fixed orientation per edge.
/// Vertices are 1-based externally; edge order is construction order and
/// defines the row order of the incidence matrix and every per-edge stack.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // (source, sink), 1-based

    int m() const { return static_cast<int>(edges.size()); }
};

inline Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw SpecError("graph needs at least one vertex, got n=" + std::to_string(n));
    Graph g;
    g.n = n;
    std::set<std::pair<int, int>> seen;
    for (const auto& [i, j] : edges) {
        const std::string name = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        if (i < 1 || i > n || j < 1 || j > n)
            throw SpecError("edge " + name + " references a vertex outside 1.." + std::to_string(n));
        if (i == j)
            throw SpecError("edge " + name + " is a self-loop");
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second)
            throw SpecError("edge " + name + " duplicates an earlier undirected edge");
        g.edges.emplace_back(i, j);
    }
    return g;
}

/// m x n incidence matrix: row k has -1 at the source of edge k, +1 at the sink.
inline Eigen::MatrixXd incidence_matrix(const Graph& g) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(g.m(), g.n);
    for (int k = 0; k < g.m(); ++k) {
        H(k, g.edges[k].first - 1) = -1.0;
        H(k, g.edges[k].second - 1) = 1.0;
    }
    return H;
}

/// Graph Laplacian, assembled as H^T H. Orientation-invariant.
inline Eigen::MatrixXd laplacian(const Graph& g) {
    const Eigen::MatrixXd H = incidence_matrix(g);
    return H.transpose() * H;
}

inline std::set<int> neighbors(const Graph& g, int i) {
    if (i < 1 || i > g.n)
        throw SpecError("vertex " + std::to_string(i) + " out of range 1.." + std::to_string(g.n));
    std::set<int> out;
    for (const auto& [a, b] : g.edges) {
        if (a == i) out.insert(b);
        if (b == i) out.insert(a);
    }
    return out;
}

} // namespace hesskit
