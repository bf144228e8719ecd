#pragma once

// Shared generators and independent reference evaluators for the test suite.
// Everything here stays off the library's assembly paths on purpose: the
// naive evaluators recompute values straight from positions.

#include <random>
#include <utility>
#include <vector>

#include "hesskit/hesskit.hpp"

namespace testutil {

using namespace hesskit;

/// Connected-ish random graph on n <= 8 vertices with at least one edge.
inline Graph random_graph(std::mt19937& rng, int max_n = 8, int max_m = 16) {
    std::uniform_int_distribution<int> nd(2, max_n);
    const int n = nd(rng);
    std::vector<std::pair<int, int>> all;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) all.emplace_back(i, j);
    std::shuffle(all.begin(), all.end(), rng);
    std::uniform_int_distribution<int> md(1, std::min<int>(max_m, static_cast<int>(all.size())));
    all.resize(md(rng));
    return build_graph(n, all);
}

/// Positions drawn so that no two adjacent agents coincide.
inline Configuration random_configuration(std::mt19937& rng, const Graph& g, int d) {
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    Configuration c;
    c.d = d;
    for (;;) {
        c.p.resize(static_cast<Eigen::Index>(d) * g.n);
        for (Eigen::Index i = 0; i < c.p.size(); ++i) c.p(i) = U(rng);
        const RelativePositions zr = relative_positions(g, c);
        if (g.m() == 0 || zr.lengths.minCoeff() > 0.3) return c;
    }
}

/// A family of the requested kind whose parameters keep the observed edge
/// length comfortably inside the domain (delta well above s, d near s).
inline EdgeFamily family_for_length(std::mt19937& rng, FamilyKind kind, double s) {
    std::uniform_real_distribution<double> U(0.5, 1.5);
    switch (kind) {
    case FamilyKind::QuarticDistanceSquared: return EdgeFamily::quartic(s * U(rng));
    case FamilyKind::QuadraticDistanceError: return EdgeFamily::quadratic_error(s * U(rng));
    case FamilyKind::Manipulability:
        return EdgeFamily::manipulability(U(rng) < 1.0 ? e_quadratic(s * U(rng))
                                                       : e_log(s * U(rng)));
    case FamilyKind::ConnectednessPreserving:
        return EdgeFamily::connectedness(s * (1.5 + U(rng)));
    case FamilyKind::CollisionZ4: return EdgeFamily::collision_z4(s * U(rng));
    }
    return EdgeFamily::quartic(1.0);
}

inline PotentialSpec random_spec(std::mt19937& rng, FamilyKind kind, const Graph& g,
                                 const Configuration& c) {
    const RelativePositions zr = relative_positions(g, c);
    PotentialSpec spec;
    spec.graph = g;
    spec.d = c.d;
    for (int k = 0; k < g.m(); ++k)
        spec.families.push_back(family_for_length(rng, kind, zr.lengths(k)));
    return spec;
}

/// Independent re-evaluation of the total potential, straight from positions.
/// No shared code with total_potential beyond the family parameters.
inline double naive_total_potential(const PotentialSpec& spec, const Configuration& c) {
    double V = 0;
    for (int k = 0; k < spec.graph.m(); ++k) {
        const auto [a, b] = spec.graph.edges[k];
        const double s = (c.position(b) - c.position(a)).norm();
        const EdgeFamily& f = spec.families[k];
        switch (f.kind) {
        case FamilyKind::QuarticDistanceSquared: {
            const double e = s * s - f.d * f.d;
            V += e * e / 4.0;
            break;
        }
        case FamilyKind::QuadraticDistanceError:
            V += (s - f.d) * (s - f.d) / 2.0;
            break;
        case FamilyKind::Manipulability: {
            const double e = f.efun.e(s);
            V += e * e / 2.0;
            break;
        }
        case FamilyKind::ConnectednessPreserving:
            V += s * s / (f.delta - s);
            break;
        case FamilyKind::CollisionZ4: {
            const double e = s * s - f.d * f.d;
            V += e * e / (s * s);
            break;
        }
        }
    }
    for (const auto& t : spec.area_terms) {
        // Cross-product form of the signed area of (i, j, k).
        const Eigen::Vector2d u = c.position(t.j) - c.position(t.i);
        const Eigen::Vector2d v = c.position(t.k) - c.position(t.i);
        const double S = 0.5 * (u.x() * v.y() - u.y() * v.x());
        V += 0.5 * t.K * (S - t.S_star) * (S - t.S_star);
    }
    return V;
}

/// Central difference of a scalar function of one variable.
template <typename F>
double scalar_central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline const std::vector<FamilyKind> kAllFamilies = {
    FamilyKind::QuarticDistanceSquared, FamilyKind::QuadraticDistanceError,
    FamilyKind::Manipulability, FamilyKind::ConnectednessPreserving, FamilyKind::CollisionZ4};

} // namespace testutil
