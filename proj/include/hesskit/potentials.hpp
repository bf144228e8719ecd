#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hesskit/errors.hpp"
#include "hesskit/graph.hpp"
#include "hesskit/kinematics.hpp"

namespace hesskit {

/// Scalar edge function for the manipulability family, supplied as the
/// (e, e', e'') triple. Must be strictly increasing and twice differentiable
/// on the lengths it is evaluated at.
struct EFunction {
    std::string name;
    std::function<double(double)> e, e1, e2;
};

/// e(s) = s^2 - d^2; makes the manipulability family coincide with the
/// quartic-distance family.
inline EFunction e_quadratic(double d) {
    return {"quadratic",
            [d](double s) { return s * s - d * d; },
            [](double s) { return 2.0 * s; },
            [](double) { return 2.0; }};
}

/// e(s) = log(s/d), a second strictly increasing instance.
inline EFunction e_log(double d) {
    return {"log",
            [d](double s) { return std::log(s / d); },
            [](double s) { return 1.0 / s; },
            [](double s) { return -1.0 / (s * s); }};
}

enum class FamilyKind {
    QuarticDistanceSquared,  // V = (s^2 - d^2)^2 / 4
    QuadraticDistanceError,  // V = (s - d)^2 / 2
    Manipulability,          // V = e(s)^2 / 2
    ConnectednessPreserving, // V = s^2 / (delta - s)
    CollisionZ4,             // V = (s^2 - d^2)^2 / s^2
};

struct EdgeFamily {
    FamilyKind kind;
    double d = 1.0;     // target distance (unused by ConnectednessPreserving)
    double delta = 1.0; // range limit (ConnectednessPreserving only)
    EFunction efun;     // Manipulability only

    static EdgeFamily quartic(double d) { return {FamilyKind::QuarticDistanceSquared, d, 0, {}}; }
    static EdgeFamily quadratic_error(double d) { return {FamilyKind::QuadraticDistanceError, d, 0, {}}; }
    static EdgeFamily manipulability(EFunction f) { return {FamilyKind::Manipulability, 0, 0, std::move(f)}; }
    static EdgeFamily connectedness(double delta) { return {FamilyKind::ConnectednessPreserving, 0, delta, {}}; }
    static EdgeFamily collision_z4(double d) { return {FamilyKind::CollisionZ4, d, 0, {}}; }
};

/// The four numbers the general edge Hessian formula consumes, at one length s:
/// the value V, the slope V' = dV/ds, the weight omega = V'/s, and omega' = d(omega)/ds.
struct EdgeFamilyEval {
    double V = 0, Vprime = 0, omega = 0, omegaprime = 0;
};

/// Lengths closer than this to a singularity (s = 0, or delta for the
/// connectedness family) are rejected.
inline constexpr double kSingularityFloor = 1e-12;

inline EdgeFamilyEval edge_family_eval(const EdgeFamily& f, double s, int edge_index = -1) {
    if (s < kSingularityFloor)
        throw DomainError("edge length " + std::to_string(s) + " at or below the singular floor",
                          edge_index);
    EdgeFamilyEval r;
    switch (f.kind) {
    case FamilyKind::QuarticDistanceSquared: {
        const double e = s * s - f.d * f.d;
        r.V = 0.25 * e * e;
        r.Vprime = e * s;
        r.omega = e;
        r.omegaprime = 2.0 * s;
        break;
    }
    case FamilyKind::QuadraticDistanceError: {
        r.V = 0.5 * (s - f.d) * (s - f.d);
        r.Vprime = s - f.d;
        r.omega = (s - f.d) / s;
        r.omegaprime = f.d / (s * s);
        break;
    }
    case FamilyKind::Manipulability: {
        const double e = f.efun.e(s), e1 = f.efun.e1(s), e2 = f.efun.e2(s);
        r.V = 0.5 * e * e;
        r.Vprime = e * e1;
        r.omega = e * e1 / s;
        r.omegaprime = ((e1 * e1 + e * e2) * s - e * e1) / (s * s);
        break;
    }
    case FamilyKind::ConnectednessPreserving: {
        const double gap = f.delta - s;
        if (gap < kSingularityFloor)
            throw DomainError("edge length " + std::to_string(s) +
                                  " reaches the connectedness limit delta=" + std::to_string(f.delta),
                              edge_index);
        r.V = s * s / gap;
        r.Vprime = (2.0 * f.delta - s) * s / (gap * gap);
        r.omega = (2.0 * f.delta - s) / (gap * gap);
        r.omegaprime = (3.0 * f.delta - s) / (gap * gap * gap);
        break;
    }
    case FamilyKind::CollisionZ4: {
        const double d4 = std::pow(f.d, 4), s2 = s * s;
        const double e = s2 - f.d * f.d;
        r.V = e * e / s2;
        r.Vprime = 2.0 * s - 2.0 * d4 / (s2 * s);
        r.omega = 2.0 * (s2 * s2 - d4) / (s2 * s2);
        r.omegaprime = 8.0 * d4 / std::pow(s, 5);
        break;
    }
    }
    return r;
}

/// One signed-area target for an ordered vertex triple (d = 2 only).
struct AreaTerm {
    int i, j, k;
    double S_star;
    double K; // > 0

    void validate(int n) const {
        if (i == j || j == k || i == k)
            throw SpecError("area term vertices must be distinct");
        for (int v : {i, j, k})
            if (v < 1 || v > n) throw SpecError("area term vertex " + std::to_string(v) + " out of range");
        if (K <= 0) throw SpecError("area gain K must be positive");
    }
};

/// The full problem: graph, one family per edge, optional area terms, dimension.
struct PotentialSpec {
    Graph graph;
    std::vector<EdgeFamily> families; // one per edge, in edge order
    std::vector<AreaTerm> area_terms;
    int d = 2;

    void validate() const {
        if (families.size() != graph.edges.size())
            throw SpecError("need exactly one potential family per edge");
        if (!area_terms.empty() && d != 2)
            throw SpecError("signed-area terms are defined only in dimension 2");
        for (const auto& t : area_terms) t.validate(graph.n);
    }
};

/// V = sum over edges of V_k(s_k) + sum over triangles of K/2 (S - S*)^2.
/// Each undirected edge is counted once.
inline double total_potential(const PotentialSpec& spec, const Configuration& c) {
    spec.validate();
    const RelativePositions zr = relative_positions(spec.graph, c);
    double V = 0.0;
    for (int k = 0; k < spec.graph.m(); ++k)
        V += edge_family_eval(spec.families[k], zr.lengths(k), k).V;
    for (const auto& t : spec.area_terms) {
        const double S = signed_area(c.position(t.i), c.position(t.j), c.position(t.k));
        V += 0.5 * t.K * (S - t.S_star) * (S - t.S_star);
    }
    return V;
}

} // namespace hesskit
