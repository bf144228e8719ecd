#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hesskit/dynamics.hpp"
#include "hesskit/errors.hpp"
#include "hesskit/fd.hpp"
#include "hesskit/potentials.hpp"

namespace hesskit {

/// Wire-format bundle: a potential spec plus the configuration it ships with.
struct Problem {
    PotentialSpec spec;
    Configuration config;
};

namespace io {

inline EdgeFamily family_from_json(const std::string& name, const nlohmann::json& params) {
    if (name == "quartic_distance_squared") return EdgeFamily::quartic(params.at("d").get<double>());
    if (name == "quadratic_distance_error")
        return EdgeFamily::quadratic_error(params.at("d").get<double>());
    if (name == "connectedness_preserving")
        return EdgeFamily::connectedness(params.at("delta").get<double>());
    if (name == "collision_z4") return EdgeFamily::collision_z4(params.at("d").get<double>());
    if (name == "manipulability") {
        const std::string e = params.value("e", "quadratic");
        const double d = params.at("d").get<double>();
        if (e == "quadratic") return EdgeFamily::manipulability(e_quadratic(d));
        if (e == "log") return EdgeFamily::manipulability(e_log(d));
        throw SpecError("unknown manipulability e-function '" + e + "'");
    }
    throw SpecError("unknown potential family '" + name + "'");
}

inline nlohmann::json family_to_json(const EdgeFamily& f) {
    nlohmann::json j;
    switch (f.kind) {
    case FamilyKind::QuarticDistanceSquared:
        j["family"] = "quartic_distance_squared"; j["params"] = {{"d", f.d}}; break;
    case FamilyKind::QuadraticDistanceError:
        j["family"] = "quadratic_distance_error"; j["params"] = {{"d", f.d}}; break;
    case FamilyKind::Manipulability:
        j["family"] = "manipulability";
        j["params"] = {{"e", f.efun.name}, {"d", f.d}};
        break;
    case FamilyKind::ConnectednessPreserving:
        j["family"] = "connectedness_preserving"; j["params"] = {{"delta", f.delta}}; break;
    case FamilyKind::CollisionZ4:
        j["family"] = "collision_z4"; j["params"] = {{"d", f.d}}; break;
    }
    return j;
}

inline Problem parse_problem(const nlohmann::json& j) {
    Problem pb;
    const int d = j.at("dimension").get<int>();
    const int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    std::vector<EdgeFamily> families;
    for (const auto& e : j.at("edges")) {
        edges.emplace_back(e.at("i").get<int>(), e.at("j").get<int>());
        families.push_back(family_from_json(e.at("family").get<std::string>(),
                                            e.value("params", nlohmann::json::object())));
    }
    pb.spec.graph = build_graph(n, edges);
    pb.spec.families = std::move(families);
    pb.spec.d = d;
    if (j.contains("triangles"))
        for (const auto& t : j.at("triangles"))
            pb.spec.area_terms.push_back({t.at("i").get<int>(), t.at("j").get<int>(),
                                          t.at("k").get<int>(), t.at("S_star").get<double>(),
                                          t.at("K").get<double>()});
    pb.config.d = d;
    const auto& pos = j.at("positions");
    if (static_cast<int>(pos.size()) != n)
        throw SpecError("expected " + std::to_string(n) + " position rows, got " +
                        std::to_string(pos.size()));
    pb.config.p.resize(static_cast<Eigen::Index>(d) * n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(pos[i].size()) != d)
            throw SpecError("position row " + std::to_string(i + 1) + " has wrong dimension");
        for (int c = 0; c < d; ++c) pb.config.p(d * i + c) = pos[i][c].get<double>();
    }
    if (j.contains("pinned"))
        for (const auto& v : j.at("pinned")) pb.config.pinned.insert(v.get<int>());
    pb.spec.validate();
    pb.config.validate(n);
    return pb;
}

inline Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open problem spec '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError("parse error in '" + path + "': " + e.what());
    }
    return parse_problem(j);
}

inline nlohmann::json problem_to_json(const Problem& pb) {
    nlohmann::json j;
    j["version"] = 1;
    j["dimension"] = pb.spec.d;
    j["n"] = pb.spec.graph.n;
    j["edges"] = nlohmann::json::array();
    for (int k = 0; k < pb.spec.graph.m(); ++k) {
        nlohmann::json e = family_to_json(pb.spec.families[k]);
        e["i"] = pb.spec.graph.edges[k].first;
        e["j"] = pb.spec.graph.edges[k].second;
        j["edges"].push_back(e);
    }
    j["triangles"] = nlohmann::json::array();
    for (const auto& t : pb.spec.area_terms)
        j["triangles"].push_back(
            {{"i", t.i}, {"j", t.j}, {"k", t.k}, {"S_star", t.S_star}, {"K", t.K}});
    j["positions"] = nlohmann::json::array();
    for (int i = 1; i <= pb.spec.graph.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        const Eigen::VectorXd p = pb.config.position(i);
        for (int c = 0; c < pb.spec.d; ++c) row.push_back(p(c));
        j["positions"].push_back(row);
    }
    j["pinned"] = nlohmann::json::array();
    for (int v : pb.config.pinned) j["pinned"].push_back(v);
    return j;
}

/// Dense symmetric matrix as row-major JSON with its dimension.
inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    nlohmann::json j;
    j["dimension"] = M.rows();
    j["row_major"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c) j["row_major"].push_back(M(r, c));
    return j;
}

inline nlohmann::json report_to_json(const EquilibriumReport& rep) {
    nlohmann::json j;
    j["grad_norm"] = rep.grad_norm;
    j["eigenvalues"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i)
        j["eigenvalues"].push_back(rep.eigenvalues(i));
    j["inertia"] = {{"n_minus", rep.n_minus}, {"n_zero", rep.n_zero}, {"n_plus", rep.n_plus}};
    j["verdict"] = to_string(rep.verdict);
    if (rep.configuration.size() > 0) {
        j["configuration"] = nlohmann::json::array();
        for (Eigen::Index i = 0; i < rep.configuration.size(); ++i)
            j["configuration"].push_back(rep.configuration(i));
    }
    return j;
}

inline nlohmann::json verify_report_to_json(const VerifyReport& rep) {
    return {{"grad_max_abs_err", rep.grad_max_abs_err},
            {"grad_max_rel_err", rep.grad_max_rel_err},
            {"hess_max_abs_err", rep.hess_max_abs_err},
            {"hess_max_rel_err", rep.hess_max_rel_err},
            {"hess_worst_entry", {rep.hess_worst_row, rep.hess_worst_col}},
            {"pass", rep.pass}};
}

/// CSV header: t, p1..pdn, V, gradnorm.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    if (traj.states.empty()) return;
    out << "t";
    for (Eigen::Index i = 0; i < traj.states.front().size(); ++i) out << ",p" << (i + 1);
    out << ",V,gradnorm\n";
    out.precision(17);
    for (size_t s = 0; s < traj.times.size(); ++s) {
        out << traj.times[s];
        for (Eigen::Index i = 0; i < traj.states[s].size(); ++i) out << "," << traj.states[s](i);
        out << "," << traj.potential[s] << "," << traj.grad_norm[s] << "\n";
    }
}

} // namespace io
} // namespace hesskit
