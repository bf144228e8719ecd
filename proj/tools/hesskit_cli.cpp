// Command-line front end: parse a problem spec, assemble gradients/Hessians,
// verify against finite differences, integrate the gradient flow, classify
// equilibria, and check the library's closed forms against independent
// reference constructions.
//
// Exit codes: 0 success, 1 parse/usage error, 2 domain violation,
// 3 verification tolerance failure.

#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "hesskit/hesskit.hpp"

using namespace hesskit;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitDomain = 2;
constexpr int kExitTolerance = 3;

Eigen::Matrix2d rot90() { return area_rotation(); }

int run_hessian(const std::string& spec_path, const std::string& out_path,
                const std::string& mode, double fd_h, double tau_rel) {
    const Problem pb = io::load_problem(spec_path);
    json out;
    out["mode"] = mode;
    if (mode == "analytic" || mode == "both") {
        const Eigen::MatrixXd H = hessian_reduced(pb.spec, pb.config);
        out["analytic"] = io::matrix_to_json(H);
        const EquilibriumReport rep = classify(H, tau_rel);
        out["analytic"]["eigenvalues"] = io::report_to_json(rep)["eigenvalues"];
        out["analytic"]["inertia"] = io::report_to_json(rep)["inertia"];
    }
    if (mode == "fd" || mode == "both") {
        const Eigen::MatrixXd H =
            reduce_matrix(fd_hessian(pb.spec, pb.config, {fd_h}), pb.config, pb.spec.graph.n);
        out["fd"] = io::matrix_to_json(H);
    }
    std::ofstream f(out_path);
    if (!f) throw SpecError("cannot open output file '" + out_path + "'");
    f << out.dump(2) << "\n";
    return kExitOk;
}

int run_verify(const std::string& spec_path, double fd_h, double grad_tol, double hess_tol,
               bool sweep) {
    const Problem pb = io::load_problem(spec_path);
    if (sweep) {
        // Error-vs-h table for the gradient; slope ~2 on log-log confirms the
        // central-difference order.
        std::cout << "h,grad_max_abs_err\n";
        const Eigen::VectorXd g = gradient_pinned(pb.spec, pb.config);
        for (double h = 1e-2; h >= 1e-5 / 2; h /= 10.0) {
            const Eigen::VectorXd gfd = fd_gradient(pb.spec, pb.config, {h});
            std::cout << h << "," << (g - gfd).lpNorm<Eigen::Infinity>() << "\n";
        }
        return kExitOk;
    }
    const VerifyReport rep =
        verify(pb.spec, pb.config, gradient_pinned(pb.spec, pb.config),
               hessian_total(pb.spec, pb.config), {fd_h}, grad_tol, hess_tol);
    std::cout << io::verify_report_to_json(rep).dump(2) << "\n";
    return rep.pass ? kExitOk : kExitTolerance;
}

int run_simulate(const std::string& spec_path, const std::string& out_path,
                 const IntegratorParams& params, bool classify_terminal, double tau_rel) {
    const Problem pb = io::load_problem(spec_path);
    const Trajectory traj = integrate(pb.spec, pb.config, params);
    if (out_path.empty()) {
        io::write_trajectory_csv(std::cout, traj);
    } else {
        std::ofstream f(out_path);
        if (!f) throw SpecError("cannot open output file '" + out_path + "'");
        io::write_trajectory_csv(f, traj);
    }
    if (classify_terminal) {
        Configuration c = pb.config;
        c.p = traj.states.back();
        EquilibriumReport rep = classify(hessian_reduced(pb.spec, c), tau_rel);
        rep.configuration = c.p;
        rep.grad_norm = traj.grad_norm.back();
        std::cout << io::report_to_json(rep).dump(2) << "\n";
    }
    return kExitOk;
}

int run_classify(const std::string& spec_path, double tau_rel) {
    const Problem pb = io::load_problem(spec_path);
    EquilibriumReport rep = classify(hessian_reduced(pb.spec, pb.config), tau_rel);
    rep.configuration = pb.config.p;
    rep.grad_norm = gradient_pinned(pb.spec, pb.config).lpNorm<Eigen::Infinity>();
    std::cout << io::report_to_json(rep).dump(2) << "\n";
    return kExitOk;
}

// --- reference constructions for the `reproduce` cases -----------------------
// Each case evaluates an independently written closed form next to the
// engine's assembly and reports the worst deviation over sampled parameters.

double case_two_agent_reduced(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.2, 2.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double x = U(rng), y = U(rng), d = U(rng);
        PotentialSpec spec{build_graph(2, {{1, 2}}), {EdgeFamily::quartic(d)}, {}, 2};
        Configuration c{2, Eigen::VectorXd::Zero(4), {1}};
        c.p << 0, 0, x, y;
        const double e = x * x + y * y - d * d;
        Eigen::Matrix2d ref;
        ref << 2 * x * x + e, 2 * x * y, 2 * x * y, 2 * y * y + e;
        worst = std::max(worst,
                         (hessian_reduced(spec, c) - ref).cwiseAbs().maxCoeff());
    }
    return worst;
}

double case_pinned_three_agent(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.2, 2.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = U(rng), d = U(rng), K = U(rng), x = U(rng), y = U(rng);
        PotentialSpec spec{build_graph(3, {{3, 1}, {3, 2}}),
                           {EdgeFamily::quartic(d), EdgeFamily::quartic(d)},
                           {{1, 2, 3, 0.5, K}},
                           2};
        Configuration c{2, Eigen::VectorXd::Zero(6), {1, 2}};
        c.p << -a, 0, a, 0, x, y;
        Eigen::Matrix2d ref;
        ref << 6 * x * x + 6 * a * a + 2 * y * y - 2 * d * d, 4 * x * y,
               4 * x * y, 2 * x * x + 2 * a * a + 6 * y * y - 2 * d * d + K * a * a;
        worst = std::max(worst,
                         (hessian_reduced(spec, c) - ref).cwiseAbs().maxCoeff());
    }
    return worst;
}

double case_collision_closed_form(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.5, 2.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = build_graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 3}});
        std::vector<EdgeFamily> fams;
        for (int k = 0; k < g.m(); ++k) fams.push_back(EdgeFamily::collision_z4(U(rng)));
        PotentialSpec spec{g, fams, {}, 2};
        Configuration c{2, Eigen::VectorXd(8), {}};
        for (int i = 0; i < 8; ++i) c.p(i) = 3.0 * U(rng);
        worst = std::max(worst, (hessian_z4_direct(spec, c) - hessian_edge_general(spec, c))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    return worst;
}

double case_triangle_composite(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.3, 2.0);
    const Eigen::Matrix2d J = rot90();
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = build_graph(3, {{1, 2}, {2, 3}, {1, 3}});
        const double d12 = U(rng), d23 = U(rng), d13 = U(rng), K = U(rng), Sstar = U(rng);
        PotentialSpec spec{g,
                           {EdgeFamily::quartic(d12), EdgeFamily::quartic(d23),
                            EdgeFamily::quartic(d13)},
                           {{1, 2, 3, Sstar, K}},
                           2};
        Configuration c{2, Eigen::VectorXd(6), {}};
        for (int i = 0; i < 6; ++i) c.p(i) = 2.0 * U(rng);
        const Eigen::Vector2d p1 = c.position(1), p2 = c.position(2), p3 = c.position(3);

        // Distance part: 2 R^T R + (H^T W H) (x) I_2 with W = diag(e_k).
        const Eigen::MatrixXd R = rigidity_matrix(g, c);
        Eigen::Vector3d e((p2 - p1).squaredNorm() - d12 * d12,
                          (p3 - p2).squaredNorm() - d23 * d23,
                          (p3 - p1).squaredNorm() - d13 * d13);
        const Eigen::MatrixXd H = incidence_matrix(g);
        const Eigen::MatrixXd E = H.transpose() * e.asDiagonal() * H;
        Eigen::MatrixXd ref = 2.0 * R.transpose() * R;
        for (int bi = 0; bi < 3; ++bi)
            for (int bj = 0; bj < 3; ++bj)
                ref.block<2, 2>(2 * bi, 2 * bj) += E(bi, bj) * Eigen::Matrix2d::Identity();

        // Area part: K/4 Y Y^T + K/2 (S - S*) M, written out for one triangle.
        const double S = signed_area(p1, p2, p3);
        Eigen::VectorXd Y(6);
        Y.segment<2>(0) = J * (p2 - p3);
        Y.segment<2>(2) = J * (p3 - p1);
        Y.segment<2>(4) = J * (p1 - p2);
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(6, 6);
        M.block<2, 2>(0, 2) = J;  M.block<2, 2>(0, 4) = -J;
        M.block<2, 2>(2, 0) = -J; M.block<2, 2>(2, 4) = J;
        M.block<2, 2>(4, 0) = J;  M.block<2, 2>(4, 2) = -J;
        ref += 0.25 * K * (Y * Y.transpose()) + 0.5 * K * (S - Sstar) * M;

        worst = std::max(worst, (hessian_total(spec, c) - ref).cwiseAbs().maxCoeff());
    }
    return worst;
}

double case_two_triangle_composite(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.3, 2.0);
    const Eigen::Matrix2d J = rot90();
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = build_graph(4, {{1, 2}, {2, 3}, {1, 3}, {2, 4}, {3, 4}});
        std::vector<double> dk;
        std::vector<EdgeFamily> fams;
        for (int k = 0; k < 5; ++k) {
            dk.push_back(U(rng));
            fams.push_back(EdgeFamily::quartic(dk.back()));
        }
        const double K = U(rng), SA = U(rng), SB = U(rng);
        PotentialSpec spec{g, fams, {{1, 2, 3, SA, K}, {2, 3, 4, SB, K}}, 2};
        Configuration c{2, Eigen::VectorXd(8), {}};
        for (int i = 0; i < 8; ++i) c.p(i) = 2.0 * U(rng);
        const Eigen::Vector2d p1 = c.position(1), p2 = c.position(2), p3 = c.position(3),
                              p4 = c.position(4);

        const Eigen::MatrixXd R = rigidity_matrix(g, c);
        Eigen::VectorXd e(5);
        for (int k = 0; k < 5; ++k) {
            const auto [a, b] = g.edges[k];
            e(k) = (c.position(b) - c.position(a)).squaredNorm() - dk[k] * dk[k];
        }
        const Eigen::MatrixXd H = incidence_matrix(g);
        const Eigen::MatrixXd E = H.transpose() * e.asDiagonal() * H;
        Eigen::MatrixXd ref = 2.0 * R.transpose() * R;
        for (int bi = 0; bi < 4; ++bi)
            for (int bj = 0; bj < 4; ++bj)
                ref.block<2, 2>(2 * bi, 2 * bj) += E(bi, bj) * Eigen::Matrix2d::Identity();

        Eigen::VectorXd YA = Eigen::VectorXd::Zero(8), YB = Eigen::VectorXd::Zero(8);
        YA.segment<2>(0) = J * (p2 - p3);
        YA.segment<2>(2) = J * (p3 - p1);
        YA.segment<2>(4) = J * (p1 - p2);
        YB.segment<2>(2) = J * (p3 - p4);
        YB.segment<2>(4) = J * (p4 - p2);
        YB.segment<2>(6) = J * (p2 - p3);
        Eigen::MatrixXd MA = Eigen::MatrixXd::Zero(8, 8), MB = Eigen::MatrixXd::Zero(8, 8);
        MA.block<2, 2>(0, 2) = J;  MA.block<2, 2>(0, 4) = -J;
        MA.block<2, 2>(2, 0) = -J; MA.block<2, 2>(2, 4) = J;
        MA.block<2, 2>(4, 0) = J;  MA.block<2, 2>(4, 2) = -J;
        MB.block<2, 2>(2, 4) = J;  MB.block<2, 2>(2, 6) = -J;
        MB.block<2, 2>(4, 2) = -J; MB.block<2, 2>(4, 6) = J;
        MB.block<2, 2>(6, 2) = J;  MB.block<2, 2>(6, 4) = -J;
        const double sA = signed_area(p1, p2, p3), sB = signed_area(p2, p3, p4);
        ref += 0.25 * K *
               (YA * YA.transpose() + 2.0 * (sA - SA) * MA + YB * YB.transpose() +
                2.0 * (sB - SB) * MB);

        worst = std::max(worst, (hessian_total(spec, c) - ref).cwiseAbs().maxCoeff());
    }
    return worst;
}

int run_reproduce(const std::string& which, unsigned seed) {
    std::mt19937 rng(seed);
    double dev = 0;
    if (which == "eq17") dev = case_two_agent_reduced(rng);
    else if (which == "eq26") dev = case_pinned_three_agent(rng);
    else if (which == "fact6") dev = case_collision_closed_form(rng);
    else if (which == "sec6-1") dev = case_triangle_composite(rng);
    else if (which == "sec6-2") dev = case_two_triangle_composite(rng);
    else {
        std::cerr << "unknown case '" << which
                  << "' (expected eq17, eq26, fact6, sec6-1, sec6-2)\n";
        return kExitParse;
    }
    std::cout << "case " << which << "  max deviation " << dev << "  "
              << (dev < 1e-10 ? "OK" : "FAIL") << "\n";
    return dev < 1e-10 ? kExitOk : kExitTolerance;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient and Hessian assembly for graph-coupled coordination potentials"};
    app.require_subcommand(1);
    // --h is a documented finite-difference flag, so help is --help only
    app.set_help_flag("--help", "print help");
    app.option_defaults()->ignore_case(false);

    std::string spec_path, out_path = "hessian.json";
    std::string mode = "analytic";
    double fd_h = 1e-4, grad_tol = 1e-7, hess_tol = 1e-5, tau_rel = 1e-8;
    bool sweep = false, classify_terminal = false;
    IntegratorParams iparams;
    std::string repro_case;
    unsigned seed = 12345;

    auto* hess = app.add_subcommand("hessian", "Assemble the Hessian at the spec's configuration");
    hess->add_option("spec", spec_path, "problem spec JSON")->required();
    hess->add_option("-o,--out", out_path, "output JSON path");
    hess->add_flag_callback("--analytic", [&] { mode = "analytic"; });
    hess->add_flag_callback("--fd", [&] { mode = "fd"; });
    hess->add_flag_callback("--both", [&] { mode = "both"; });
    hess->add_option("--h", fd_h, "finite-difference base step");
    hess->add_option("--tau-rel", tau_rel, "relative zero-eigenvalue threshold");

    auto* ver = app.add_subcommand("verify", "Check analytic gradient/Hessian against finite differences");
    ver->add_option("spec", spec_path)->required();
    ver->add_option("--h", fd_h, "finite-difference base step");
    ver->add_option("--grad-tol", grad_tol);
    ver->add_option("--tol", hess_tol, "Hessian relative tolerance");
    ver->add_flag("--h-sweep", sweep, "emit gradient error vs h table instead");

    auto* sim = app.add_subcommand("simulate", "Integrate the gradient flow, emit a CSV trajectory");
    sim->add_option("spec", spec_path)->required();
    sim->add_option("--dt", iparams.dt);
    sim->add_option("--steps", iparams.max_steps);
    sim->add_option("--grad-tol", iparams.grad_tol);
    sim->add_option("--stride", iparams.stride);
    sim->add_option("--out", out_path, "CSV path (stdout if omitted)")->default_val("");
    sim->add_flag("--classify", classify_terminal, "append terminal equilibrium report JSON");
    sim->add_option("--tau-rel", tau_rel);

    auto* cls = app.add_subcommand("classify", "Classify the equilibrium at the spec's configuration");
    cls->add_option("spec", spec_path)->required();
    cls->add_option("--tau-rel", tau_rel);

    auto* rep = app.add_subcommand(
        "reproduce", "Compare engine assembly against independent reference constructions");
    rep->add_option("case", repro_case,
                    "eq17 (two-agent reduced form), eq26 (pinned three-agent composite), "
                    "fact6 (collision closed form), sec6-1 (triangle composite), "
                    "sec6-2 (four-agent two-triangle composite)")
        ->required();
    rep->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*hess) return run_hessian(spec_path, out_path, mode, fd_h, tau_rel);
        if (*ver) return run_verify(spec_path, fd_h, grad_tol, hess_tol, sweep);
        if (*sim) return run_simulate(spec_path, out_path, iparams, classify_terminal, tau_rel);
        if (*cls) return run_classify(spec_path, tau_rel);
        if (*rep) return run_reproduce(repro_case, seed);
    } catch (const DomainError& e) {
        std::cerr << "domain violation";
        if (e.edge >= 0) std::cerr << " (edge " << (e.edge + 1) << ")";
        std::cerr << ": " << e.what() << "\n";
        return kExitDomain;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}
