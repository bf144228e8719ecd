#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace hesskit;

namespace {
Configuration make_config(int d, std::initializer_list<double> coords) {
    Configuration c;
    c.d = d;
    c.p.resize(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double v : coords) c.p(i++) = v;
    return c;
}
} // namespace

TEST_CASE("relative positions follow z_k = p_sink - p_source") {
    const Graph g = build_graph(2, {{1, 2}});
    const Configuration c = make_config(2, {0, 0, 1, 2});
    const RelativePositions zr = relative_positions(g, c);
    CHECK(zr.edge(0).isApprox(Eigen::Vector2d(1, 2)));
    CHECK(zr.lengths(0) == doctest::Approx(std::sqrt(5.0)));

    const RelativePositions zero =
        relative_positions(g, make_config(2, {1, 1, 1, 1}));
    CHECK(zero.lengths(0) == 0.0);

    const Graph tri = build_graph(3, {{1, 2}, {2, 3}, {1, 3}});
    const RelativePositions zt =
        relative_positions(tri, make_config(2, {0, 0, 1, 0, 0, 1}));
    CHECK(zt.edge(0).isApprox(Eigen::Vector2d(1, 0)));
    CHECK(zt.edge(1).isApprox(Eigen::Vector2d(-1, 1)));
    CHECK(zt.edge(2).isApprox(Eigen::Vector2d(0, 1)));
}

TEST_CASE("relative positions equal the expanded (H kron I_d) p product") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = testutil::random_graph(rng);
        for (int d : {2, 3}) {
            const Configuration c = testutil::random_configuration(rng, g, d);
            const RelativePositions zr = relative_positions(g, c);
            CHECK((zr.z - incidence_kron(g, d) * c.p).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("edge block matrix structure") {
    const Graph g1 = build_graph(2, {{1, 2}});
    const Eigen::MatrixXd Z1 =
        edge_block_matrix(relative_positions(g1, make_config(2, {0, 0, 1, 2})));
    CHECK(Z1.rows() == 2);
    CHECK(Z1.cols() == 1);
    CHECK(Z1(0, 0) == 1.0);
    CHECK(Z1(1, 0) == 2.0);

    const Graph g2 = build_graph(3, {{1, 2}, {2, 3}});
    const Eigen::MatrixXd Z2 =
        edge_block_matrix(relative_positions(g2, make_config(2, {0, 0, 1, 0, 1, 1})));
    Eigen::MatrixXd expect(4, 2);
    expect << 1, 0, 0, 0, 0, 0, 0, 1;
    CHECK((Z2 - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rigidity matrix rows and null space") {
    const Graph g = build_graph(2, {{1, 2}});
    const Eigen::MatrixXd R = rigidity_matrix(g, make_config(2, {0, 0, 1, 0}));
    Eigen::RowVector4d expect(-1, 0, 1, 0);
    CHECK((R - expect).cwiseAbs().maxCoeff() == 0.0);

    const Graph tri = build_graph(3, {{1, 2}, {2, 3}, {1, 3}});
    const Eigen::MatrixXd Rt = rigidity_matrix(tri, make_config(2, {0, 0, 1, 0, 0, 1}));
    CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(Rt).rank() == 3);

    // rigid translations are annihilated
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph rg = testutil::random_graph(rng);
        const Configuration c = testutil::random_configuration(rng, rg, 2);
        const Eigen::MatrixXd Rr = rigidity_matrix(rg, c);
        Eigen::VectorXd t(2 * rg.n);
        const double vx = U(rng), vy = U(rng);
        for (int i = 0; i < rg.n; ++i) {
            t(2 * i) = vx;
            t(2 * i + 1) = vy;
        }
        CHECK((Rr * t).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("signed area values and antisymmetry") {
    const Eigen::Vector2d pi(0, 0), pj(1, 0), pk(0, 1);
    CHECK(signed_area(pi, pj, pk) == doctest::Approx(0.5));
    CHECK(signed_area(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(2, 0)) ==
          doctest::Approx(0.0));
    CHECK(signed_area(pj, pi, pk) == doctest::Approx(-0.5));

    // the two displayed forms agree for random inputs
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-3, 3);
    const Eigen::Matrix2d J = area_rotation();
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Vector2d a(U(rng), U(rng)), b(U(rng), U(rng)), c(U(rng), U(rng));
        const double s1 = -0.5 * (b - c).dot(J * (a - b));
        const double s2 = -0.5 * (b - c).dot(J * (a - c));
        CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
        CHECK(signed_area(a, b, c) == doctest::Approx(s1).epsilon(1e-12));
    }
}
