#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "nbx/nb_spectral.hpp"
#include "nbx/oracle.hpp"
#include "test_support.hpp"

using namespace nbx;
using nbx::testing::complete;
using nbx::testing::cycle;
using nbx::testing::path;
using nbx::testing::star;
using nbx::testing::triangle;
using nbx::testing::triangle_with_pendant;

namespace {

int dense_perron_index(const Eigen::VectorXcd& eigenvalues) {
    int perron = -1;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        if (std::abs(eigenvalues(i).imag()) >= 1e-8) continue;
        if (perron == -1 || eigenvalues(i).real() > eigenvalues(perron).real()) perron = i;
    }
    return perron;
}

// Perron right eigenvector of dense B, normalized v^T P v = 1, aggregated per
// node: the reference for v_bar, independent of the power-iteration path.
std::vector<double> dense_vbar_reference(const Graph& g, double* lambda_out = nullptr) {
    const DirectedEdgeIndex index(g);
    const Eigen::MatrixXd b = oracle::dense_nb_matrix(g, index);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(b);
    const int perron = dense_perron_index(solver.eigenvalues());
    REQUIRE(perron >= 0);
    const double lambda = solver.eigenvalues()(perron).real();
    if (lambda_out) *lambda_out = lambda;
    Eigen::VectorXd v = solver.eigenvectors().col(perron).real();
    REQUIRE(solver.eigenvectors().col(perron).imag().cwiseAbs().maxCoeff() < 1e-10);
    if (v.sum() < 0.0) v = -v;
    double vpv = 0.0;
    for (EdgeId e = 0; e < index.count(); ++e) vpv += v(e) * v(DirectedEdgeIndex::reverse(e));
    REQUIRE(vpv > 0.0);
    v /= std::sqrt(vpv);
    std::vector<double> vbar(static_cast<std::size_t>(g.num_nodes()), 0.0);
    for (EdgeId e = 0; e < index.count(); ++e)
        vbar[static_cast<std::size_t>(index.target(e))] += v(e);
    return vbar;
}

}  // namespace

TEST_CASE("dense NB-matrix structure") {
    SUBCASE("triangle has exactly one continuation per directed edge") {
        const DirectedEdgeIndex index(triangle());
        const Eigen::MatrixXd b = oracle::dense_nb_matrix(triangle(), index);
        CHECK(b.rows() == 6);
        CHECK(b.sum() == doctest::Approx(6.0));
    }
    SUBCASE("star has no NB-walks of length 3") {
        const Graph g = star(3);
        const DirectedEdgeIndex index(g);
        const Eigen::MatrixXd b = oracle::dense_nb_matrix(g, index);
        CHECK((b * b).isZero(0.0));
    }
    SUBCASE("K4 columns have d_j - 1 ones") {
        const Graph g = complete(4);
        const DirectedEdgeIndex index(g);
        const Eigen::MatrixXd b = oracle::dense_nb_matrix(g, index);
        CHECK(b.sum() == doctest::Approx(24.0));
        for (EdgeId e = 0; e < index.count(); ++e)
            CHECK(b.col(e).sum() == doctest::Approx(g.degree(index.target(e)) - 1.0));
    }
}

TEST_CASE("matrix-free operators agree with the dense matrices") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Graph g = erdos_renyi(11, 0.35, seed + 50);
        const DirectedEdgeIndex index(g);
        const NbOperator op(g, index);
        const Eigen::MatrixXd b = oracle::dense_nb_matrix(g, index);
        const Eigen::MatrixXd p = oracle::dense_reversal(index);
        const auto dim = static_cast<std::size_t>(index.count());

        Rng rng(seed);
        std::vector<double> x(dim), y(dim);
        for (auto& v : x) v = next_double(rng) - 0.5;
        const Eigen::Map<const Eigen::VectorXd> xe(x.data(), static_cast<Eigen::Index>(dim));

        op.apply(x, y);
        Eigen::VectorXd want = b * xe;
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(std::abs(y[i] - want(static_cast<Eigen::Index>(i))) < 1e-12);

        op.apply_transpose(x, y);
        want = b.transpose() * xe;
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(std::abs(y[i] - want(static_cast<Eigen::Index>(i))) < 1e-12);

        op.apply_reversal(x, y);
        want = p * xe;
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(std::abs(y[i] - want(static_cast<Eigen::Index>(i))) < 1e-12);

        // P is an involution
        std::vector<double> z(dim);
        op.apply_reversal(y, z);
        for (std::size_t i = 0; i < dim; ++i) CHECK(z[i] == x[i]);

        const AuxOperator aux(g);
        const Eigen::MatrixXd ba = oracle::dense_aux_matrix(g);
        const auto adim = static_cast<std::size_t>(aux.dimension());
        std::vector<double> ax(adim), ay(adim);
        for (auto& v : ax) v = next_double(rng) - 0.5;
        const Eigen::Map<const Eigen::VectorXd> axe(ax.data(), static_cast<Eigen::Index>(adim));

        aux.apply(ax, ay);
        want = ba * axe;
        for (std::size_t i = 0; i < adim; ++i)
            CHECK(std::abs(ay[i] - want(static_cast<Eigen::Index>(i))) < 1e-12);

        aux.apply_transpose(ax, ay);
        want = ba.transpose() * axe;
        for (std::size_t i = 0; i < adim; ++i)
            CHECK(std::abs(ay[i] - want(static_cast<Eigen::Index>(i))) < 1e-12);
    }
}

TEST_CASE("leading eigenpair on reference graphs") {
    SUBCASE("trees have lambda1 = 0") {
        const SpectralResult r = leading_eigenpair(path(6));
        CHECK(r.lambda1 == 0.0);
        CHECK(r.converged);
        CHECK(r.degenerate);
        for (double v : r.v_bar) CHECK(v == 0.0);
    }
    SUBCASE("K4 has lambda1 = 2 and equal centralities") {
        const SpectralResult r = leading_eigenpair(complete(4));
        CHECK(r.converged);
        CHECK(r.lambda1 == doctest::Approx(2.0).epsilon(1e-9));
        const double want = 3.0 / std::sqrt(12.0);
        for (double v : r.v_bar) CHECK(v == doctest::Approx(want).epsilon(1e-8));
    }
    SUBCASE("C5 has lambda1 = 1") {
        const SpectralResult r = leading_eigenpair(cycle(5));
        CHECK(r.lambda1 == 1.0);
        CHECK(r.degenerate);
        CHECK(r.converged);
        // symmetric-limit normalization: v_bar = sqrt(2/5) on the cycle
        for (double v : r.v_bar) CHECK(v == doctest::Approx(std::sqrt(0.4)).epsilon(1e-12));
    }
    SUBCASE("pendant nodes have zero centrality") {
        const Graph g = triangle_with_pendant();
        const SpectralResult r = leading_eigenpair(g);
        CHECK(r.lambda1 == 1.0);
        CHECK(r.v_bar[3] == 0.0);
    }
    SUBCASE("d-regular graphs have equal centralities") {
        const SpectralResult r = leading_eigenpair(complete(5));
        for (double v : r.v_bar) CHECK(v == doctest::Approx(r.v_bar[0]).epsilon(1e-9));
    }
}

TEST_CASE("sparse eigenpair matches the dense reference") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = nbx::testing::random_core_graph(9, 0.45, seed * 131 + 1);
        double lambda_dense = 0.0;
        const std::vector<double> vbar_dense = dense_vbar_reference(g, &lambda_dense);
        REQUIRE(lambda_dense > 1.0);

        const SpectralResult r = leading_eigenpair(g);
        REQUIRE(r.converged);
        CHECK(r.lambda1 == doctest::Approx(lambda_dense).epsilon(1e-8));
        for (NodeId u = 0; u < g.num_nodes(); ++u)
            CHECK(r.v_bar[static_cast<std::size_t>(u)] ==
                  doctest::Approx(vbar_dense[static_cast<std::size_t>(u)]).epsilon(1e-7));

        // norm identity between the two normalizations
        double vbar_norm = 0.0, f_norm = 0.0, fdf = 0.0;
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
            const double vb = vbar_dense[static_cast<std::size_t>(u)];
            const double fu = r.f[static_cast<std::size_t>(u)];
            vbar_norm += vb * vb;
            f_norm += fu * fu;
            fdf += g.degree(u) * fu * fu;
        }
        const double mu = std::sqrt(r.lambda1 * (r.lambda1 * r.lambda1 - 1.0) / (1.0 - fdf));
        CHECK(std::sqrt(vbar_norm) == doctest::Approx(mu * std::sqrt(f_norm)).epsilon(1e-8));
    }
}

TEST_CASE("left-eigenvector and aux-structure identities") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = nbx::testing::random_core_graph(8, 0.5, seed * 17 + 3);
        const DirectedEdgeIndex index(g);
        const Eigen::MatrixXd b = oracle::dense_nb_matrix(g, index);
        const Eigen::MatrixXd p = oracle::dense_reversal(index);

        CHECK((p * b - (p * b).transpose()).cwiseAbs().maxCoeff() == 0.0);

        Eigen::EigenSolver<Eigen::MatrixXd> solver(b);
        const int perron = dense_perron_index(solver.eigenvalues());
        REQUIRE(perron >= 0);
        const double lambda = solver.eigenvalues()(perron).real();
        const Eigen::VectorXd v = solver.eigenvectors().col(perron).real();
        const Eigen::VectorXd pv = p * v;
        CHECK((b.transpose() * pv - lambda * pv).norm() < 1e-8);

        // unit left eigenvector of B_aux splits as (f, -lambda f)
        const Eigen::MatrixXd aux_t = oracle::dense_aux_matrix(g).transpose();
        Eigen::EigenSolver<Eigen::MatrixXd> aux_solver(aux_t);
        const int aux_perron = dense_perron_index(aux_solver.eigenvalues());
        REQUIRE(aux_perron >= 0);
        CHECK(aux_solver.eigenvalues()(aux_perron).real() == doctest::Approx(lambda).epsilon(1e-9));
        Eigen::VectorXd v_aux = aux_solver.eigenvectors().col(aux_perron).real();
        v_aux.normalize();
        const NodeId n = g.num_nodes();
        for (NodeId u = 0; u < n; ++u)
            CHECK(v_aux(n + u) == doctest::Approx(-lambda * v_aux(u)).epsilon(1e-8));
    }
}

TEST_CASE("centrality decays geometrically into tree tendrils") {
    // for a degree-1 node u with neighbor w, the eigenvector equation forces
    // lambda * v_bar[u] = v_bar[w]; tendril mass is downstream flow, not zero
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Graph g = nbx::testing::random_graph_with_trees(8, 0.55, 5, seed * 7 + 2);
        const SpectralResult r = leading_eigenpair(g);
        REQUIRE(r.converged);
        REQUIRE(r.lambda1 > 1.0);
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
            if (g.degree(u) != 1) continue;
            const NodeId w = g.neighbors(u)[0];
            CHECK(r.lambda1 * r.v_bar[static_cast<std::size_t>(u)] ==
                  doctest::Approx(r.v_bar[static_cast<std::size_t>(w)]).epsilon(1e-7));
        }
    }
}

TEST_CASE("eigen drop") {
    SUBCASE("K4 drops from 2 to 1") {
        CHECK(eigen_drop_exact(complete(4), 0) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("removing a pendant changes nothing") {
        CHECK(eigen_drop_exact(triangle_with_pendant(), 3) == doctest::Approx(0.0));
    }
    SUBCASE("C5 drops from 1 to 0") {
        CHECK(eigen_drop_exact(cycle(5), 2) == doctest::Approx(1.0));
    }
    SUBCASE("drops are never negative") {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const Graph g = erdos_renyi(12, 0.3, seed + 900);
            for (NodeId c = 0; c < g.num_nodes(); ++c) CHECK(eigen_drop_exact(g, c) >= -1e-8);
        }
    }
}
