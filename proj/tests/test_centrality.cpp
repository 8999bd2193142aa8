#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "nbx/centrality.hpp"
#include "nbx/experiment.hpp"
#include "nbx/oracle.hpp"
#include "test_support.hpp"

using namespace nbx;
using nbx::testing::complete;
using nbx::testing::star;
using nbx::testing::triangle;
using nbx::testing::triangle_with_pendant;

namespace {

// Perron right eigenvector of dense B' (graph minus c), normalized v^T P v = 1,
// both as an edge vector on the kept edges and aggregated per node.
struct PostRemovalEigenvector {
    Eigen::VectorXd v;          // over blocks.kept
    std::vector<double> v_bar;  // per node of g
    double lambda1_prime = 0.0;
};

PostRemovalEigenvector dense_post_removal(const Graph& g, const oracle::DenseBlocks& blocks,
                                          const DirectedEdgeIndex& index) {
    PostRemovalEigenvector out;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(blocks.b_prime);
    int perron = -1;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        if (std::abs(solver.eigenvalues()(i).imag()) >= 1e-8) continue;
        if (perron == -1 || solver.eigenvalues()(i).real() > solver.eigenvalues()(perron).real())
            perron = i;
    }
    REQUIRE(perron >= 0);
    out.lambda1_prime = solver.eigenvalues()(perron).real();
    out.v = solver.eigenvectors().col(perron).real();
    if (out.v.sum() < 0.0) out.v = -out.v;

    std::vector<Eigen::Index> position(static_cast<std::size_t>(index.count()), -1);
    for (std::size_t r = 0; r < blocks.kept.size(); ++r)
        position[static_cast<std::size_t>(blocks.kept[r])] = static_cast<Eigen::Index>(r);
    double vpv = 0.0;
    for (std::size_t r = 0; r < blocks.kept.size(); ++r) {
        const EdgeId rev = DirectedEdgeIndex::reverse(blocks.kept[r]);
        vpv += out.v(static_cast<Eigen::Index>(r)) * out.v(position[static_cast<std::size_t>(rev)]);
    }
    REQUIRE(vpv > 0.0);
    out.v /= std::sqrt(vpv);

    out.v_bar.assign(static_cast<std::size_t>(g.num_nodes()), 0.0);
    for (std::size_t r = 0; r < blocks.kept.size(); ++r)
        out.v_bar[static_cast<std::size_t>(index.target(blocks.kept[r]))] +=
            out.v(static_cast<Eigen::Index>(r));
    return out;
}

}  // namespace

TEST_CASE("x_degree") {
    CHECK(x_degree(star(5), 0) == 0.0);
    CHECK(x_degree(triangle(), 0) == 2.0);
    CHECK(x_degree(complete(4), 0) == 24.0);
    SUBCASE("zero exactly when at most one neighbor has degree >= 2") {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const Graph g = erdos_renyi(20, 0.12, seed + 37);
            for (NodeId c = 0; c < g.num_nodes(); ++c) {
                const double score = x_degree(g, c);
                CHECK(score >= 0.0);
                int rich = 0;
                for (NodeId i : g.neighbors(c))
                    if (g.degree(i) >= 2) ++rich;
                CHECK((score == 0.0) == (rich <= 1));
            }
        }
    }
}

TEST_CASE("x_nb_exact") {
    SUBCASE("K4: post-removal K3 at the symmetric normalization") {
        const XnbScore score = x_nb_exact(complete(4), 0);
        CHECK(score.value == doctest::Approx(4.0).epsilon(1e-10));
    }
    SUBCASE("pendant nodes score zero") {
        CHECK(x_nb_exact(triangle_with_pendant(), 3).value == doctest::Approx(0.0));
        // pendant on K4: non-degenerate post-removal spectrum
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId i = 0; i < 4; ++i)
            for (NodeId j = static_cast<NodeId>(i + 1); j < 4; ++j) edges.emplace_back(i, j);
        edges.emplace_back(0, 4);
        const Graph g = Graph::from_edges(5, edges);
        const XnbScore score = x_nb_exact(g, 4);
        CHECK(score.value == doctest::Approx(0.0));
        CHECK_FALSE(score.degenerate);
    }
    SUBCASE("removal that empties the 2-core is flagged") {
        const XnbScore score = x_nb_exact(triangle(), 1);
        CHECK(score.value == 0.0);
        CHECK(score.degenerate);
    }
    SUBCASE("K5 against the dense post-removal eigenvector") {
        const Graph g = complete(5);
        const DirectedEdgeIndex index(g);
        const auto blocks = oracle::make_blocks(g, index, 0);
        const auto dense = dense_post_removal(g, blocks, index);
        REQUIRE(dense.lambda1_prime > 1.0);
        double s1 = 0.0, s2 = 0.0;
        for (NodeId i : g.neighbors(0)) {
            s1 += dense.v_bar[static_cast<std::size_t>(i)];
            s2 += dense.v_bar[static_cast<std::size_t>(i)] * dense.v_bar[static_cast<std::size_t>(i)];
        }
        CHECK(x_nb_exact(g, 0).value == doctest::Approx(s1 * s1 - s2).epsilon(1e-8));
        CHECK(x_nb_exact(g, 0).value == doctest::Approx(9.0).epsilon(1e-10));
    }
}

TEST_CASE("x_nb_approx") {
    const Graph k4 = complete(4);
    const SpectralResult spectral = leading_eigenpair(k4);
    SUBCASE("K4 with pre-removal centralities") {
        CHECK(x_nb_approx(k4, 0, spectral).value == doctest::Approx(4.5).epsilon(1e-10));
    }
    SUBCASE("degenerate spectral input gives flagged zeros") {
        const Graph g = triangle_with_pendant();  // lambda1 = 1
        const XnbScore score = x_nb_approx(g, 3, leading_eigenpair(g));
        CHECK(score.value == 0.0);
        CHECK(score.degenerate);
    }
    SUBCASE("regular graphs score uniformly") {
        const Graph k5 = complete(5);
        const auto all = x_nb_approx_all(k5, leading_eigenpair(k5));
        for (double v : all) CHECK(v == doctest::Approx(all[0]).epsilon(1e-10));
    }
}

TEST_CASE("predicted_lambda") {
    CHECK(predicted_lambda(2.0, 4.0) == doctest::Approx(1.0));
    CHECK(predicted_lambda(1.7, 0.0) == doctest::Approx(1.7));
    CHECK(predicted_lambda(2.0, 4.5) == doctest::Approx(0.875));
    CHECK_THROWS_AS(predicted_lambda(0.0, 1.0), std::domain_error);
}

TEST_CASE("collective influence") {
    CHECK(collective_influence(complete(4), 0) == 12.0);
    CHECK(collective_influence(star(6), 0) == 0.0);
    CHECK(collective_influence(triangle_with_pendant(), 3) == 0.0);
}

TEST_CASE("generic X-centrality quadratic form") {
    SUBCASE("all-ones reduces to x_degree") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Graph g = erdos_renyi(15, 0.25, seed + 71);
            const DirectedEdgeIndex index(g);
            const EdgeStatVector ones{std::vector<double>(static_cast<std::size_t>(index.count()), 1.0)};
            for (NodeId c = 0; c < g.num_nodes(); ++c)
                CHECK(x_centrality_generic(g, index, c, ones) ==
                      doctest::Approx(x_degree(g, c)).epsilon(1e-10));
        }
    }
    SUBCASE("post-removal eigenvector reduces to x_nb_exact") {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const Graph g = nbx::testing::random_core_graph(8, 0.55, seed * 41 + 13);
            const DirectedEdgeIndex index(g);
            for (NodeId c = 0; c < g.num_nodes(); ++c) {
                const auto blocks = oracle::make_blocks(g, index, c);
                if (blocks.kept.empty()) continue;
                const auto dense = dense_post_removal(g, blocks, index);
                if (dense.lambda1_prime <= 1.0 + 1e-9) continue;
                // junk on the ignored entries must not leak into the result
                EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()), 99.0)};
                for (std::size_t r = 0; r < blocks.kept.size(); ++r)
                    z.z[static_cast<std::size_t>(blocks.kept[r])] = dense.v(static_cast<Eigen::Index>(r));
                CHECK(x_centrality_generic(g, index, c, z) ==
                      doctest::Approx(x_nb_exact(g, c).value).epsilon(1e-8));
            }
        }
    }
    SUBCASE("equal aggregates give the zero-variance value") {
        const Graph g = complete(4);
        const DirectedEdgeIndex index(g);
        const double s = 0.7;
        const EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()), s)};
        const NodeId c = 0;
        const double d = g.degree(c);
        const double agg = s * 2.0;  // each neighbor keeps d_i - 1 = 2 unignored in-edges
        CHECK(x_centrality_generic(g, index, c, z) ==
              doctest::Approx(d * (d - 1.0) * agg * agg).epsilon(1e-12));
    }
    SUBCASE("size mismatch is a dimension error") {
        const Graph g = triangle();
        const DirectedEdgeIndex index(g);
        const EdgeStatVector bad{std::vector<double>(3, 1.0)};
        CHECK_THROWS_AS(x_centrality_generic(g, index, 0, bad), std::invalid_argument);
    }
}

TEST_CASE("variance relation") {
    SUBCASE("equal neighbor aggregates have zero variance") {
        const Graph g = complete(4);
        const DirectedEdgeIndex index(g);
        const EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()), 1.0)};
        const auto rel = variance_relation_check(g, index, 0, z);
        CHECK(rel.variance == doctest::Approx(0.0));
        CHECK(rel.quadratic_form == doctest::Approx(3.0 * 2.0 * 4.0));  // d(d-1)s^2, s = 2
    }
    SUBCASE("degree-1 target is identically zero") {
        const Graph g = triangle_with_pendant();
        const DirectedEdgeIndex index(g);
        const EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()), 2.0)};
        const auto rel = variance_relation_check(g, index, 3, z);
        CHECK(rel.quadratic_form == doctest::Approx(0.0));
        CHECK(rel.variance == doctest::Approx(0.0));
    }
    SUBCASE("degree-0 target is a domain error") {
        Graph g = triangle();
        g.detach_node(2);
        const DirectedEdgeIndex index(g);
        const EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()), 1.0)};
        CHECK_THROWS_AS(variance_relation_check(g, index, 2, z), std::domain_error);
    }
    SUBCASE("aggregates (1, 0) over two neighbors") {
        const std::pair<NodeId, NodeId> edges[] = {{0, 1}, {0, 2}, {1, 3}};
        const Graph h = Graph::from_edges(4, edges);
        const DirectedEdgeIndex index(h);
        EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()), 0.0)};
        z.z[static_cast<std::size_t>(index.index_of(3, 1))] = 1.0;  // node 1 aggregates 1
        const auto rel = variance_relation_check(h, index, 0, z);
        CHECK(rel.quadratic_form == doctest::Approx(0.0));
        CHECK(rel.variance == doctest::Approx(0.25));
    }
    SUBCASE("identity linking the form, the mean, and the variance") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Graph h = erdos_renyi(12, 0.3, seed + 210);
            const DirectedEdgeIndex index(h);
            Rng rng(seed);
            EdgeStatVector z{std::vector<double>(static_cast<std::size_t>(index.count()))};
            for (auto& v : z.z) v = next_double(rng);
            const auto agg_all = z.node_aggregates(index, h.num_nodes());
            for (NodeId c = 0; c < h.num_nodes(); ++c) {
                const double d = h.degree(c);
                if (d < 1) continue;
                const auto rel = variance_relation_check(h, index, c, z);
                double sum = 0.0;
                for (NodeId i : h.neighbors(c))
                    sum += agg_all[static_cast<std::size_t>(i)] -
                           z.z[static_cast<std::size_t>(index.index_of(c, i))];
                const double want = (d - 1.0) * sum * sum / d - d * rel.variance;
                CHECK(rel.quadratic_form == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("X-NB triple equality on dense quantities") {
    int verified = 0;
    for (std::uint64_t seed = 0; seed < 10 && verified < 5; ++seed) {
        const Graph g = nbx::testing::random_core_graph(8, 0.55, seed * 59 + 23);
        const DirectedEdgeIndex index(g);
        Rng rng(seed);
        const auto c = static_cast<NodeId>(next_index(rng, static_cast<std::uint64_t>(g.num_nodes())));
        const auto blocks = oracle::make_blocks(g, index, c);
        if (blocks.kept.empty()) continue;

        oracle::DenseEigen eig;
        try {
            eig = oracle::dense_eigen(blocks.b_prime);
        } catch (const oracle::ConditioningError&) {
            continue;
        }
        if (eig.perron < 0 || eig.lambda(eig.perron).real() <= 1.0 + 1e-9) continue;

        const auto dense = dense_post_removal(g, blocks, index);
        // route 1: u1^T X v1 with the biorthogonal left eigenvector, rescaled to
        // pair with the P-normalized v1
        const Eigen::VectorXcd v1 = dense.v.cast<std::complex<double>>();
        const Eigen::RowVectorXcd u1 = eig.l.row(eig.perron);
        const std::complex<double> pairing = u1 * v1;
        const std::complex<double> route1 =
            (u1 * blocks.x.cast<std::complex<double>>() * v1)(0, 0) / pairing;
        // route 2: v1^T P X v1
        const Eigen::MatrixXd px = oracle::reduced_reversal(blocks, index) * blocks.x;
        const double route2 = dense.v.transpose() * px * dense.v;
        // route 3: the node form through post-removal centralities
        double s1 = 0.0, s2 = 0.0;
        for (NodeId i : g.neighbors(c)) {
            s1 += dense.v_bar[static_cast<std::size_t>(i)];
            s2 += dense.v_bar[static_cast<std::size_t>(i)] * dense.v_bar[static_cast<std::size_t>(i)];
        }
        const double route3 = s1 * s1 - s2;

        CHECK(std::abs(route1.imag()) < 1e-8);
        CHECK(route1.real() == doctest::Approx(route3).epsilon(1e-8));
        CHECK(route2 == doctest::Approx(route3).epsilon(1e-8));
        CHECK(x_nb_exact(g, c).value == doctest::Approx(route3).epsilon(1e-7));
        ++verified;
    }
    CHECK(verified == 5);
}

TEST_CASE("X-NB scores vanish for degree-1 nodes") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Graph g = nbx::testing::random_graph_with_trees(8, 0.55, 5, seed * 19 + 4);
        const SpectralResult spectral = leading_eigenpair(g);
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
            if (g.degree(u) != 1) continue;
            CHECK(std::abs(x_nb_approx(g, u, spectral).value) < 1e-12);
            CHECK(std::abs(x_nb_exact(g, u).value) < 1e-9);
        }
    }
}

TEST_CASE("pearson correlation") {
    const double xs[] = {1.0, 2.0, 3.0, 4.0};
    const double ys[] = {2.0, 4.0, 6.0, 8.0};
    CHECK(pearson(xs, ys) == doctest::Approx(1.0));
    const double anti[] = {4.0, 3.0, 2.0, 1.0};
    CHECK(pearson(xs, anti) == doctest::Approx(-1.0));
    const double flat[] = {5.0, 5.0, 5.0, 5.0};
    CHECK(std::isnan(pearson(xs, flat)));  // zero-variance sentinel
}

TEST_CASE("batch centralities and ranking power") {
    SUBCASE("batch sweep matches single calls") {
        const Graph g = nbx::testing::random_core_graph(9, 0.5, 77);
        const auto xd = compute_centrality(g, CentralityKind::xdeg);
        const auto ci = compute_centrality(g, CentralityKind::ci);
        const auto deg = compute_centrality(g, CentralityKind::degree);
        for (NodeId c = 0; c < g.num_nodes(); ++c) {
            CHECK(xd.scores[static_cast<std::size_t>(c)] == x_degree(g, c));
            CHECK(ci.scores[static_cast<std::size_t>(c)] == collective_influence(g, c));
            CHECK(deg.scores[static_cast<std::size_t>(c)] == g.degree(c));
        }
    }
    SUBCASE("x_nb_exact correlates with the drop better than degree on BA graphs") {
        const Graph g = barabasi_albert(300, 6, 424242);
        const PredictResult result = predict_experiment(g, 0.05, 99);
        REQUIRE(result.rows.size() >= 5);
        CHECK(result.corr_alpha_exact > result.corr_degree);
    }
}
