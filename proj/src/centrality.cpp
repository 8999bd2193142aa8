#include "nbx/centrality.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace nbx {

std::string to_string(CentralityKind kind) {
    switch (kind) {
        case CentralityKind::degree: return "degree";
        case CentralityKind::core: return "core";
        case CentralityKind::ci: return "ci";
        case CentralityKind::nb: return "nb";
        case CentralityKind::xdeg: return "xdeg";
        case CentralityKind::xnb_exact: return "xnb_exact";
        case CentralityKind::xnb_approx: return "xnb_approx";
    }
    return "?";
}

double x_degree(const Graph& g, NodeId c) {
    std::int64_t s1 = 0, s2 = 0;
    for (NodeId i : g.neighbors(c)) {
        const std::int64_t t = g.degree(i) - 1;
        s1 += t;
        s2 += t * t;
    }
    return static_cast<double>(s1 * s1 - s2);
}

std::vector<double> x_degree_all(const Graph& g) {
    std::vector<double> scores(static_cast<std::size_t>(g.num_nodes()));
    for (NodeId c = 0; c < g.num_nodes(); ++c) scores[static_cast<std::size_t>(c)] = x_degree(g, c);
    return scores;
}

namespace {

// (sum over neighbors of values)^2 - sum of squares
double neighbor_quadratic_form(const Graph& g, NodeId c, std::span<const double> values) {
    double s1 = 0.0, s2 = 0.0;
    for (NodeId i : g.neighbors(c)) {
        const double t = values[static_cast<std::size_t>(i)];
        s1 += t;
        s2 += t * t;
    }
    return s1 * s1 - s2;
}

}  // namespace

XnbScore x_nb_exact(const Graph& g, NodeId c, const SpectralOptions& opt) {
    if (c < 0 || c >= g.num_nodes()) throw std::out_of_range("node id out of range");
    const Graph removed = remove_node(g, c);
    const SpectralResult spectral = leading_eigenpair(removed, opt);
    XnbScore score;
    score.converged = spectral.converged;
    score.degenerate = spectral.degenerate;
    if (spectral.lambda1 <= 0.0) {
        score.degenerate = true;
        return score;  // empty post-removal 2-core: X-NB is 0 by contract
    }
    score.value = neighbor_quadratic_form(g, c, spectral.v_bar);
    return score;
}

XnbScore x_nb_approx(const Graph& g, NodeId c, const SpectralResult& spectral) {
    if (c < 0 || c >= g.num_nodes()) throw std::out_of_range("node id out of range");
    XnbScore score;
    score.converged = spectral.converged;
    score.degenerate = spectral.degenerate;
    if (spectral.degenerate) return score;  // score 0 when the normalization is degenerate
    score.value = neighbor_quadratic_form(g, c, spectral.v_bar);
    return score;
}

std::vector<double> x_nb_approx_all(const Graph& g, const SpectralResult& spectral) {
    std::vector<double> scores(static_cast<std::size_t>(g.num_nodes()), 0.0);
    if (spectral.degenerate) return scores;
    for (NodeId c = 0; c < g.num_nodes(); ++c)
        scores[static_cast<std::size_t>(c)] = neighbor_quadratic_form(g, c, spectral.v_bar);
    return scores;
}

double predicted_lambda(double lambda1, double alpha) {
    if (lambda1 <= 0.0) throw std::domain_error("predicted_lambda requires lambda1 > 0");
    return lambda1 - alpha / (lambda1 * lambda1);
}

double collective_influence(const Graph& g, NodeId c) {
    const std::int64_t dc = g.degree(c) - 1;
    std::int64_t sum = 0;
    for (NodeId i : g.neighbors(c)) sum += g.degree(i) - 1;
    return static_cast<double>(dc * sum);
}

std::vector<double> collective_influence_all(const Graph& g) {
    std::vector<double> scores(static_cast<std::size_t>(g.num_nodes()));
    for (NodeId c = 0; c < g.num_nodes(); ++c)
        scores[static_cast<std::size_t>(c)] = collective_influence(g, c);
    return scores;
}

std::vector<double> EdgeStatVector::node_aggregates(const DirectedEdgeIndex& index,
                                                    NodeId num_nodes) const {
    if (z.size() != static_cast<std::size_t>(index.count()))
        throw std::invalid_argument("edge statistic size does not match the edge index");
    std::vector<double> agg(static_cast<std::size_t>(num_nodes), 0.0);
    for (EdgeId e = 0; e < index.count(); ++e)
        agg[static_cast<std::size_t>(index.target(e))] += z[static_cast<std::size_t>(e)];
    return agg;
}

namespace {

// z^i = sum over in-edges j->i of z, skipping edges incident to c
std::vector<double> aggregates_excluding(const Graph& g, const DirectedEdgeIndex& index, NodeId c,
                                         const EdgeStatVector& z) {
    if (c < 0 || c >= g.num_nodes()) throw std::out_of_range("node id out of range");
    if (z.z.size() != static_cast<std::size_t>(index.count()))
        throw std::invalid_argument("edge statistic size does not match the edge index");
    std::vector<double> agg(static_cast<std::size_t>(g.num_nodes()), 0.0);
    for (EdgeId e = 0; e < index.count(); ++e) {
        if (index.source(e) == c || index.target(e) == c) continue;
        agg[static_cast<std::size_t>(index.target(e))] += z.z[static_cast<std::size_t>(e)];
    }
    return agg;
}

}  // namespace

double x_centrality_generic(const Graph& g, const DirectedEdgeIndex& index, NodeId c,
                            const EdgeStatVector& z) {
    const std::vector<double> agg = aggregates_excluding(g, index, c, z);
    return neighbor_quadratic_form(g, c, agg);
}

VarianceRelation variance_relation_check(const Graph& g, const DirectedEdgeIndex& index, NodeId c,
                                         const EdgeStatVector& z) {
    const NodeId d = g.degree(c);
    if (d == 0) throw std::domain_error("variance relation requires degree >= 1");
    const std::vector<double> agg = aggregates_excluding(g, index, c, z);

    VarianceRelation rel;
    rel.quadratic_form = neighbor_quadratic_form(g, c, agg);
    double mean = 0.0, mean_sq = 0.0;
    for (NodeId i : g.neighbors(c)) {
        const double t = agg[static_cast<std::size_t>(i)];
        mean += t;
        mean_sq += t * t;
    }
    mean /= d;
    mean_sq /= d;
    rel.variance = mean_sq - mean * mean;
    return rel;
}

CentralityVector compute_centrality(const Graph& g, CentralityKind kind, const SpectralOptions& opt) {
    CentralityVector result;
    result.kind = kind;
    const NodeId n = g.num_nodes();
    switch (kind) {
        case CentralityKind::degree: {
            result.scores.resize(static_cast<std::size_t>(n));
            for (NodeId u = 0; u < n; ++u) result.scores[static_cast<std::size_t>(u)] = g.degree(u);
            break;
        }
        case CentralityKind::core: {
            const CoreLabels cores = k_core_decomposition(g);
            result.scores.assign(cores.core_index.begin(), cores.core_index.end());
            break;
        }
        case CentralityKind::ci: {
            result.scores = collective_influence_all(g);
            break;
        }
        case CentralityKind::xdeg: {
            result.scores = x_degree_all(g);
            break;
        }
        case CentralityKind::nb: {
            const SpectralResult spectral = leading_eigenpair(g, opt);
            result.scores = spectral.v_bar;
            result.lambda1 = spectral.lambda1;
            result.degenerate = spectral.degenerate;
            result.converged = spectral.converged;
            break;
        }
        case CentralityKind::xnb_approx: {
            const SpectralResult spectral = leading_eigenpair(g, opt);
            result.scores = x_nb_approx_all(g, spectral);
            result.lambda1 = spectral.lambda1;
            result.degenerate = spectral.degenerate;
            result.converged = spectral.converged;
            break;
        }
        case CentralityKind::xnb_exact: {
            const SpectralResult spectral = leading_eigenpair(g, opt);
            result.lambda1 = spectral.lambda1;
            result.scores.resize(static_cast<std::size_t>(n));
            for (NodeId c = 0; c < n; ++c) {
                const XnbScore score = x_nb_exact(g, c, opt);
                result.scores[static_cast<std::size_t>(c)] = score.value;
                result.degenerate = result.degenerate || score.degenerate;
                result.converged = result.converged && score.converged;
            }
            break;
        }
    }
    return result;
}

}  // namespace nbx
