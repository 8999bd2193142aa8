#ifndef NBX_CENTRALITY_HPP
#define NBX_CENTRALITY_HPP

#include <span>
#include <string>
#include <vector>

#include "nbx/graph.hpp"
#include "nbx/nb_spectral.hpp"

namespace nbx {

enum class CentralityKind { degree, core, ci, nb, xdeg, xnb_exact, xnb_approx };

std::string to_string(CentralityKind kind);

struct CentralityVector {
    CentralityKind kind;
    std::vector<double> scores;
    double lambda1 = 0.0;  // spectral provenance, 0 when not spectral
    bool degenerate = false;
    bool converged = true;
};

struct XnbScore {
    double value = 0.0;
    bool degenerate = false;
    bool converged = true;
};

/// X-degree of c: (sum over neighbors of (d_i - 1))^2 - sum of (d_i - 1)^2,
/// degrees taken in the original graph. Integer-valued and non-negative.
double x_degree(const Graph& g, NodeId c);
std::vector<double> x_degree_all(const Graph& g);

/// X-NB centrality of c with post-removal NB-centralities. Zero with the
/// degenerate flag when the removal empties the 2-core.
XnbScore x_nb_exact(const Graph& g, NodeId c, const SpectralOptions& opt = {});

/// X-NB centrality evaluated with the pre-removal centralities of `spectral`
/// (which must come from g itself).
XnbScore x_nb_approx(const Graph& g, NodeId c, const SpectralResult& spectral);
std::vector<double> x_nb_approx_all(const Graph& g, const SpectralResult& spectral);

/// Predicted post-removal eigenvalue lambda1 - alpha / lambda1^2.
double predicted_lambda(double lambda1, double alpha);

/// Collective Influence: (d_c - 1) * sum over neighbors of (d_i - 1).
double collective_influence(const Graph& g, NodeId c);
std::vector<double> collective_influence_all(const Graph& g);

/// Edge statistic indexed by a DirectedEdgeIndex, with the per-node aggregate
/// z^i = sum over in-edges j->i of z.
struct EdgeStatVector {
    std::vector<double> z;

    std::vector<double> node_aggregates(const DirectedEdgeIndex& index, NodeId num_nodes) const;
};

/// Generic X-centrality quadratic form z^T P X z for target c, using only the
/// entries of z on edges not incident to c.
double x_centrality_generic(const Graph& g, const DirectedEdgeIndex& index, NodeId c,
                            const EdgeStatVector& z);

struct VarianceRelation {
    double quadratic_form = 0.0;
    double variance = 0.0;
};

/// Both the quadratic form and the neighbor variance of z^i; they satisfy
/// z^T P X z = (d-1) * (sum z^i)^2 / d - d * Var.
VarianceRelation variance_relation_check(const Graph& g, const DirectedEdgeIndex& index, NodeId c,
                                         const EdgeStatVector& z);

/// Full per-node sweep of any centrality kind (one spectral solve at most).
CentralityVector compute_centrality(const Graph& g, CentralityKind kind,
                                    const SpectralOptions& opt = {});

}  // namespace nbx

#endif
