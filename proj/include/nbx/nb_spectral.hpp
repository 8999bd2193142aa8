#ifndef NBX_NB_SPECTRAL_HPP
#define NBX_NB_SPECTRAL_HPP

#include <span>
#include <vector>

#include "nbx/graph.hpp"

namespace nbx {

struct SpectralOptions {
    double tol = 1e-10;
    long max_iter = 100000;
};

/// Leading eigenpair of the non-backtracking matrix, reported per node.
///
/// lambda1 is 0 when the 2-core is empty and exactly 1 when the 2-core is a
/// disjoint union of cycles; both cases are detected structurally and set
/// `degenerate`. Otherwise v_bar holds the NB-centralities normalized so the
/// underlying edge eigenvector v satisfies v^T P v = 1 (v_bar = mu * f).
struct SpectralResult {
    double lambda1 = 0.0;
    std::vector<double> f;      // first half of the unit left aux eigenvector
    std::vector<double> v_bar;  // per-node NB-centralities
    bool converged = true;
    bool degenerate = false;  // lambda1 <= 1: v^T P v = 1 normalization unattainable via mu
    long iterations = 0;
};

/// Matrix-free action of the 2m x 2m non-backtracking matrix B and of the
/// edge-reversal operator P on vectors indexed by a DirectedEdgeIndex.
class NbOperator {
public:
    NbOperator(const Graph& g, const DirectedEdgeIndex& index);

    EdgeId dimension() const { return index_.count(); }
    const DirectedEdgeIndex& edge_index() const { return index_; }

    /// y = B x:  y[k->l] = sum over in-edges i->k of x[i->k], minus x[l->k].
    void apply(std::span<const double> x, std::span<double> y) const;
    /// y = B^T x: y[i->j] = sum over out-edges j->l of x[j->l], minus x[j->i].
    void apply_transpose(std::span<const double> x, std::span<double> y) const;
    /// y = P x: edge reversal.
    void apply_reversal(std::span<const double> x, std::span<double> y) const;

private:
    const Graph& graph_;
    DirectedEdgeIndex index_;
};

/// Matrix-free action of the 2n x 2n auxiliary matrix
///   B_aux = [ 0, D - I; -I, A ]
/// and its transpose, on stacked (top, bottom) node vectors.
class AuxOperator {
public:
    explicit AuxOperator(const Graph& g);

    NodeId num_nodes() const { return static_cast<NodeId>(degree_.size()); }
    std::int64_t dimension() const { return 2 * static_cast<std::int64_t>(degree_.size()); }

    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_transpose(std::span<const double> x, std::span<double> y) const;

private:
    void adjacency_times(std::span<const double> x, std::span<double> y) const;

    std::vector<NodeId> degree_;
    std::vector<std::int64_t> offsets_;  // CSR copy of the adjacency
    std::vector<NodeId> neighbors_;
};

/// Leading NB-eigenpair via shifted power iteration on B_aux^T.
SpectralResult leading_eigenpair(const Graph& g, const SpectralOptions& opt = {});
SpectralResult leading_eigenpair(const Graph& g, const CoreLabels& cores, const SpectralOptions& opt = {});

/// NB-centralities v_bar (f-proportional scores when degenerate).
SpectralResult nb_centrality(const Graph& g, const SpectralOptions& opt = {});

/// lambda1(g) - lambda1(g with c removed); non-negative up to tolerance.
double eigen_drop_exact(const Graph& g, NodeId c, const SpectralOptions& opt = {});

}  // namespace nbx

#endif
