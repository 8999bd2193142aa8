#include "nbx/nb_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nbx {

NbOperator::NbOperator(const Graph& g, const DirectedEdgeIndex& index) : graph_(g), index_(index) {}

void NbOperator::apply(std::span<const double> x, std::span<double> y) const {
    const NodeId n = graph_.num_nodes();
    const EdgeId dim = index_.count();
    std::vector<double> in_sum(static_cast<std::size_t>(n), 0.0);
    for (EdgeId e = 0; e < dim; ++e)
        in_sum[static_cast<std::size_t>(index_.target(e))] += x[static_cast<std::size_t>(e)];
    for (EdgeId e = 0; e < dim; ++e) {
        // e = k->l: all in-edges of k except the backtrack l->k
        y[static_cast<std::size_t>(e)] =
            in_sum[static_cast<std::size_t>(index_.source(e))] - x[static_cast<std::size_t>(DirectedEdgeIndex::reverse(e))];
    }
}

void NbOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
    const NodeId n = graph_.num_nodes();
    const EdgeId dim = index_.count();
    std::vector<double> out_sum(static_cast<std::size_t>(n), 0.0);
    for (EdgeId e = 0; e < dim; ++e)
        out_sum[static_cast<std::size_t>(index_.source(e))] += x[static_cast<std::size_t>(e)];
    for (EdgeId e = 0; e < dim; ++e) {
        // e = i->j: all out-edges of j except the backtrack j->i
        y[static_cast<std::size_t>(e)] =
            out_sum[static_cast<std::size_t>(index_.target(e))] - x[static_cast<std::size_t>(DirectedEdgeIndex::reverse(e))];
    }
}

void NbOperator::apply_reversal(std::span<const double> x, std::span<double> y) const {
    const EdgeId dim = index_.count();
    for (EdgeId e = 0; e < dim; ++e)
        y[static_cast<std::size_t>(e)] = x[static_cast<std::size_t>(DirectedEdgeIndex::reverse(e))];
}

AuxOperator::AuxOperator(const Graph& g) {
    const NodeId n = g.num_nodes();
    degree_.resize(static_cast<std::size_t>(n));
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (NodeId u = 0; u < n; ++u) {
        degree_[static_cast<std::size_t>(u)] = g.degree(u);
        offsets_[static_cast<std::size_t>(u) + 1] =
            offsets_[static_cast<std::size_t>(u)] + degree_[static_cast<std::size_t>(u)];
    }
    neighbors_.resize(static_cast<std::size_t>(offsets_.back()));
    for (NodeId u = 0; u < n; ++u) {
        auto nbrs = g.neighbors(u);
        std::copy(nbrs.begin(), nbrs.end(), neighbors_.begin() + offsets_[static_cast<std::size_t>(u)]);
    }
}

void AuxOperator::adjacency_times(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = degree_.size();
    for (std::size_t u = 0; u < n; ++u) {
        double sum = 0.0;
        for (std::int64_t k = offsets_[u]; k < offsets_[u + 1]; ++k)
            sum += x[static_cast<std::size_t>(neighbors_[static_cast<std::size_t>(k)])];
        y[u] = sum;
    }
}

void AuxOperator::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = degree_.size();
    auto top_in = x.subspan(0, n), bottom_in = x.subspan(n, n);
    auto top_out = y.subspan(0, n), bottom_out = y.subspan(n, n);
    // [0, D-I; -I, A] (x_t, x_b) = ((D-I) x_b, -x_t + A x_b)
    adjacency_times(bottom_in, bottom_out);
    for (std::size_t u = 0; u < n; ++u) {
        top_out[u] = (degree_[u] - 1.0) * bottom_in[u];
        bottom_out[u] -= top_in[u];
    }
}

void AuxOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = degree_.size();
    auto top_in = x.subspan(0, n), bottom_in = x.subspan(n, n);
    auto top_out = y.subspan(0, n), bottom_out = y.subspan(n, n);
    // [0, -I; D-I, A] (x_t, x_b) = (-x_b, (D-I) x_t + A x_b)
    adjacency_times(bottom_in, bottom_out);
    for (std::size_t u = 0; u < n; ++u) {
        top_out[u] = -bottom_in[u];
        bottom_out[u] += (degree_[u] - 1.0) * top_in[u];
    }
}

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// mu from the norm identity between v_bar and f, defined for lambda > 1
double normalization_factor(double lambda, std::span<const double> f, std::span<const NodeId> degrees) {
    double fdf = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) fdf += degrees[i] * f[i] * f[i];
    return std::sqrt(lambda * (lambda * lambda - 1.0) / (1.0 - fdf));
}

}  // namespace

SpectralResult leading_eigenpair(const Graph& g, const SpectralOptions& opt) {
    return leading_eigenpair(g, k_core_decomposition(g), opt);
}

SpectralResult leading_eigenpair(const Graph& g, const CoreLabels& cores, const SpectralOptions& opt) {
    const NodeId n = g.num_nodes();
    if (n == 0) throw EmptyGraphError("graph has no nodes");

    SpectralResult result;
    result.f.assign(static_cast<std::size_t>(n), 0.0);
    result.v_bar.assign(static_cast<std::size_t>(n), 0.0);

    std::int64_t core_nodes = 0;
    bool all_core_degree_two = true;
    for (NodeId u = 0; u < n; ++u) {
        if (!cores.in_two_core[static_cast<std::size_t>(u)]) continue;
        ++core_nodes;
        // degree within the 2-core
        NodeId core_deg = 0;
        for (NodeId v : g.neighbors(u))
            if (cores.in_two_core[static_cast<std::size_t>(v)]) ++core_deg;
        if (core_deg != 2) all_core_degree_two = false;
    }

    if (core_nodes == 0) {
        // B is nilpotent: lambda1 = 0, everything zero
        result.degenerate = true;
        return result;
    }
    if (all_core_degree_two) {
        // 2-core is a disjoint union of cycles: lambda1 = 1 exactly. The unit
        // aux eigenvector limit is uniform on the 2-core, and the symmetric
        // choice of edge eigenvector gives v_bar = 2f.
        result.lambda1 = 1.0;
        result.degenerate = true;
        const double fi = 1.0 / std::sqrt(2.0 * static_cast<double>(core_nodes));
        for (NodeId u = 0; u < n; ++u) {
            if (cores.in_two_core[static_cast<std::size_t>(u)]) {
                result.f[static_cast<std::size_t>(u)] = fi;
                result.v_bar[static_cast<std::size_t>(u)] = 2.0 * fi;
            }
        }
        return result;
    }

    AuxOperator aux(g);
    const std::size_t dim = static_cast<std::size_t>(aux.dimension());
    std::vector<double> x(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    std::vector<double> y(dim, 0.0);

    // Iterate (B_aux^T + I); the +1 shift makes lambda1 strictly dominant in
    // modulus even when the NB spectrum is symmetric (bipartite graphs), since
    // every eigenvalue satisfies |mu| <= lambda1.
    const double shift = 1.0;
    double estimate = 0.0;
    bool converged = false;
    long iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        aux.apply_transpose(x, y);
        for (std::size_t i = 0; i < dim; ++i) y[i] += shift * x[i];
        const double norm = norm2(y);
        if (norm == 0.0) break;  // start vector annihilated; flagged unconverged
        const double next = norm - shift;
        for (std::size_t i = 0; i < dim; ++i) x[i] = y[i] / norm;
        if (iter > 0 && std::abs(next - estimate) < opt.tol) {
            estimate = next;
            converged = true;
            ++iter;
            break;
        }
        estimate = next;
    }

    result.lambda1 = estimate;
    result.converged = converged;
    result.iterations = iter;

    double sign_sum = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(dim / 2), 0.0);
    const double sign = sign_sum < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < dim / 2; ++i) result.f[i] = sign * x[i];

    result.degenerate = result.lambda1 <= 1.0 + 1e-9;
    if (!result.degenerate) {
        std::vector<NodeId> degrees(static_cast<std::size_t>(n));
        for (NodeId u = 0; u < n; ++u) degrees[static_cast<std::size_t>(u)] = g.degree(u);
        const double mu = normalization_factor(result.lambda1, result.f, degrees);
        for (std::size_t i = 0; i < result.f.size(); ++i) result.v_bar[i] = mu * result.f[i];
    } else {
        for (std::size_t i = 0; i < result.f.size(); ++i) result.v_bar[i] = 2.0 * result.f[i];
    }
    return result;
}

SpectralResult nb_centrality(const Graph& g, const SpectralOptions& opt) {
    return leading_eigenpair(g, opt);
}

double eigen_drop_exact(const Graph& g, NodeId c, const SpectralOptions& opt) {
    const double before = leading_eigenpair(g, opt).lambda1;
    const double after = leading_eigenpair(remove_node(g, c), opt).lambda1;
    return before - after;
}

}  // namespace nbx
