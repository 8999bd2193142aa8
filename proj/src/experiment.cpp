#include "nbx/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nbx/centrality.hpp"
#include "nbx/generators.hpp"

namespace nbx {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: size mismatch");
    const auto n = static_cast<double>(x.size());
    if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(vx * vy);
}

std::vector<NodeId> degree_proportional_sample(const Graph& g, std::size_t count,
                                               std::uint64_t seed) {
    const DirectedEdgeIndex index(g);
    if (index.count() == 0) throw EmptyGraphError("cannot sample from a graph without edges");
    Rng rng(seed);
    std::vector<NodeId> sampled;
    sampled.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto e = static_cast<EdgeId>(next_index(rng, static_cast<std::uint64_t>(index.count())));
        sampled.push_back(index.target(e));
    }
    std::sort(sampled.begin(), sampled.end());
    sampled.erase(std::unique(sampled.begin(), sampled.end()), sampled.end());
    return sampled;
}

PredictResult predict_experiment(const Graph& g, double sample_fraction, std::uint64_t seed,
                                 const SpectralOptions& opt) {
    if (sample_fraction <= 0.0 || sample_fraction > 1.0)
        throw std::invalid_argument("sample_fraction must lie in (0, 1]");

    const SpectralResult spectral = leading_eigenpair(g, opt);
    if (spectral.degenerate)
        throw std::runtime_error(
            "degenerate leading eigenvalue (lambda1 <= 1); check that the 2-core is nonempty");

    PredictResult result;
    result.lambda1 = spectral.lambda1;

    const auto count = static_cast<std::size_t>(
        std::max<std::int64_t>(1, static_cast<std::int64_t>(sample_fraction * g.num_nodes())));
    const std::vector<NodeId> nodes = degree_proportional_sample(g, count, seed);

    for (NodeId c : nodes) {
        PredictRow row;
        row.node = c;
        row.degree = g.degree(c);

        const Graph removed = remove_node(g, c);
        const SpectralResult after = leading_eigenpair(removed, opt);
        row.lambda_true = after.lambda1;
        row.drop_true = spectral.lambda1 - after.lambda1;
        row.degenerate = after.degenerate;

        double alpha = 0.0;
        if (after.lambda1 > 0.0) {
            double s1 = 0.0, s2 = 0.0;
            for (NodeId i : g.neighbors(c)) {
                const double t = after.v_bar[static_cast<std::size_t>(i)];
                s1 += t;
                s2 += t * t;
            }
            alpha = s1 * s1 - s2;
        }
        row.alpha_exact = alpha;
        row.alpha_approx = x_nb_approx(g, c, spectral).value;
        row.lambda_hat = predicted_lambda(spectral.lambda1, row.alpha_exact);
        row.lambda_tilde = predicted_lambda(spectral.lambda1, row.alpha_approx);
        row.x_degree = x_degree(g, c);
        row.ci = collective_influence(g, c);
        result.rows.push_back(row);
    }

    std::vector<double> drops, a_exact, a_approx, xdeg, ci, deg;
    for (const auto& row : result.rows) {
        drops.push_back(row.drop_true);
        a_exact.push_back(row.alpha_exact);
        a_approx.push_back(row.alpha_approx);
        xdeg.push_back(row.x_degree);
        ci.push_back(row.ci);
        deg.push_back(row.degree);
    }
    result.corr_alpha_exact = pearson(a_exact, drops);
    result.corr_alpha_approx = pearson(a_approx, drops);
    result.corr_x_degree = pearson(xdeg, drops);
    result.corr_ci = pearson(ci, drops);
    result.corr_degree = pearson(deg, drops);
    return result;
}

}  // namespace nbx
