#include "nbx/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbx {

double next_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_index(Rng& rng, std::uint64_t bound) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value;
    do {
        value = rng();
    } while (value >= limit);
    return value % bound;
}

namespace {

Graph cleanup(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    const Graph simplified = Graph::from_edges(n, edges);
    if (simplified.num_edges() == 0) throw EmptyGraphError("generated graph has no edges");
    return largest_connected_component(simplified).graph;
}

}  // namespace

Graph erdos_renyi(NodeId n, double p, std::uint64_t seed) {
    if (n <= 1 || p <= 0.0 || p > 1.0) throw std::invalid_argument("invalid G(n,p) parameters");
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    // geometric skips over the lexicographic pair ordering
    const double log_q = std::log1p(-p);
    std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
    std::int64_t at = -1;
    while (true) {
        double u = next_double(rng);
        if (u >= 1.0) u = std::nextafter(1.0, 0.0);
        const double skip = p >= 1.0 ? 1.0 : std::floor(std::log1p(-u) / log_q) + 1.0;
        if (skip > static_cast<double>(total - at)) break;
        at += static_cast<std::int64_t>(skip);
        if (at >= total) break;
        // invert at -> (i, j): row i has n-1-i pairs
        NodeId i = 0;
        std::int64_t offset = at;
        while (offset >= n - 1 - i) {
            offset -= n - 1 - i;
            ++i;
        }
        edges.emplace_back(i, static_cast<NodeId>(i + 1 + offset));
    }
    return cleanup(n, edges);
}

Graph barabasi_albert(NodeId n, NodeId attach, std::uint64_t seed) {
    if (attach < 1 || n <= attach) throw std::invalid_argument("invalid BA parameters");
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> urn;  // nodes repeated once per incident edge
    std::vector<NodeId> targets(static_cast<std::size_t>(attach));
    for (NodeId i = 0; i < attach; ++i) targets[static_cast<std::size_t>(i)] = i;
    for (NodeId v = attach; v < n; ++v) {
        for (NodeId t : targets) {
            edges.emplace_back(v, t);
            urn.push_back(v);
            urn.push_back(t);
        }
        // next target set: `attach` distinct degree-weighted draws
        std::vector<NodeId> next;
        while (static_cast<NodeId>(next.size()) < attach) {
            const NodeId pick = urn[next_index(rng, urn.size())];
            if (std::find(next.begin(), next.end(), pick) == next.end()) next.push_back(pick);
        }
        targets = std::move(next);
    }
    return cleanup(n, edges);
}

Graph stochastic_block_model(NodeId n, double within_degree, double between_degree,
                             std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("SBM needs at least 4 nodes");
    Rng rng(seed);
    const NodeId half = n / 2;
    const double p_in = within_degree / static_cast<double>(half - 1);
    const double p_out = between_degree / static_cast<double>(n - half);
    if (p_in > 1.0 || p_out > 1.0) throw std::invalid_argument("SBM degrees too large for n");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) {
        const bool block_i = i >= half;
        for (NodeId j = i + 1; j < n; ++j) {
            const double p = (block_i == (j >= half)) ? p_in : p_out;
            if (next_double(rng) < p) edges.emplace_back(i, j);
        }
    }
    return cleanup(n, edges);
}

std::vector<NodeId> powerlaw_degree_sequence(NodeId n, double gamma, NodeId d_min, Rng& rng) {
    if (n < 2 || d_min < 1 || gamma <= 1.0) throw std::invalid_argument("invalid power-law parameters");
    const NodeId d_max = n - 1;
    std::vector<double> cdf;
    cdf.reserve(static_cast<std::size_t>(d_max - d_min) + 1);
    double total = 0.0;
    for (NodeId d = d_min; d <= d_max; ++d) {
        total += std::pow(static_cast<double>(d), -gamma);
        cdf.push_back(total);
    }
    std::vector<NodeId> degrees(static_cast<std::size_t>(n));
    std::int64_t sum = 0;
    for (NodeId i = 0; i < n; ++i) {
        const double u = next_double(rng) * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        degrees[static_cast<std::size_t>(i)] = d_min + static_cast<NodeId>(it - cdf.begin());
        sum += degrees[static_cast<std::size_t>(i)];
    }
    if (sum % 2 != 0) {
        // resample single entries until the total stub count is even
        while (true) {
            const auto idx = static_cast<std::size_t>(next_index(rng, degrees.size()));
            const double u = next_double(rng) * total;
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            const NodeId fresh = d_min + static_cast<NodeId>(it - cdf.begin());
            if ((fresh - degrees[idx]) % 2 != 0) {
                degrees[idx] = fresh;
                break;
            }
        }
    }
    return degrees;
}

std::vector<std::pair<NodeId, NodeId>> pair_stubs(const std::vector<NodeId>& degrees, Rng& rng) {
    std::vector<NodeId> stubs;
    for (std::size_t i = 0; i < degrees.size(); ++i)
        for (NodeId k = 0; k < degrees[i]; ++k) stubs.push_back(static_cast<NodeId>(i));
    if (stubs.size() % 2 != 0) throw std::invalid_argument("degree sequence has odd sum");
    // Fisher-Yates with the shared rng keeps the pairing reproducible
    for (std::size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[next_index(rng, i)]);
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);
    return edges;
}

Graph config_powerlaw(NodeId n, double gamma, std::uint64_t seed, NodeId d_min) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const std::vector<NodeId> degrees = powerlaw_degree_sequence(n, gamma, d_min, rng);
        const auto edges = pair_stubs(degrees, rng);
        try {
            return cleanup(n, edges);
        } catch (const EmptyGraphError&) {
            continue;
        }
    }
    throw std::runtime_error("configuration model failed to produce a usable graph");
}

}  // namespace nbx
