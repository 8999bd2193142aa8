#include "nbx/immunization.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_map>

#include "nbx/ipq.hpp"

namespace nbx {

std::string to_string(XdegBackend backend) {
    return backend == XdegBackend::map ? "map" : "ipq";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// argmax over alive nodes, smallest id on ties; -1 when none alive
NodeId argmax_alive(std::span<const double> scores, std::span<const char> alive) {
    NodeId best = -1;
    for (std::size_t u = 0; u < scores.size(); ++u) {
        if (!alive[u]) continue;
        if (best == -1 || scores[u] > scores[static_cast<std::size_t>(best)])
            best = static_cast<NodeId>(u);
    }
    return best;
}

void record_removal(ImmunizationReport& report, NodeId node, double score) {
    report.removed.push_back(node);
    if (score == 0.0) report.zero_score_removals.push_back(node);
}

// replays the removal sequence to record the eigenvalue trace (untimed)
void replay_trace(const Graph& g, ImmunizationReport& report, const SpectralOptions& opt) {
    report.lambda_before = leading_eigenpair(g, opt).lambda1;
    Graph current = g;
    for (NodeId node : report.removed) {
        current.detach_node(node);
        report.lambda_after_each.push_back(leading_eigenpair(current, opt).lambda1);
    }
}

int clamp_rounds(const Graph& g, int p, ImmunizationReport& report) {
    if (p < 0) throw std::invalid_argument("p must be non-negative");
    const int available = g.num_nodes();
    if (p > available) {
        report.truncated = true;
        return available;
    }
    return p;
}

}  // namespace

ImmunizationReport immunize_naive_xnb(const Graph& g, int p, const ImmunizeOptions& opt) {
    ImmunizationReport report;
    report.strategy = "xnb_naive";
    const int rounds = clamp_rounds(g, p, report);
    const NodeId n = g.num_nodes();

    const auto start = Clock::now();
    Graph current = g;
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
    for (int round = 0; round < rounds; ++round) {
        for (NodeId c = 0; c < n; ++c) {
            if (!alive[static_cast<std::size_t>(c)]) continue;
            scores[static_cast<std::size_t>(c)] = x_nb_exact(current, c, opt.spectral).value;
        }
        const NodeId node = argmax_alive(scores, alive);
        if (node < 0) break;
        record_removal(report, node, scores[static_cast<std::size_t>(node)]);
        alive[static_cast<std::size_t>(node)] = 0;
        current.detach_node(node);
    }
    report.wall_time_seconds = seconds_since(start);

    if (opt.record_trace) replay_trace(g, report, opt.spectral);
    return report;
}

ImmunizationReport immunize_approx_xnb(const Graph& g, int p, const ImmunizeOptions& opt) {
    ImmunizationReport report;
    report.strategy = "xnb";
    const int rounds = clamp_rounds(g, p, report);
    const NodeId n = g.num_nodes();

    const auto start = Clock::now();
    Graph current = g;
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    for (int round = 0; round < rounds; ++round) {
        std::vector<double> scores;
        if (!report.xdeg_fallback) {
            const SpectralResult spectral = leading_eigenpair(current, opt.spectral);
            if (spectral.degenerate)
                report.xdeg_fallback = true;
            else
                scores = x_nb_approx_all(current, spectral);
        }
        if (report.xdeg_fallback) scores = x_degree_all(current);

        const NodeId node = argmax_alive(scores, alive);
        if (node < 0) break;
        record_removal(report, node, scores[static_cast<std::size_t>(node)]);
        alive[static_cast<std::size_t>(node)] = 0;
        current.detach_node(node);
    }
    report.wall_time_seconds = seconds_since(start);

    if (opt.record_trace) replay_trace(g, report, opt.spectral);
    return report;
}

ImmunizationReport immunize_xdeg(const Graph& g, int p, XdegBackend backend,
                                 const ImmunizeOptions& opt) {
    ImmunizationReport report;
    report.strategy = "xdeg";
    report.backend = to_string(backend);
    const int rounds = clamp_rounds(g, p, report);
    const NodeId n = g.num_nodes();

    const auto start = Clock::now();
    Graph current = g;
    const std::vector<double> initial = x_degree_all(current);
    // map backend: a hash table holding the live scores, argmax by full scan;
    // ipq backend: indexed max-heap with logarithmic pop and update
    std::unordered_map<NodeId, double> dict;
    IndexedPriorityQueue queue;
    if (backend == XdegBackend::map) {
        dict.reserve(static_cast<std::size_t>(n));
        for (NodeId u = 0; u < n; ++u) dict.emplace(u, initial[static_cast<std::size_t>(u)]);
    } else {
        queue = IndexedPriorityQueue(initial);
    }

    std::vector<int> stamp(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> to_update;
    for (int round = 0; round < rounds; ++round) {
        NodeId node = -1;
        double node_score = 0.0;
        if (backend == XdegBackend::ipq) {
            if (queue.empty()) break;
            auto [key, score] = queue.pop();
            node = key;
            node_score = score;
        } else {
            for (const auto& [u, score] : dict) {
                if (node < 0 || score > node_score || (score == node_score && u < node)) {
                    node = u;
                    node_score = score;
                }
            }
            if (node < 0) break;
            dict.erase(node);
        }
        record_removal(report, node, node_score);

        // removing `node` changes the degree of its neighbors, so the
        // X-degree of the neighbors and of the neighbors' neighbors must be
        // refreshed; everything further away is untouched
        const std::vector<NodeId> neighbors(current.neighbors(node).begin(),
                                            current.neighbors(node).end());
        current.detach_node(node);
        to_update.clear();
        for (NodeId i : neighbors) {
            if (stamp[static_cast<std::size_t>(i)] != round) {
                stamp[static_cast<std::size_t>(i)] = round;
                to_update.push_back(i);
            }
            for (NodeId j : current.neighbors(i)) {
                if (stamp[static_cast<std::size_t>(j)] != round) {
                    stamp[static_cast<std::size_t>(j)] = round;
                    to_update.push_back(j);
                }
            }
        }
        for (NodeId u : to_update) {
            const double s = x_degree(current, u);
            if (backend == XdegBackend::ipq)
                queue.update(u, s);
            else
                dict[u] = s;
        }
        if (opt.audit_xdeg_locality) {
            const std::vector<double> fresh = x_degree_all(current);
            for (NodeId u = 0; u < n; ++u) {
                const bool removed_already =
                    backend == XdegBackend::ipq ? !queue.contains(u) : !dict.contains(u);
                if (removed_already) continue;
                const double held =
                    backend == XdegBackend::ipq ? queue.score_of(u) : dict.at(u);
                if (held != fresh[static_cast<std::size_t>(u)]) report.locality_audit_passed = false;
            }
        }
    }
    report.wall_time_seconds = seconds_since(start);

    if (opt.record_trace) replay_trace(g, report, opt.spectral);
    return report;
}

ImmunizationReport immunize_baseline(const Graph& g, int p, CentralityKind kind,
                                     const ImmunizeOptions& opt) {
    if (kind != CentralityKind::degree && kind != CentralityKind::core &&
        kind != CentralityKind::ci && kind != CentralityKind::nb)
        throw std::invalid_argument("baseline strategy must be one of degree, core, ci, nb");

    ImmunizationReport report;
    report.strategy = to_string(kind);
    const int rounds = clamp_rounds(g, p, report);
    const NodeId n = g.num_nodes();

    const auto start = Clock::now();
    Graph current = g;
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    for (int round = 0; round < rounds; ++round) {
        const CentralityVector stat = compute_centrality(current, kind, opt.spectral);
        const NodeId node = argmax_alive(stat.scores, alive);
        if (node < 0) break;
        record_removal(report, node, stat.scores[static_cast<std::size_t>(node)]);
        alive[static_cast<std::size_t>(node)] = 0;
        current.detach_node(node);
    }
    report.wall_time_seconds = seconds_since(start);

    if (opt.record_trace) replay_trace(g, report, opt.spectral);
    return report;
}

}  // namespace nbx
