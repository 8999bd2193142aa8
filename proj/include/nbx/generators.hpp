#ifndef NBX_GENERATORS_HPP
#define NBX_GENERATORS_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "nbx/graph.hpp"

namespace nbx {

/// All generators draw from a seeded mt19937_64 through the helpers below,
/// so a seed fully determines the graph on every platform. Each generator
/// returns the simplified largest connected component.

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits.
double next_double(Rng& rng);
/// Uniform integer in [0, bound).
std::uint64_t next_index(Rng& rng, std::uint64_t bound);

Graph erdos_renyi(NodeId n, double p, std::uint64_t seed);

/// Preferential attachment: each new node attaches to `attach` distinct
/// existing nodes chosen proportionally to degree.
Graph barabasi_albert(NodeId n, NodeId attach, std::uint64_t seed);

/// Two-block stochastic block model parameterized by the expected
/// within-block and between-block degrees.
Graph stochastic_block_model(NodeId n, double within_degree, double between_degree,
                             std::uint64_t seed);

/// Degree sequence sampled from p_d proportional to d^-gamma on [d_min, n-1],
/// adjusted to an even sum.
std::vector<NodeId> powerlaw_degree_sequence(NodeId n, double gamma, NodeId d_min, Rng& rng);

/// Uniform stub pairing; returns the raw multigraph edge list (self-loops and
/// multi-edges included) whose degrees realize `degrees` exactly.
std::vector<std::pair<NodeId, NodeId>> pair_stubs(const std::vector<NodeId>& degrees, Rng& rng);

/// Configuration-model power-law graph: sample degrees, pair stubs, simplify,
/// keep the largest component.
Graph config_powerlaw(NodeId n, double gamma, std::uint64_t seed, NodeId d_min = 2);

}  // namespace nbx

#endif
