#ifndef NBX_EXPERIMENT_HPP
#define NBX_EXPERIMENT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nbx/graph.hpp"
#include "nbx/nb_spectral.hpp"

namespace nbx {

/// Pearson correlation coefficient; NaN when either variable has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Degree-proportional node sample: `count` draws of a uniform directed edge
/// followed by taking its target, with replacement, then de-duplicated and
/// sorted. Sampling node i has probability d_i / 2m per draw.
std::vector<NodeId> degree_proportional_sample(const Graph& g, std::size_t count,
                                               std::uint64_t seed);

struct PredictRow {
    NodeId node = -1;
    NodeId degree = 0;
    double drop_true = 0.0;
    double lambda_true = 0.0;     // post-removal eigenvalue
    double lambda_hat = 0.0;      // prediction with the exact X-NB alpha
    double lambda_tilde = 0.0;    // prediction with the approximate alpha
    double alpha_exact = 0.0;
    double alpha_approx = 0.0;
    double x_degree = 0.0;
    double ci = 0.0;
    bool degenerate = false;
};

struct PredictResult {
    double lambda1 = 0.0;
    std::vector<PredictRow> rows;
    // correlation of each statistic with the true eigen-drop
    double corr_alpha_exact = 0.0;
    double corr_alpha_approx = 0.0;
    double corr_x_degree = 0.0;
    double corr_ci = 0.0;
    double corr_degree = 0.0;
};

/// Eigen-drop prediction sweep over a degree-proportional sample: per node the
/// true drop (exact recompute), both predictions, X-degree, CI, and degree;
/// plus the Pearson correlations of every statistic with the true drop.
PredictResult predict_experiment(const Graph& g, double sample_fraction, std::uint64_t seed,
                                 const SpectralOptions& opt = {});

}  // namespace nbx

#endif
