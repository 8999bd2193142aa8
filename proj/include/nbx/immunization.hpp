#ifndef NBX_IMMUNIZATION_HPP
#define NBX_IMMUNIZATION_HPP

#include <string>
#include <vector>

#include "nbx/centrality.hpp"
#include "nbx/graph.hpp"
#include "nbx/nb_spectral.hpp"

namespace nbx {

enum class XdegBackend { map, ipq };

std::string to_string(XdegBackend backend);

struct ImmunizeOptions {
    /// When false, the per-step eigenvalue trace is skipped (lambda_before and
    /// lambda_after_each stay empty); intended for timing runs.
    bool record_trace = true;
    /// xdeg only: after every round, compare the incrementally maintained
    /// X-degrees against a from-scratch sweep (exact); result lands in
    /// ImmunizationReport::locality_audit_passed.
    bool audit_xdeg_locality = false;
    SpectralOptions spectral{};
};

struct ImmunizationReport {
    std::string strategy;
    std::string backend;  // "map"/"ipq" for xdeg, empty otherwise
    std::vector<NodeId> removed;
    double lambda_before = 0.0;
    std::vector<double> lambda_after_each;
    double wall_time_seconds = 0.0;  // selection + update machinery, trace excluded
    bool truncated = false;          // p exceeded the available nodes
    bool xdeg_fallback = false;      // approx strategy hit a degenerate spectrum
    bool locality_audit_passed = true;
    std::vector<NodeId> zero_score_removals;
};

/// Per round, evaluates the post-removal X-NB centrality of every node
/// (temporary removal each) and removes the argmax. Small graphs only.
ImmunizationReport immunize_naive_xnb(const Graph& g, int p, const ImmunizeOptions& opt = {});

/// Per round, one spectral solve on the current graph plus an approximate
/// X-NB sweep; falls back to X-degree ranking once the spectrum degenerates.
ImmunizationReport immunize_approx_xnb(const Graph& g, int p, const ImmunizeOptions& opt = {});

/// Greedy X-degree removal with incremental maintenance: after each removal
/// only the nodes within two steps of the removed node are recomputed. The
/// map and ipq backends produce identical removal sequences.
ImmunizationReport immunize_xdeg(const Graph& g, int p, XdegBackend backend,
                                 const ImmunizeOptions& opt = {});

/// Recompute-each-round greedy removal for kinds degree, core, ci, nb.
ImmunizationReport immunize_baseline(const Graph& g, int p, CentralityKind kind,
                                     const ImmunizeOptions& opt = {});

}  // namespace nbx

#endif
