#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "nbx/centrality.hpp"
#include "nbx/experiment.hpp"
#include "nbx/generators.hpp"
#include "nbx/graph.hpp"
#include "nbx/immunization.hpp"
#include "nbx/nb_spectral.hpp"

using json = nlohmann::json;
using namespace nbx;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << content;
}

struct CliGraph {
    Graph graph;
    std::vector<std::int64_t> node_names;  // dense id -> id in the input file
};

CliGraph load_input(const std::string& path, bool lcc) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file: " + path);
    LoadedGraph loaded = load_edge_list(in);
    CliGraph result;
    if (lcc) {
        ComponentResult comp = largest_connected_component(loaded.graph);
        result.graph = std::move(comp.graph);
        for (NodeId u : comp.original_ids)
            result.node_names.push_back(loaded.summary.original_ids[static_cast<std::size_t>(u)]);
    } else {
        result.graph = std::move(loaded.graph);
        result.node_names = std::move(loaded.summary.original_ids);
    }
    return result;
}

std::string edge_list_text(const Graph& g, const std::string& header) {
    std::ostringstream out;
    out << "# " << header << "\n";
    for (NodeId u = 0; u < g.num_nodes(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v) out << u << " " << v << "\n";
    return out.str();
}

struct CommonFlags {
    std::string input;
    std::string output;
    std::string format = "json";
    bool lcc = false;
    SpectralOptions spectral{};
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_input = true) {
    auto* input = cmd->add_option("--input", flags.input, "edge-list input file");
    if (needs_input) input->required();
    cmd->add_option("--output", flags.output, "output file (stdout when omitted)");
    cmd->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--lcc", flags.lcc, "restrict to the largest connected component");
    cmd->add_option("--tol", flags.spectral.tol, "eigenvalue iteration tolerance");
    cmd->add_option("--max-iter", flags.spectral.max_iter, "eigenvalue iteration cap");
}

int run_spectral(const CommonFlags& flags, int top) {
    const CliGraph input = load_input(flags.input, flags.lcc);
    const SpectralResult r = leading_eigenpair(input.graph, flags.spectral);

    std::vector<std::pair<double, NodeId>> ranked;
    if (top > 0) {
        for (NodeId u = 0; u < input.graph.num_nodes(); ++u)
            ranked.emplace_back(r.v_bar[static_cast<std::size_t>(u)], u);
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (static_cast<std::size_t>(top) < ranked.size()) ranked.resize(static_cast<std::size_t>(top));
    }

    if (flags.format == "json") {
        json j;
        j["lambda1"] = r.lambda1;
        j["converged"] = r.converged;
        j["degenerate"] = r.degenerate;
        j["iterations"] = r.iterations;
        j["n"] = input.graph.num_nodes();
        j["m"] = input.graph.num_edges();
        if (top > 0) {
            json list = json::array();
            for (const auto& [score, node] : ranked)
                list.push_back({{"node", input.node_names[static_cast<std::size_t>(node)]},
                                {"score", score}});
            j["top_centralities"] = std::move(list);
        }
        write_text(flags.output, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "key,value\n";
        out << "lambda1," << fmt(r.lambda1) << "\n";
        out << "converged," << (r.converged ? 1 : 0) << "\n";
        out << "degenerate," << (r.degenerate ? 1 : 0) << "\n";
        out << "iterations," << r.iterations << "\n";
        out << "n," << input.graph.num_nodes() << "\n";
        out << "m," << input.graph.num_edges() << "\n";
        if (top > 0) {
            out << "node,score\n";
            for (const auto& [score, node] : ranked)
                out << input.node_names[static_cast<std::size_t>(node)] << "," << fmt(score) << "\n";
        }
        write_text(flags.output, out.str());
    }
    return 0;
}

int run_predict(const CommonFlags& flags, double sample_fraction, std::uint64_t seed) {
    const CliGraph input = load_input(flags.input, flags.lcc);
    const PredictResult result = predict_experiment(input.graph, sample_fraction, seed, flags.spectral);

    if (flags.format == "json") {
        json rows = json::array();
        for (const auto& row : result.rows) {
            rows.push_back({{"node", input.node_names[static_cast<std::size_t>(row.node)]},
                            {"degree", row.degree},
                            {"drop_true", row.drop_true},
                            {"lambda_true", row.lambda_true},
                            {"lambda_hat", row.lambda_hat},
                            {"lambda_tilde", row.lambda_tilde},
                            {"alpha_exact", row.alpha_exact},
                            {"alpha_approx", row.alpha_approx},
                            {"x_degree", row.x_degree},
                            {"ci", row.ci}});
        }
        json j;
        j["lambda1"] = result.lambda1;
        j["rows"] = std::move(rows);
        j["correlations"] = {{"alpha_exact", result.corr_alpha_exact},
                             {"alpha_approx", result.corr_alpha_approx},
                             {"x_degree", result.corr_x_degree},
                             {"ci", result.corr_ci},
                             {"degree", result.corr_degree}};
        write_text(flags.output, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "node,degree,drop_true,lambda_hat,lambda_tilde,x_degree,ci\n";
        for (const auto& row : result.rows)
            out << input.node_names[static_cast<std::size_t>(row.node)] << "," << row.degree << ","
                << fmt(row.drop_true) << "," << fmt(row.lambda_hat) << "," << fmt(row.lambda_tilde)
                << "," << fmt(row.x_degree) << "," << fmt(row.ci) << "\n";
        out << "# correlation,alpha_exact," << fmt(result.corr_alpha_exact) << "\n";
        out << "# correlation,alpha_approx," << fmt(result.corr_alpha_approx) << "\n";
        out << "# correlation,x_degree," << fmt(result.corr_x_degree) << "\n";
        out << "# correlation,ci," << fmt(result.corr_ci) << "\n";
        out << "# correlation,degree," << fmt(result.corr_degree) << "\n";
        write_text(flags.output, out.str());
    }
    return 0;
}

int run_immunize(const CommonFlags& flags, const std::string& strategy, const std::string& backend,
                 int p, double percent, bool timings, bool no_trace) {
    const CliGraph input = load_input(flags.input, flags.lcc);
    const NodeId n = input.graph.num_nodes();
    if (p < 0 && percent < 0.0) throw CLI::ValidationError("immunize", "one of --p or --percent is required");
    if (p < 0) p = std::max(1, static_cast<int>(std::floor(percent * n / 100.0)));

    ImmunizeOptions opt;
    opt.record_trace = !no_trace;
    opt.spectral = flags.spectral;

    ImmunizationReport report;
    if (strategy == "xdeg")
        report = immunize_xdeg(input.graph, p, backend == "map" ? XdegBackend::map : XdegBackend::ipq, opt);
    else if (strategy == "xnb")
        report = immunize_approx_xnb(input.graph, p, opt);
    else if (strategy == "degree")
        report = immunize_baseline(input.graph, p, CentralityKind::degree, opt);
    else if (strategy == "core")
        report = immunize_baseline(input.graph, p, CentralityKind::core, opt);
    else if (strategy == "ci")
        report = immunize_baseline(input.graph, p, CentralityKind::ci, opt);
    else if (strategy == "nb")
        report = immunize_baseline(input.graph, p, CentralityKind::nb, opt);
    else
        throw CLI::ValidationError("immunize", "unknown strategy: " + strategy);

    const double lambda_final =
        report.lambda_after_each.empty() ? report.lambda_before : report.lambda_after_each.back();
    const bool zero_spectrum = report.lambda_before <= 0.0;
    const double percent_drop =
        zero_spectrum ? 0.0 : 100.0 * (report.lambda_before - lambda_final) / report.lambda_before;

    json removed = json::array();
    for (NodeId node : report.removed)
        removed.push_back(input.node_names[static_cast<std::size_t>(node)]);
    json zero_removals = json::array();
    for (NodeId node : report.zero_score_removals)
        zero_removals.push_back(input.node_names[static_cast<std::size_t>(node)]);

    if (flags.format == "json") {
        json j;
        j["strategy"] = report.strategy;
        if (!report.backend.empty()) j["backend"] = report.backend;
        j["n"] = n;
        j["m"] = input.graph.num_edges();
        j["p"] = p;
        j["removed"] = std::move(removed);
        j["truncated"] = report.truncated;
        j["xdeg_fallback"] = report.xdeg_fallback;
        j["zero_score_removals"] = std::move(zero_removals);
        j["zero_spectrum"] = zero_spectrum;
        if (opt.record_trace) {
            j["lambda_before"] = report.lambda_before;
            j["lambda_after_each"] = report.lambda_after_each;
            j["percent_drop"] = percent_drop;
        }
        if (timings) j["wall_time_seconds"] = report.wall_time_seconds;
        write_text(flags.output, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "# strategy=" << report.strategy;
        if (!report.backend.empty()) out << " backend=" << report.backend;
        if (opt.record_trace)
            out << " lambda_before=" << fmt(report.lambda_before) << " percent_drop=" << fmt(percent_drop);
        if (timings) out << " wall_time_seconds=" << fmt(report.wall_time_seconds);
        out << "\n";
        out << "step,node,lambda_after\n";
        for (std::size_t i = 0; i < report.removed.size(); ++i) {
            out << (i + 1) << ","
                << input.node_names[static_cast<std::size_t>(report.removed[i])] << ",";
            if (opt.record_trace) out << fmt(report.lambda_after_each[i]);
            out << "\n";
        }
        write_text(flags.output, out.str());
    }

    if (opt.record_trace)
        std::cerr << "immunize " << report.strategy << ": removed " << report.removed.size()
                  << " node(s), lambda " << fmt(report.lambda_before) << " -> " << fmt(lambda_final)
                  << " (" << fmt(percent_drop) << "% drop)\n";
    return 0;
}

int run_scaling(const std::string& output, double gamma, const std::vector<NodeId>& n_list, int p,
                std::uint64_t seed, int reps, const std::string& backend_choice) {
    std::vector<XdegBackend> backends;
    if (backend_choice == "map" || backend_choice == "both") backends.push_back(XdegBackend::map);
    if (backend_choice == "ipq" || backend_choice == "both") backends.push_back(XdegBackend::ipq);

    std::ostringstream out;
    out << "n,backend,mean_seconds,std_seconds\n";
    std::vector<NodeId> sizes = n_list;
    std::sort(sizes.begin(), sizes.end());
    for (NodeId n : sizes) {
        // graphs are shared across backends so the comparison sees identical inputs
        std::vector<Graph> graphs;
        for (int rep = 0; rep < reps; ++rep)
            graphs.push_back(config_powerlaw(n, gamma, seed + static_cast<std::uint64_t>(rep)));
        for (const XdegBackend backend : backends) {
            double sum = 0.0, sum_sq = 0.0;
            for (const Graph& g : graphs) {
                const ImmunizeOptions opt{.record_trace = false};
                const ImmunizationReport report = immunize_xdeg(g, p, backend, opt);
                sum += report.wall_time_seconds;
                sum_sq += report.wall_time_seconds * report.wall_time_seconds;
            }
            const double mean = sum / reps;
            const double variance = std::max(0.0, sum_sq / reps - mean * mean);
            out << n << "," << to_string(backend) << "," << fmt(mean) << "," << fmt(std::sqrt(variance))
                << "\n";
        }
    }
    write_text(output, out.str());
    return 0;
}

int run_generate(const std::string& output, const std::string& model, NodeId n, double p_edge,
                 NodeId attach, double within, double between, double gamma, NodeId d_min,
                 std::uint64_t seed) {
    Graph g;
    std::ostringstream header;
    if (model == "er") {
        g = erdos_renyi(n, p_edge, seed);
        header << "er n=" << n << " p=" << fmt(p_edge);
    } else if (model == "ba") {
        g = barabasi_albert(n, attach, seed);
        header << "ba n=" << n << " attach=" << attach;
    } else if (model == "sbm") {
        g = stochastic_block_model(n, within, between, seed);
        header << "sbm n=" << n << " within=" << fmt(within) << " between=" << fmt(between);
    } else if (model == "config_powerlaw") {
        g = config_powerlaw(n, gamma, seed, d_min);
        header << "config_powerlaw n=" << n << " gamma=" << fmt(gamma) << " dmin=" << d_min;
    } else {
        throw CLI::ValidationError("generate", "unknown model: " + model);
    }
    header << " seed=" << seed << " nodes=" << g.num_nodes() << " edges=" << g.num_edges();
    write_text(output, edge_list_text(g, header.str()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-backtracking spectra, X-centralities, and node immunization"};
    app.require_subcommand(1);

    // spectral
    CommonFlags spectral_flags;
    int top = 0;
    auto* spectral_cmd = app.add_subcommand("spectral", "leading NB-eigenvalue and centralities");
    add_common(spectral_cmd, spectral_flags);
    spectral_cmd->add_option("--top", top, "also report the top-k NB-centralities");

    // predict
    CommonFlags predict_flags;
    double sample_fraction = 0.01;
    std::uint64_t predict_seed = 1;
    auto* predict_cmd = app.add_subcommand("predict", "eigen-drop prediction sweep");
    add_common(predict_cmd, predict_flags);
    predict_cmd->add_option("--sample-fraction", sample_fraction, "fraction of nodes to sample");
    predict_cmd->add_option("--seed", predict_seed, "sampling seed");

    // immunize
    CommonFlags immunize_flags;
    std::string strategy;
    std::string backend = "ipq";
    int p = -1;
    double percent = -1.0;
    bool timings = false;
    bool no_trace = false;
    auto* immunize_cmd = app.add_subcommand("immunize", "greedy node removal");
    add_common(immunize_cmd, immunize_flags);
    immunize_cmd->add_option("--strategy", strategy, "removal strategy")
        ->required()
        ->check(CLI::IsMember({"degree", "core", "ci", "nb", "xnb", "xdeg"}));
    immunize_cmd->add_option("--backend", backend, "xdeg backend")
        ->check(CLI::IsMember({"map", "ipq"}));
    immunize_cmd->add_option("--p", p, "number of nodes to remove");
    immunize_cmd->add_option("--percent", percent, "percentage of nodes to remove");
    immunize_cmd->add_flag("--timings", timings, "include wall time in the report");
    immunize_cmd->add_flag("--no-trace", no_trace, "skip the per-step eigenvalue trace");

    // scaling
    std::string scaling_output;
    double gamma = 2.5;
    std::vector<NodeId> n_list;
    int scaling_p = 100;
    std::uint64_t scaling_seed = 1;
    int reps = 10;
    std::string backend_choice = "both";
    auto* scaling_cmd = app.add_subcommand("scaling", "X-degree immunization runtime scaling");
    scaling_cmd->add_option("--output", scaling_output, "output file (stdout when omitted)");
    scaling_cmd->add_option("--gamma", gamma, "power-law exponent");
    scaling_cmd->add_option("--n-list", n_list, "graph sizes")->required()->delimiter(',');
    scaling_cmd->add_option("--p", scaling_p, "nodes removed per run");
    scaling_cmd->add_option("--seed", scaling_seed, "base seed");
    scaling_cmd->add_option("--reps", reps, "repetitions per size");
    scaling_cmd->add_option("--backend", backend_choice, "backend selection")
        ->check(CLI::IsMember({"map", "ipq", "both"}));

    // generate
    std::string gen_output;
    std::string model;
    NodeId gen_n = 1000;
    double p_edge = 0.01;
    NodeId attach = 6;
    double within = 9.0, between = 3.0;
    double gen_gamma = 2.5;
    NodeId d_min = 2;
    std::uint64_t gen_seed = 1;
    auto* generate_cmd = app.add_subcommand("generate", "synthetic graph generation");
    generate_cmd->add_option("--output", gen_output, "output file (stdout when omitted)");
    generate_cmd->add_option("--model", model, "graph model")
        ->required()
        ->check(CLI::IsMember({"er", "ba", "sbm", "config_powerlaw"}));
    generate_cmd->add_option("--n", gen_n, "node count");
    generate_cmd->add_option("--p", p_edge, "er edge probability");
    generate_cmd->add_option("--attach", attach, "ba attachment count");
    generate_cmd->add_option("--within", within, "sbm expected within-block degree");
    generate_cmd->add_option("--between", between, "sbm expected between-block degree");
    generate_cmd->add_option("--gamma", gen_gamma, "power-law exponent");
    generate_cmd->add_option("--dmin", d_min, "minimum degree of the sampled sequence");
    generate_cmd->add_option("--seed", gen_seed, "generation seed");

    try {
        app.parse(argc, argv);
        if (spectral_cmd->parsed()) return run_spectral(spectral_flags, top);
        if (predict_cmd->parsed()) return run_predict(predict_flags, sample_fraction, predict_seed);
        if (immunize_cmd->parsed())
            return run_immunize(immunize_flags, strategy, backend, p, percent, timings, no_trace);
        if (scaling_cmd->parsed())
            return run_scaling(scaling_output, gamma, n_list, scaling_p, scaling_seed, reps,
                               backend_choice);
        if (generate_cmd->parsed())
            return run_generate(gen_output, model, gen_n, p_edge, attach, within, between, gen_gamma,
                                d_min, gen_seed);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyGraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
