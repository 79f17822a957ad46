// Command-line front end: complexity | cluster | energy | fiedler | baseline-sweep.

#include "specgraph/analysis.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using namespace specgraph;

double parse_weight(const std::string &s) {
    if (s == "inf" || s == "INF" || s == "infinity")
        return kInfiniteWeight;
    std::size_t pos = 0;
    double w = 0.0;
    try {
        w = std::stod(s, &pos);
    } catch (const std::exception &) {
        throw ValidationError("--W must be a non-negative number or 'inf', got '" + s + "'");
    }
    if (pos != s.size() || !(w >= 0.0))
        throw ValidationError("--W must be a non-negative number or 'inf', got '" + s + "'");
    return w;
}

struct Options {
    AnalysisConfig config;
    std::string input, node_weights, out_dir = ".", W = "inf";
};

void add_input_options(CLI::App *cmd, Options &o) {
    cmd->add_option("--input,-i", o.input, "Edge list path")->required();
    cmd->add_option("--format", o.config.format, "Input format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, InputFormat>{{"snap", InputFormat::Snap}, {"csv", InputFormat::Csv}}));
    cmd->add_option("--node-weights", o.node_weights, "CSV 'node,alpha' with per-node weights");
    cmd->add_option("--out-dir,-o", o.out_dir, "Directory for report files");
}

void add_spectral_options(CLI::App *cmd, Options &o) {
    auto &c = o.config;
    cmd->add_option("--zero-policy", c.zero_policy, "Zero-eigenvalue counting policy")
        ->transform(CLI::CheckedTransformer(std::map<std::string, ZeroEigPolicy>{
            {"exclude", ZeroEigPolicy::ExcludeZeros},
            {"exclude_zeros", ZeroEigPolicy::ExcludeZeros},
            {"include", ZeroEigPolicy::IncludeZeros},
            {"include_zeros", ZeroEigPolicy::IncludeZeros}}));
    cmd->add_option("--zero-tol", c.tolerances.zero_mod_tol, "|lambda| below this counts as zero");
    cmd->add_option("--one-tol", c.tolerances.one_tol, "|lambda-1| below this counts as one");
    cmd->add_option("--real-axis-tol", c.tolerances.real_axis_tol, "|Im lambda| at most this means theta = 0");
    cmd->add_option("--generator-tol", c.tolerances.generator_match_tol, "Match radius for extra generators");
    cmd->add_option("--seed", c.seed, "RNG seed");
}

void add_scope_option(CLI::App *cmd, Options &o) {
    cmd->add_option("--scope", o.config.scope, "Node set to partition")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Scope>{{"full", Scope::Full}, {"largest_scc", Scope::LargestScc}}));
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spectral complexity and cycle clustering of directed graphs"};
    app.require_subcommand(1);
    Options o;
    auto &c = o.config;

    auto *complexity = app.add_subcommand("complexity", "Spectral and total complexity of a digraph");
    add_input_options(complexity, o);
    add_spectral_options(complexity, o);
    complexity->add_option("--W", o.W, "Weight of F in the total complexity ('inf' gives C = F)");
    complexity->add_option("--gamma", c.gamma, "Scale of the node/edge weight sum");
    complexity->add_option("--gamma-mode", c.gamma_source, "Use --gamma as given or estimate it over random graphs")
        ->transform(CLI::CheckedTransformer(std::map<std::string, GammaSource>{
            {"fixed", GammaSource::Fixed}, {"expectation", GammaSource::Expectation}, {"max", GammaSource::Max}}));
    complexity->add_option("--gamma-samples", c.gamma_samples, "Random graphs used to estimate gamma");
    complexity->add_option("--beta", c.beta_mode, "Edges whose weights enter the beta sum")
        ->transform(CLI::CheckedTransformer(std::map<std::string, BetaMode>{
            {"removed_edges", BetaMode::RemovedEdges}, {"all_edges", BetaMode::AllEdges}}));

    auto *cluster = app.add_subcommand("cluster", "Almost-cyclic clustering from generating eigenvalues");
    add_input_options(cluster, o);
    add_spectral_options(cluster, o);
    add_scope_option(cluster, o);
    cluster->add_option("--trim-step", c.trim_step, "Grid step of the kept-fraction sweep");
    cluster->add_option("--trim-rank", c.trim_rank, "Node ranking used when trimming clusters")
        ->transform(CLI::CheckedTransformer(std::map<std::string, TrimRank>{
            {"magnitude", TrimRank::MagnitudeDescending}, {"real", TrimRank::RealPartAscending}}));
    cluster->add_option("--kmax", c.k_cap, "Largest cycle order searched");
    cluster->add_option("--component-zero-tol", c.component_zero_tol, "Eigenvector entries below this are zero");
    bool no_fiedler = false;
    cluster->add_flag("--no-fiedler", no_fiedler, "Skip the Fiedler comparison");

    auto *energy = app.add_subcommand("energy", "Graph energy of the binary adjacency");
    add_input_options(energy, o);
    energy->add_flag("--symmetrize", c.symmetrize, "OR the adjacency with its transpose first");

    auto *fiedler = app.add_subcommand("fiedler", "Fiedler-vector bipartition of the symmetrized graph");
    add_input_options(fiedler, o);
    add_scope_option(fiedler, o);

    auto *sweep = app.add_subcommand("baseline-sweep", "F of random digraphs against average degree");
    add_spectral_options(sweep, o);
    sweep->add_option("--out-dir,-o", o.out_dir, "Directory for report files");
    sweep->add_option("--n", c.sweep_n, "Nodes per random graph");
    sweep->add_option("--degrees", c.sweep_degrees, "Comma-separated average degrees (default 1..20)")
        ->delimiter(',');
    sweep->add_option("--realizations", c.sweep_realizations, "Random graphs per degree");
    sweep->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        c.input = o.input;
        if (!o.node_weights.empty())
            c.node_weights = o.node_weights;
        c.out_dir = o.out_dir;
        c.W = parse_weight(o.W);
        c.fiedler_comparison = !no_fiedler;
        if (c.sweep_degrees.empty())
            for (int d = 1; d <= 20; ++d)
                c.sweep_degrees.push_back(d);

        Json report;
        if (*complexity)
            report = cmd_complexity(c);
        else if (*cluster)
            report = cmd_cluster(c);
        else if (*energy)
            report = cmd_energy(c);
        else if (*fiedler)
            report = cmd_fiedler(c);
        else
            report = cmd_baseline_sweep(c);
        std::cout << report.dump(2) << '\n';
        return 0;
    } catch (const Error &e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
