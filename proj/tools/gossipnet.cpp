// Command-line front end: generate topologies, run calibrated sweeps, emit
// model curves, query the exact small-instance oracle and diagnose saved
// runs. All randomness flows from explicit seeds; identical invocations
// produce byte-identical output.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gossipnet/calibrate.hpp"
#include "gossipnet/engine.hpp"
#include "gossipnet/model.hpp"

namespace {

using nlohmann::json;
using namespace gossipnet;

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitUsage = 1;
constexpr int kExitError = 2;

struct TopologyFlags {
    std::string kind;
    int n = 1000;
    double p = 0.0;
    double a = 0.0, b = 0.0, rho = 0.0;
    int m = 0, m0 = 0;

    TopologySpec to_spec() const {
        switch (topology_from_label(kind)) {
            case TopologyKind::Bernoulli: return TopologySpec::bernoulli(n, p);
            case TopologyKind::Geometric: return TopologySpec::geometric(n, a, b, rho);
            case TopologyKind::ScaleFree: return TopologySpec::scale_free(n, m, m0);
        }
        throw std::invalid_argument("unknown topology kind");
    }
};

void add_topology_flags(CLI::App* cmd, TopologyFlags* flags) {
    cmd->add_option("--topology", flags->kind, "bernoulli | geometric | scalefree")->required();
    cmd->add_option("--n", flags->n, "number of sites");
    cmd->add_option("--p", flags->p, "edge probability (bernoulli)");
    cmd->add_option("--a", flags->a, "region length (geometric)");
    cmd->add_option("--b", flags->b, "region width (geometric)");
    cmd->add_option("--rho", flags->rho, "connection radius (geometric)");
    cmd->add_option("--m", flags->m, "attachment degree (scalefree)");
    cmd->add_option("--m0", flags->m0, "seed clique size (scalefree)");
}

json topology_to_json(const TopologySpec& spec) {
    json j{{"kind", spec.label()}, {"n", spec.n_sites}};
    switch (spec.kind) {
        case TopologyKind::Bernoulli:
            j["p"] = spec.p_edge;
            break;
        case TopologyKind::Geometric:
            j["a"] = spec.region_length;
            j["b"] = spec.region_width;
            j["rho"] = spec.radius;
            break;
        case TopologyKind::ScaleFree:
            j["m"] = spec.m_attach;
            j["m0"] = spec.m0_clique;
            break;
    }
    return j;
}

TopologySpec topology_from_json(const json& j) {
    const auto kind = topology_from_label(j.at("kind").get<std::string>());
    const int n = j.at("n").get<int>();
    switch (kind) {
        case TopologyKind::Bernoulli:
            return TopologySpec::bernoulli(n, j.at("p").get<double>());
        case TopologyKind::Geometric:
            return TopologySpec::geometric(n, j.at("a").get<double>(), j.at("b").get<double>(),
                                           j.at("rho").get<double>());
        case TopologyKind::ScaleFree:
            return TopologySpec::scale_free(n, j.at("m").get<int>(), j.at("m0").get<int>());
    }
    throw std::invalid_argument("unknown topology kind");
}

struct SweepConfig {
    TopologySpec topology;
    std::vector<PolicyKind> policies;
    std::vector<double> sweep;
    bool sweep_is_target_m = true;
    int n_graphs = 10;
    int n_sources_per_graph = 50;
    std::uint64_t seed = 0;
    bool count_source_messages = true;
};

SweepConfig sweep_config_from_json(const json& root) {
    // Accept either a plain config or a manifest wrapping one.
    const json& j = root.contains("config") && root.value("tool", "") == "gossipnet"
                        ? root.at("config")
                        : root;
    SweepConfig cfg;
    cfg.topology = topology_from_json(j.at("topology"));
    for (const auto& label : j.at("policies"))
        cfg.policies.push_back(policy_from_label(label.get<std::string>()));
    const json& sweep = j.at("sweep");
    if (sweep.contains("target_m")) {
        cfg.sweep = sweep.at("target_m").get<std::vector<double>>();
        cfg.sweep_is_target_m = true;
    } else if (sweep.contains("params")) {
        cfg.sweep = sweep.at("params").get<std::vector<double>>();
        cfg.sweep_is_target_m = false;
    } else {
        throw std::invalid_argument("config: sweep needs 'target_m' or 'params'");
    }
    if (j.contains("runs")) {
        cfg.n_graphs = j.at("runs").value("graphs", cfg.n_graphs);
        cfg.n_sources_per_graph = j.at("runs").value("sources_per_graph", cfg.n_sources_per_graph);
    }
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
    } else if (const char* env_seed = std::getenv("GOSSIPNET_SEED")) {
        cfg.seed = std::strtoull(env_seed, nullptr, 10);
    }
    cfg.count_source_messages = j.value("count_source_messages", true);
    if (cfg.policies.empty())
        throw std::invalid_argument("config: at least one policy required");
    return cfg;
}

json sweep_config_to_json(const SweepConfig& cfg) {
    json policies = json::array();
    for (const PolicyKind policy : cfg.policies)
        policies.push_back(policy_label(policy));
    json sweep;
    sweep[cfg.sweep_is_target_m ? "target_m" : "params"] = cfg.sweep;
    return json{{"topology", topology_to_json(cfg.topology)},
                {"policies", policies},
                {"sweep", sweep},
                {"runs", {{"graphs", cfg.n_graphs}, {"sources_per_graph", cfg.n_sources_per_graph}}},
                {"seed", cfg.seed},
                {"count_source_messages", cfg.count_source_messages}};
}

std::vector<CsvRow> model_rows(const SweepConfig& cfg, PolicyKind policy) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<CsvRow> rows;
    if (policy == PolicyKind::Flooding) {
        const auto curve = model_curve(cfg.topology, policy, {0.0});
        rows.push_back({"model", cfg.topology.label(), policy_label(policy), nan, nan,
                        curve[0].predicted_m, curve[0].predicted_r, nan, nan, nan, 0, cfg.seed});
        return rows;
    }
    for (const double value : cfg.sweep) {
        double param = value;
        double target = nan;
        if (cfg.sweep_is_target_m) {
            target = value;
            try {
                param = solve_parameter(cfg.topology, policy, value);
            } catch (const std::exception& e) {
                std::cerr << "model: skipping " << policy_label(policy) << " target " << value
                          << ": " << e.what() << '\n';
                continue;
            }
        }
        const auto curve = model_curve(cfg.topology, policy, {param});
        rows.push_back({"model", cfg.topology.label(), policy_label(policy), param, target,
                        curve[0].predicted_m, curve[0].predicted_r, nan, nan, nan, 0, cfg.seed});
    }
    return rows;
}

int cmd_gen(const TopologyFlags& flags, std::uint64_t seed, const std::string& out_path) {
    const TopologySpec spec = flags.to_spec();
    spec.validate();
    for (const std::string& warning : spec.regime_warnings())
        std::cerr << "warning: " << warning << '\n';
    const Graph g = generate(spec, seed);
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot open " + out_path + " for writing");
    save_edge_list(g, out);
    if (!out.flush())
        throw std::runtime_error("write to " + out_path + " failed");
    std::cout << "sites " << g.n_sites() << '\n'
              << "edges " << g.n_edges() << '\n'
              << "mean_degree " << csv_format_number(g.mean_degree()) << '\n'
              << "connected " << (is_connected(g) ? "yes" : "no") << '\n'
              << "resamples " << g.resample_count << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const std::string& manifest_path, bool with_model, bool paper_scale,
              std::optional<int> runs_override, int threads) {
    std::ifstream in(config_path);
    if (!in)
        throw std::runtime_error("cannot open config " + config_path);
    SweepConfig cfg = sweep_config_from_json(json::parse(in));
    if (paper_scale) {
        cfg.n_graphs = 50;
        cfg.n_sources_per_graph = 200;
    }
    bool model_only = false;
    if (runs_override) {
        if (*runs_override == 0)
            model_only = true;  // pure model curves, no simulation
        else
            cfg.n_sources_per_graph = *runs_override;
    }
    if (cfg.n_sources_per_graph > cfg.topology.n_sites)
        std::cerr << "warning: more sources than sites; sampling sources with replacement\n";

    // Manifest goes out before any results.
    std::string manifest_file = manifest_path;
    if (manifest_file.empty() && !out_path.empty())
        manifest_file = out_path + ".manifest.json";
    if (!manifest_file.empty()) {
        json resolved;
        resolved["threads"] = threads;
        resolved["model_rows"] = with_model || model_only;
        resolved["model_only"] = model_only;
        json graph_seeds = json::array();
        for (int gi = 0; gi < cfg.n_graphs; ++gi)
            graph_seeds.push_back(experiment_graph_seed(cfg.seed, gi));
        resolved["graph_seeds"] = graph_seeds;
        const json manifest{{"tool", "gossipnet"},
                            {"version", kToolVersion},
                            {"subcommand", "sweep"},
                            {"config", sweep_config_to_json(cfg)},
                            {"resolved", resolved},
                            {"outputs", {{"csv", out_path.empty() ? "(stdout)" : out_path}}}};
        std::ofstream mf(manifest_file);
        if (!mf)
            throw std::runtime_error("cannot open manifest " + manifest_file);
        mf << manifest.dump(2) << '\n';
    }

    std::ostringstream csv;
    csv << csv_header() << '\n';
    if (!model_only) {
        for (const PolicyKind policy : cfg.policies) {
            ExperimentConfig ec;
            ec.topology = cfg.topology;
            ec.policy = policy;
            ec.sweep = cfg.sweep;
            ec.sweep_is_target_m = cfg.sweep_is_target_m;
            ec.n_graphs = cfg.n_graphs;
            ec.n_sources_per_graph = cfg.n_sources_per_graph;
            ec.master_seed = cfg.seed;
            ec.count_source_messages = cfg.count_source_messages;
            ec.n_threads = threads;
            const ExperimentResult result = run_experiment(ec);
            for (const auto& point : result.points)
                if (!point.error.empty())
                    std::cerr << "sweep: " << policy_label(policy) << " point "
                              << csv_format_number(cfg.sweep_is_target_m ? point.target_m : point.param)
                              << " skipped: " << point.error << '\n';
            for (const CsvRow& row : to_csv_rows(result))
                csv << to_csv_line(row) << '\n';
        }
    }
    if (with_model || model_only)
        for (const PolicyKind policy : cfg.policies)
            for (const CsvRow& row : model_rows(cfg, policy))
                csv << to_csv_line(row) << '\n';

    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::runtime_error("cannot open " + out_path + " for writing");
        out << csv.str();
        if (!out.flush())
            throw std::runtime_error("write to " + out_path + " failed");
    }
    return 0;
}

int cmd_calibrate(const TopologyFlags& flags, const std::string& policy_name, double target_m) {
    const TopologySpec spec = flags.to_spec();
    const PolicyKind policy = policy_from_label(policy_name);
    const double param = solve_parameter(spec, policy, target_m);
    const auto curve = model_curve(spec, policy, {param});
    std::cout << "param " << csv_format_number(param) << '\n'
              << "predicted_M " << csv_format_number(curve[0].predicted_m) << '\n'
              << "predicted_R " << csv_format_number(curve[0].predicted_r) << '\n';
    return 0;
}

int cmd_model(const TopologyFlags& flags, const std::string& policy_name,
              const std::vector<double>& targets, const std::vector<double>& params,
              std::uint64_t seed) {
    if (targets.empty() == params.empty())
        throw std::invalid_argument("model: give exactly one of --targets or --params");
    SweepConfig cfg;
    cfg.topology = flags.to_spec();
    cfg.policies = {policy_from_label(policy_name)};
    cfg.sweep = targets.empty() ? params : targets;
    cfg.sweep_is_target_m = !targets.empty();
    cfg.seed = seed;
    std::cout << csv_header() << '\n';
    for (const CsvRow& row : model_rows(cfg, cfg.policies[0]))
        std::cout << to_csv_line(row) << '\n';
    return 0;
}

int cmd_oracle(const std::string& graph_path, const std::string& policy_name, double param,
               int source, bool allow_mc, std::uint64_t mc_runs, std::uint64_t seed) {
    std::ifstream in(graph_path);
    if (!in)
        throw std::runtime_error("cannot open graph " + graph_path);
    const Graph g = load_edge_list(in);
    Policy policy{policy_from_label(policy_name), param};
    OracleOptions opts;
    opts.allow_monte_carlo = allow_mc;
    opts.mc_runs = mc_runs;
    opts.seed = seed;
    const OracleResult result = exact_reliability_oracle(g, policy, source, opts);
    std::cout << "reliability " << csv_format_number(result.reliability) << '\n'
              << "mode " << (result.exact ? "exact" : "monte-carlo") << '\n'
              << "runs " << result.runs << '\n';
    if (!result.exact)
        std::cout << "std_error " << csv_format_number(result.std_error) << '\n';
    return 0;
}

int cmd_classify(const std::string& graph_path, const std::string& arcs_path) {
    std::ifstream gin(graph_path);
    if (!gin)
        throw std::runtime_error("cannot open graph " + graph_path);
    const Graph g = load_edge_list(gin);
    std::ifstream ain(arcs_path);
    if (!ain)
        throw std::runtime_error("cannot open arc list " + arcs_path);
    const DisseminationGraph dg = load_arc_list(ain, g.n_sites());
    const DisseminationResult r = disseminate(dg);
    const FailureReport report = classify_failure(g, dg, r);
    std::cout << "atomic " << (r.atomic ? "yes" : "no") << '\n'
              << "infected " << r.infected_count << " of " << g.n_sites() << '\n'
              << "messages " << r.messages_sent << '\n'
              << "uninfected_components " << report.uninfected_components.size() << '\n'
              << "single_isolated " << report.single_isolated_count << '\n';
    for (const auto& comp : report.uninfected_components) {
        std::cout << "component size " << comp.size() << ":";
        for (const SiteId site : comp)
            std::cout << ' ' << site;
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gossip dissemination toolkit: random topologies, calibrated sweeps, analytic curves"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    TopologyFlags gen_flags;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a graph and write its edge list");
    add_topology_flags(gen, &gen_flags);
    gen->add_option("--seed", gen_seed, "generation seed")->envname("GOSSIPNET_SEED");
    gen->add_option("--out", gen_out, "edge-list output path")->required();

    std::string sweep_config, sweep_out, sweep_manifest;
    bool sweep_model = false, sweep_paper_scale = false;
    std::optional<int> sweep_runs;
    int sweep_threads = 0;
    auto* sweep = app.add_subcommand("sweep", "run a calibrated sweep from a JSON config");
    sweep->add_option("--config", sweep_config, "config or manifest JSON path")->required();
    sweep->add_option("--out", sweep_out, "CSV output path (default: stdout)");
    sweep->add_option("--manifest", sweep_manifest, "manifest path (default: <out>.manifest.json)");
    sweep->add_flag("--model", sweep_model, "append analytic model rows");
    sweep->add_flag("--paper-scale", sweep_paper_scale, "50 graphs x 200 sources instead of 10 x 50");
    sweep->add_option("--runs", sweep_runs, "0: model rows only; N: override sources per graph");
    sweep->add_option("--threads", sweep_threads, "worker threads (0: hardware)");

    TopologyFlags cal_flags;
    std::string cal_policy;
    double cal_target = 0.0;
    auto* calibrate = app.add_subcommand("calibrate", "solve the parameter for a target message complexity");
    add_topology_flags(calibrate, &cal_flags);
    calibrate->add_option("--policy", cal_policy, "ff | pe | pisb | pine")->required();
    calibrate->add_option("--target-m", cal_target, "target messages per site")->required();

    TopologyFlags model_flags;
    std::string model_policy;
    std::vector<double> model_targets, model_params;
    std::uint64_t model_seed = 1;
    auto* model = app.add_subcommand("model", "emit analytic (M, R) curves as CSV");
    add_topology_flags(model, &model_flags);
    model->add_option("--policy", model_policy, "flooding | ff | pe | pisb | pine")->required();
    model->add_option("--targets", model_targets, "target message complexities");
    model->add_option("--params", model_params, "raw policy parameters");
    model->add_option("--seed", model_seed, "seed recorded in the CSV")->envname("GOSSIPNET_SEED");

    std::string oracle_graph, oracle_policy = "pe";
    double oracle_param = 0.5;
    int oracle_source = 0;
    bool oracle_mc = false;
    std::uint64_t oracle_runs = 1'000'000, oracle_seed = 1;
    auto* oracle = app.add_subcommand("oracle", "exact reliability of a small saved graph");
    oracle->add_option("--graph", oracle_graph, "edge-list path")->required();
    oracle->add_option("--policy", oracle_policy, "pe | pine")->required();
    oracle->add_option("--param", oracle_param, "policy parameter")->required();
    oracle->add_option("--source", oracle_source, "source site id");
    oracle->add_flag("--mc", oracle_mc, "allow Monte-Carlo fallback on large instances");
    oracle->add_option("--mc-runs", oracle_runs, "Monte-Carlo sample count");
    oracle->add_option("--seed", oracle_seed, "Monte-Carlo seed")->envname("GOSSIPNET_SEED");

    std::string classify_graph, classify_arcs;
    auto* classify = app.add_subcommand("classify", "failure diagnostics for a saved dissemination");
    classify->add_option("--graph", classify_graph, "edge-list path")->required();
    classify->add_option("--arcs", classify_arcs, "arc-list path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_flags, gen_seed, gen_out);
        if (sweep->parsed())
            return cmd_sweep(sweep_config, sweep_out, sweep_manifest, sweep_model,
                             sweep_paper_scale, sweep_runs, sweep_threads);
        if (calibrate->parsed())
            return cmd_calibrate(cal_flags, cal_policy, cal_target);
        if (model->parsed())
            return cmd_model(model_flags, model_policy, model_targets, model_params, model_seed);
        if (oracle->parsed())
            return cmd_oracle(oracle_graph, oracle_policy, oracle_param, oracle_source, oracle_mc,
                              oracle_runs, oracle_seed);
        if (classify->parsed())
            return cmd_classify(classify_graph, classify_arcs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}
