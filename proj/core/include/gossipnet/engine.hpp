#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gossipnet/gossip.hpp"
#include "gossipnet/topology.hpp"

namespace gossipnet {

/// One experiment: sweep a policy over parameter or target-M values on
/// n_graphs sampled graphs with n_sources_per_graph sources each.
/// Fully deterministic in the config; runs may execute on several threads
/// with per-(graph,source) derived seeds and index-ordered reduction.
struct ExperimentConfig {
    TopologySpec topology;
    PolicyKind policy = PolicyKind::EdgeProbability;
    std::vector<double> sweep;         // target M values or raw parameters
    bool sweep_is_target_m = true;
    int n_graphs = 10;
    int n_sources_per_graph = 50;
    std::uint64_t master_seed = 0;
    bool count_source_messages = true;   // include the source broadcast in omega
    bool latency_over_all_runs = false;  // default: latency aggregated over atomic runs only
    int n_threads = 1;                   // <= 0: hardware concurrency

    void validate() const;
};

struct SweepPointResult {
    double param = 0.0;
    double target_m = 0.0;  // NaN for raw-parameter sweeps
    double empirical_m = 0.0;
    double empirical_m_stderr = 0.0;
    double reliability = 0.0;
    double reliability_stderr = 0.0;
    double latency_mean = 0.0;  // NaN when no run qualifies
    double latency_p95 = 0.0;
    int n_runs = 0;
    int n_atomic = 0;
    /// Uninfected-component size -> count, over non-atomic runs.
    std::map<int, int> failure_component_sizes;
    int n_failed_runs = 0;
    int n_failed_all_singletons = 0;  // failed runs whose components are all size 1
    std::string error;                // nonempty: point skipped (e.g. calibration range)
};

struct ExperimentResult {
    std::string topology;
    std::string algorithm;
    std::uint64_t master_seed = 0;
    std::vector<SweepPointResult> points;
};

/// Derived seed of graph `index` under a master seed; exposed so run
/// manifests can list the resolved seeds.
std::uint64_t experiment_graph_seed(std::uint64_t master_seed, int index);

/// Runs the sweep. Graphs and sources are sampled once and shared across
/// sweep points (matched seeds, so e.g. edge-probability runs are coupled
/// across parameters). Calibration failures are recorded per point; graph
/// generation failures abort the experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// M = messages / (n - 1). Throws std::invalid_argument when n < 2.
double message_complexity(const DisseminationResult& r, int n_sites);

/// Hops of the longest shortest path among infected sites (0 for a
/// single-site graph). For non-atomic runs this is the max over the
/// infected set.
int latency(const DisseminationResult& r);

struct OracleOptions {
    bool allow_monte_carlo = false;     // fall back to sampling when too large
    std::uint64_t mc_runs = 1'000'000;
    std::uint64_t seed = 0x5eed;
    int max_exhaustive_arcs = 22;
};

struct OracleResult {
    double reliability = 0.0;
    bool exact = true;
    double std_error = 0.0;   // 0 for exact results
    std::uint64_t runs = 0;   // enumerated configurations or MC samples
};

/// Reference reliability for the independent-arc policies (pe, pine),
/// computed by direct enumeration: sums the probability of every
/// configuration of the uncertain non-source arcs in which all sites are
/// reachable. Source arcs are always present. Deliberately does not reuse
/// the simulation path, so it can serve as an independent oracle for it.
/// Throws std::invalid_argument for other policies and std::length_error
/// when the instance exceeds max_exhaustive_arcs and Monte-Carlo fallback
/// is disabled.
OracleResult exact_reliability_oracle(const Graph& g, const Policy& policy, SiteId source,
                                      const OracleOptions& opts = {});

/// CSV schema shared by simulation and model rows:
/// source,topology,algorithm,param,target_M,empirical_M,R,R_stderr,
/// L_mean,L_p95,n_runs,seed
/// Numbers print with %.10g; missing values print as nan. Model rows set
/// source=model, put the predicted M in empirical_M and use n_runs=0.
struct CsvRow {
    std::string source;  // "sim" or "model"
    std::string topology;
    std::string algorithm;
    double param = 0.0;
    double target_m = 0.0;
    double empirical_m = 0.0;
    double reliability = 0.0;
    double reliability_stderr = 0.0;
    double latency_mean = 0.0;
    double latency_p95 = 0.0;
    long n_runs = 0;
    std::uint64_t seed = 0;
};

std::string csv_header();
std::string csv_format_number(double v);
std::string to_csv_line(const CsvRow& row);
/// Skips errored points (they are reported on the result, not in the CSV).
std::vector<CsvRow> to_csv_rows(const ExperimentResult& result);

}  // namespace gossipnet
