#include "gossipnet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gossipnet/calibrate.hpp"
#include "gossipnet/rng.hpp"

namespace gossipnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream labels keeping graph, source and dissemination randomness apart.
constexpr std::uint64_t kGraphStream = 0x67726170;   // "grap"
constexpr std::uint64_t kSourceStream = 0x736f7572;  // "sour"
constexpr std::uint64_t kDissStream = 0x64697373;    // "diss"

void parallel_for(int count, int n_threads, const std::function<void(int)>& body);

}  // namespace

void ExperimentConfig::validate() const {
    topology.validate();
    if (n_graphs < 1)
        throw std::invalid_argument("experiment: n_graphs must be >= 1");
    if (n_sources_per_graph < 1)
        throw std::invalid_argument("experiment: n_sources_per_graph must be >= 1");
    if (sweep.empty())
        throw std::invalid_argument("experiment: sweep must be nonempty");
}

std::uint64_t experiment_graph_seed(std::uint64_t master_seed, int index) {
    return derive_seed(master_seed, kGraphStream, static_cast<std::uint64_t>(index));
}

double message_complexity(const DisseminationResult& r, int n_sites) {
    if (n_sites < 2)
        throw std::invalid_argument("message_complexity: need at least 2 sites");
    return static_cast<double>(r.messages_sent) / static_cast<double>(n_sites - 1);
}

int latency(const DisseminationResult& r) {
    std::int32_t max_hops = 0;
    for (const std::int32_t h : r.hop_distance)
        max_hops = std::max(max_hops, h);
    return max_hops;
}

namespace {

struct RunRecord {
    bool atomic = false;
    double m = 0.0;
    int lat = 0;
    std::vector<int> component_sizes;  // non-atomic runs only
};

std::vector<SiteId> sample_sources(int n_sites, int n_sources, Rng& rng,
                                   bool* with_replacement) {
    std::vector<SiteId> sources;
    sources.reserve(static_cast<std::size_t>(n_sources));
    if (n_sources > n_sites) {
        *with_replacement = true;
        for (int s = 0; s < n_sources; ++s)
            sources.push_back(static_cast<SiteId>(rng.next_below(static_cast<std::uint64_t>(n_sites))));
        return sources;
    }
    // Partial Fisher-Yates: first n_sources entries of a random permutation.
    std::vector<SiteId> perm(static_cast<std::size_t>(n_sites));
    std::iota(perm.begin(), perm.end(), 0);
    for (int t = 0; t < n_sources; ++t) {
        const int pick = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_sites - t)));
        std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(pick)]);
        sources.push_back(perm[static_cast<std::size_t>(t)]);
    }
    return sources;
}

double percentile_nearest_rank(std::vector<double> values, double q) {
    if (values.empty())
        return kNaN;
    std::sort(values.begin(), values.end());
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    if (rank > 0)
        --rank;
    return values[std::min(rank, values.size() - 1)];
}

void parallel_for(int count, int n_threads, const std::function<void(int)>& body) {
    int workers = n_threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency()) : n_threads;
    workers = std::clamp(workers, 1, std::max(1, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                // Static block partition: slot w gets [lo, hi).
                const int lo = static_cast<int>(static_cast<long long>(count) * w / workers);
                const int hi = static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
                for (int i = lo; i < hi; ++i)
                    body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    result.topology = cfg.topology.label();
    result.algorithm = policy_label(cfg.policy);
    result.master_seed = cfg.master_seed;

    // Graphs and sources are shared across sweep points: matched seeds
    // couple the points of one experiment.
    std::vector<Graph> graphs;
    graphs.reserve(static_cast<std::size_t>(cfg.n_graphs));
    std::vector<std::vector<SiteId>> sources(static_cast<std::size_t>(cfg.n_graphs));
    for (int gi = 0; gi < cfg.n_graphs; ++gi) {
        graphs.push_back(generate(cfg.topology, experiment_graph_seed(cfg.master_seed, gi)));
        Rng rng(derive_seed(cfg.master_seed, kSourceStream, static_cast<std::uint64_t>(gi)));
        bool with_replacement = false;
        sources[static_cast<std::size_t>(gi)] =
            sample_sources(cfg.topology.n_sites, cfg.n_sources_per_graph, rng, &with_replacement);
    }

    const int n_runs = cfg.n_graphs * cfg.n_sources_per_graph;
    const int n = cfg.topology.n_sites;
    const bool flooding = cfg.policy == PolicyKind::Flooding;
    const std::size_t n_points = flooding ? 1 : cfg.sweep.size();

    DegreeDistribution calibration_dist;
    if (!flooding && cfg.sweep_is_target_m)
        calibration_dist = analytic_degree_distribution(cfg.topology);

    for (std::size_t pi = 0; pi < n_points; ++pi) {
        SweepPointResult point;
        point.n_runs = n_runs;
        Policy policy{cfg.policy, 0.0};
        if (flooding) {
            point.param = kNaN;
            point.target_m = kNaN;
        } else if (cfg.sweep_is_target_m) {
            point.target_m = cfg.sweep[pi];
            try {
                point.param = solve_parameter({calibration_dist, cfg.policy, cfg.sweep[pi]});
            } catch (const std::exception& e) {
                point.error = e.what();
                result.points.push_back(std::move(point));
                continue;
            }
            policy.param = point.param;
        } else {
            point.param = cfg.sweep[pi];
            point.target_m = kNaN;
            policy.param = point.param;
        }

        std::vector<RunRecord> records(static_cast<std::size_t>(n_runs));
        parallel_for(n_runs, cfg.n_threads, [&](int run) {
            const int gi = run / cfg.n_sources_per_graph;
            const int si = run % cfg.n_sources_per_graph;
            const Graph& g = graphs[static_cast<std::size_t>(gi)];
            const SiteId source = sources[static_cast<std::size_t>(gi)][static_cast<std::size_t>(si)];
            // Pair seed does not involve the sweep point: shared draws
            // couple runs across parameters.
            const std::uint64_t seed =
                derive_seed(cfg.master_seed, kDissStream, static_cast<std::uint64_t>(run));
            const DisseminationGraph dg = build_dissemination_graph(g, policy, source, seed);
            const DisseminationResult r = disseminate(dg);
            RunRecord& rec = records[static_cast<std::size_t>(run)];
            rec.atomic = r.atomic;
            std::uint64_t omega = r.messages_sent;
            if (!cfg.count_source_messages)
                omega -= dg.out_arcs[static_cast<std::size_t>(source)].size();
            rec.m = static_cast<double>(omega) / static_cast<double>(n - 1);
            rec.lat = latency(r);
            if (!r.atomic) {
                const FailureReport report = classify_failure(g, dg, r);
                rec.component_sizes.reserve(report.uninfected_components.size());
                for (const auto& comp : report.uninfected_components)
                    rec.component_sizes.push_back(static_cast<int>(comp.size()));
            }
        });

        // Reduce in run order.
        double m_sum = 0.0, m_sq_sum = 0.0;
        std::vector<double> latencies;
        latencies.reserve(records.size());
        for (const RunRecord& rec : records) {
            m_sum += rec.m;
            m_sq_sum += rec.m * rec.m;
            if (rec.atomic)
                ++point.n_atomic;
            if (rec.atomic || cfg.latency_over_all_runs)
                latencies.push_back(static_cast<double>(rec.lat));
            if (!rec.atomic) {
                ++point.n_failed_runs;
                bool all_singletons = true;
                for (const int size : rec.component_sizes) {
                    ++point.failure_component_sizes[size];
                    if (size != 1)
                        all_singletons = false;
                }
                if (all_singletons)
                    ++point.n_failed_all_singletons;
            }
        }
        const double runs = static_cast<double>(n_runs);
        point.empirical_m = m_sum / runs;
        const double m_var = std::max(0.0, m_sq_sum / runs - point.empirical_m * point.empirical_m);
        point.empirical_m_stderr = std::sqrt(m_var / runs);
        point.reliability = static_cast<double>(point.n_atomic) / runs;
        point.reliability_stderr =
            std::sqrt(point.reliability * (1.0 - point.reliability) / runs);
        if (latencies.empty()) {
            point.latency_mean = kNaN;
            point.latency_p95 = kNaN;
        } else {
            point.latency_mean =
                std::accumulate(latencies.begin(), latencies.end(), 0.0) /
                static_cast<double>(latencies.size());
            point.latency_p95 = percentile_nearest_rank(latencies, 0.95);
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

namespace {

struct OracleArc {
    SiteId from = 0;
    SiteId to = 0;
    double prob = 0.0;
};

/// Reachability over explicit arc lists; intentionally separate from the
/// simulation BFS so the oracle stays an independent check.
bool reaches_all(int n, SiteId source, const std::vector<std::vector<SiteId>>& arcs) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
    std::vector<SiteId> stack{source};
    seen[static_cast<std::size_t>(source)] = 1;
    int count = 1;
    while (!stack.empty()) {
        const SiteId u = stack.back();
        stack.pop_back();
        for (const SiteId v : arcs[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n;
}

}  // namespace

OracleResult exact_reliability_oracle(const Graph& g, const Policy& policy, SiteId source,
                                      const OracleOptions& opts) {
    policy.validate();
    if (policy.kind != PolicyKind::EdgeProbability && policy.kind != PolicyKind::NeighborDegreeEdge)
        throw std::invalid_argument(
            "exact_reliability_oracle: only the independent-arc policies (pe, pine) are supported");
    const int n = g.n_sites();
    if (source < 0 || source >= n)
        throw std::invalid_argument("exact_reliability_oracle: source out of range");
    if (n == 1)
        return {1.0, true, 0.0, 1};

    const auto arc_prob = [&](SiteId to) {
        return policy.kind == PolicyKind::EdgeProbability
                   ? policy.param
                   : std::min(policy.param / g.degree(to), 1.0);
    };

    // Fixed arcs: the source broadcast plus any arc with probability 1.
    // Only genuinely uncertain arcs are enumerated.
    std::vector<std::vector<SiteId>> fixed(static_cast<std::size_t>(n));
    fixed[static_cast<std::size_t>(source)] = g.neighbors(source);
    std::vector<OracleArc> uncertain;
    for (SiteId i = 0; i < n; ++i) {
        if (i == source)
            continue;
        for (const SiteId j : g.neighbors(i)) {
            const double p = arc_prob(j);
            if (p >= 1.0)
                fixed[static_cast<std::size_t>(i)].push_back(j);
            else if (p > 0.0)
                uncertain.push_back({i, j, p});
        }
    }

    const int n_uncertain = static_cast<int>(uncertain.size());
    std::vector<std::vector<SiteId>> arcs = fixed;

    if (n_uncertain <= opts.max_exhaustive_arcs) {
        const std::uint64_t n_masks = 1ULL << n_uncertain;
        double total = 0.0;
        for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
            double prob = 1.0;
            for (int a = 0; a < n_uncertain; ++a) {
                const OracleArc& arc = uncertain[static_cast<std::size_t>(a)];
                if (mask & (1ULL << a)) {
                    prob *= arc.prob;
                    arcs[static_cast<std::size_t>(arc.from)].push_back(arc.to);
                } else {
                    prob *= 1.0 - arc.prob;
                }
            }
            if (reaches_all(n, source, arcs))
                total += prob;
            for (int a = 0; a < n_uncertain; ++a)
                if (mask & (1ULL << a))
                    arcs[static_cast<std::size_t>(uncertain[static_cast<std::size_t>(a)].from)].pop_back();
        }
        // Summing 2^A products accumulates rounding of order 1e-15.
        return {std::clamp(total, 0.0, 1.0), true, 0.0, n_masks};
    }

    if (!opts.allow_monte_carlo)
        throw std::length_error("exact_reliability_oracle: " + std::to_string(n_uncertain) +
                                " uncertain arcs exceed the exhaustive limit of " +
                                std::to_string(opts.max_exhaustive_arcs) +
                                "; enable the Monte-Carlo fallback for an estimate");

    Rng rng(opts.seed);
    std::uint64_t hits = 0;
    for (std::uint64_t run = 0; run < opts.mc_runs; ++run) {
        for (const OracleArc& arc : uncertain)
            if (rng.bernoulli(arc.prob))
                arcs[static_cast<std::size_t>(arc.from)].push_back(arc.to);
        if (reaches_all(n, source, arcs))
            ++hits;
        for (SiteId i = 0; i < n; ++i)
            arcs[static_cast<std::size_t>(i)].resize(fixed[static_cast<std::size_t>(i)].size());
    }
    OracleResult result;
    result.reliability = static_cast<double>(hits) / static_cast<double>(opts.mc_runs);
    result.exact = false;
    result.std_error = std::sqrt(result.reliability * (1.0 - result.reliability) /
                                 static_cast<double>(opts.mc_runs));
    result.runs = opts.mc_runs;
    return result;
}

std::string csv_header() {
    return "source,topology,algorithm,param,target_M,empirical_M,R,R_stderr,L_mean,L_p95,n_runs,seed";
}

std::string csv_format_number(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string to_csv_line(const CsvRow& row) {
    std::string line;
    line.reserve(160);
    line += row.source;
    line += ',';
    line += row.topology;
    line += ',';
    line += row.algorithm;
    line += ',';
    line += csv_format_number(row.param);
    line += ',';
    line += csv_format_number(row.target_m);
    line += ',';
    line += csv_format_number(row.empirical_m);
    line += ',';
    line += csv_format_number(row.reliability);
    line += ',';
    line += csv_format_number(row.reliability_stderr);
    line += ',';
    line += csv_format_number(row.latency_mean);
    line += ',';
    line += csv_format_number(row.latency_p95);
    line += ',';
    line += std::to_string(row.n_runs);
    line += ',';
    line += std::to_string(row.seed);
    return line;
}

std::vector<CsvRow> to_csv_rows(const ExperimentResult& result) {
    std::vector<CsvRow> rows;
    rows.reserve(result.points.size());
    for (const SweepPointResult& point : result.points) {
        if (!point.error.empty())
            continue;
        CsvRow row;
        row.source = "sim";
        row.topology = result.topology;
        row.algorithm = result.algorithm;
        row.param = point.param;
        row.target_m = point.target_m;
        row.empirical_m = point.empirical_m;
        row.reliability = point.reliability;
        row.reliability_stderr = point.reliability_stderr;
        row.latency_mean = point.latency_mean;
        row.latency_p95 = point.latency_p95;
        row.n_runs = point.n_runs;
        row.seed = result.master_seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace gossipnet
