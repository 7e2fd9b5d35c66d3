#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gossipnet/graph.hpp"
#include "gossipnet/rng.hpp"

namespace gossipnet {

/// The five forwarding disciplines. Short labels used in CLI and CSV
/// output: flooding, ff, pe, pisb, pine.
enum class PolicyKind {
    Flooding,             // forward to every neighbor
    FixedFanout,          // ff: forward to `fanout` uniformly chosen neighbors
    EdgeProbability,      // pe: use each edge independently with prob p_e
    SelfDegreeBroadcast,  // pisb: broadcast to all neighbors with prob min(c/deg(self),1)
    NeighborDegreeEdge,   // pine: use edge to j independently with prob min(c/deg(j),1)
};

std::string policy_label(PolicyKind kind);
PolicyKind policy_from_label(const std::string& label);

struct Policy {
    PolicyKind kind = PolicyKind::Flooding;
    double param = 0.0;  // fanout | p_e | c_v | c_e; unused for flooding

    static Policy flooding() { return {PolicyKind::Flooding, 0.0}; }
    static Policy fixed_fanout(double fanout) { return {PolicyKind::FixedFanout, fanout}; }
    static Policy edge_probability(double p) { return {PolicyKind::EdgeProbability, p}; }
    static Policy self_degree_broadcast(double c) { return {PolicyKind::SelfDegreeBroadcast, c}; }
    static Policy neighbor_degree_edge(double c) { return {PolicyKind::NeighborDegreeEdge, c}; }

    void validate() const;  // throws std::invalid_argument
    std::string label() const { return policy_label(kind); }
};

/// Neighbors of `site` selected for one forwarding round, sorted.
/// Fractional fanout f selects floor(f) neighbors plus one more with
/// probability f - floor(f), so swept message budgets can be hit exactly;
/// integer f reproduces the classic fixed-fanout rule.
std::vector<SiteId> forward_set(const Policy& policy, SiteId site, const Graph& g, Rng& rng);

/// Directed forwarding choices sampled up front: arc i->j means i would
/// forward to j on first reception. The source always broadcasts to all
/// of its neighbors and is exempt from the policy.
struct DisseminationGraph {
    SiteId source = 0;
    std::vector<std::vector<SiteId>> out_arcs;

    int n_sites() const { return static_cast<int>(out_arcs.size()); }
    std::size_t n_arcs() const;
};

/// Samples one dissemination graph. Per-site streams are derived from
/// (seed, site), so the result is independent of evaluation order and
/// identical across thread counts. Deterministic in (g, policy, source,
/// seed).
DisseminationGraph build_dissemination_graph(const Graph& g, const Policy& policy,
                                             SiteId source, std::uint64_t seed);

struct DisseminationResult {
    std::vector<std::uint8_t> infected;       // one flag per site
    std::vector<std::int32_t> hop_distance;   // -1 for uninfected sites
    std::uint64_t messages_sent = 0;          // sum of |out_arcs| over infected sites
    int infected_count = 0;
    bool atomic = false;                      // all sites infected
};

/// Directed reachability from the source: a site is infected iff some
/// directed path of arcs leads to it. messages_sent counts every arc out
/// of an infected site (duplicates delivered to already-infected sites
/// included).
DisseminationResult disseminate(const DisseminationGraph& dg);

struct FailureReport {
    /// Uninfected sites grouped into connected components of the
    /// underlying undirected graph; each component sorted, components
    /// ordered by smallest member.
    std::vector<std::vector<SiteId>> uninfected_components;
    /// Components of size 1 whose sole member has no incoming arc at all.
    int single_isolated_count = 0;

    bool empty() const { return uninfected_components.empty(); }
    int largest_component() const;
};

FailureReport classify_failure(const Graph& g, const DisseminationGraph& dg,
                               const DisseminationResult& r);

/// Arc-list text format: header "source s", then one "i j" line per arc.
/// The site count is not stored; the loader takes it from the caller
/// (normally the companion graph file).
void save_arc_list(const DisseminationGraph& dg, std::ostream& os);
DisseminationGraph load_arc_list(std::istream& is, int n_sites);

}  // namespace gossipnet
