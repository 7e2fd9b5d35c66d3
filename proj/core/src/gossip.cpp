#include "gossipnet/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gossipnet {

std::string policy_label(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Flooding: return "flooding";
        case PolicyKind::FixedFanout: return "ff";
        case PolicyKind::EdgeProbability: return "pe";
        case PolicyKind::SelfDegreeBroadcast: return "pisb";
        case PolicyKind::NeighborDegreeEdge: return "pine";
    }
    return "?";
}

PolicyKind policy_from_label(const std::string& label) {
    if (label == "flooding") return PolicyKind::Flooding;
    if (label == "ff") return PolicyKind::FixedFanout;
    if (label == "pe") return PolicyKind::EdgeProbability;
    if (label == "pisb") return PolicyKind::SelfDegreeBroadcast;
    if (label == "pine") return PolicyKind::NeighborDegreeEdge;
    throw std::invalid_argument("unknown policy: " + label);
}

void Policy::validate() const {
    if (!std::isfinite(param) && kind != PolicyKind::Flooding)
        throw std::invalid_argument("policy: parameter must be finite");
    switch (kind) {
        case PolicyKind::Flooding:
            break;
        case PolicyKind::EdgeProbability:
            if (param < 0.0 || param > 1.0)
                throw std::invalid_argument("policy pe: probability must be in [0,1]");
            break;
        case PolicyKind::FixedFanout:
        case PolicyKind::SelfDegreeBroadcast:
        case PolicyKind::NeighborDegreeEdge:
            if (param < 0.0)
                throw std::invalid_argument("policy " + label() + ": parameter must be >= 0");
            break;
    }
}

std::vector<SiteId> forward_set(const Policy& policy, SiteId site, const Graph& g, Rng& rng) {
    const auto& nbrs = g.neighbors(site);
    const int deg = static_cast<int>(nbrs.size());
    std::vector<SiteId> out;
    if (deg == 0)
        return out;
    switch (policy.kind) {
        case PolicyKind::Flooding:
            return nbrs;
        case PolicyKind::FixedFanout: {
            const double f = policy.param;
            int fanout = static_cast<int>(std::floor(f));
            const double frac = f - std::floor(f);
            if (frac > 0.0 && rng.bernoulli(frac))
                ++fanout;
            if (fanout >= deg)
                return nbrs;
            if (fanout <= 0)
                return out;
            // Partial Fisher-Yates over a scratch copy.
            std::vector<SiteId> scratch = nbrs;
            for (int t = 0; t < fanout; ++t) {
                const int pick = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(deg - t)));
                std::swap(scratch[static_cast<std::size_t>(t)], scratch[static_cast<std::size_t>(pick)]);
            }
            out.assign(scratch.begin(), scratch.begin() + fanout);
            std::sort(out.begin(), out.end());
            return out;
        }
        case PolicyKind::EdgeProbability: {
            for (const SiteId j : nbrs)
                if (rng.bernoulli(policy.param))
                    out.push_back(j);
            return out;
        }
        case PolicyKind::SelfDegreeBroadcast: {
            const double p = std::min(policy.param / deg, 1.0);
            if (rng.bernoulli(p))
                return nbrs;
            return out;
        }
        case PolicyKind::NeighborDegreeEdge: {
            for (const SiteId j : nbrs)
                if (rng.bernoulli(std::min(policy.param / g.degree(j), 1.0)))
                    out.push_back(j);
            return out;
        }
    }
    throw std::invalid_argument("forward_set: unknown policy kind");
}

std::size_t DisseminationGraph::n_arcs() const {
    std::size_t total = 0;
    for (const auto& arcs : out_arcs)
        total += arcs.size();
    return total;
}

DisseminationGraph build_dissemination_graph(const Graph& g, const Policy& policy, SiteId source,
                                             std::uint64_t seed) {
    policy.validate();
    const int n = g.n_sites();
    if (source < 0 || source >= n)
        throw std::invalid_argument("build_dissemination_graph: source out of range");
    DisseminationGraph dg;
    dg.source = source;
    dg.out_arcs.resize(static_cast<std::size_t>(n));
    for (SiteId i = 0; i < n; ++i) {
        if (i == source) {
            dg.out_arcs[static_cast<std::size_t>(i)] = g.neighbors(i);  // source broadcast
            continue;
        }
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        dg.out_arcs[static_cast<std::size_t>(i)] = forward_set(policy, i, g, rng);
    }
    return dg;
}

DisseminationResult disseminate(const DisseminationGraph& dg) {
    const int n = dg.n_sites();
    DisseminationResult r;
    r.infected.assign(static_cast<std::size_t>(n), 0);
    r.hop_distance.assign(static_cast<std::size_t>(n), -1);
    std::vector<SiteId> queue;
    queue.reserve(static_cast<std::size_t>(n));
    r.infected[static_cast<std::size_t>(dg.source)] = 1;
    r.hop_distance[static_cast<std::size_t>(dg.source)] = 0;
    r.messages_sent += dg.out_arcs[static_cast<std::size_t>(dg.source)].size();
    r.infected_count = 1;
    queue.push_back(dg.source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const SiteId u = queue[head];
        for (const SiteId v : dg.out_arcs[static_cast<std::size_t>(u)]) {
            if (!r.infected[static_cast<std::size_t>(v)]) {
                r.infected[static_cast<std::size_t>(v)] = 1;
                r.hop_distance[static_cast<std::size_t>(v)] =
                    r.hop_distance[static_cast<std::size_t>(u)] + 1;
                r.messages_sent += dg.out_arcs[static_cast<std::size_t>(v)].size();
                ++r.infected_count;
                queue.push_back(v);
            }
        }
    }
    r.atomic = (r.infected_count == n);
    return r;
}

int FailureReport::largest_component() const {
    std::size_t largest = 0;
    for (const auto& comp : uninfected_components)
        largest = std::max(largest, comp.size());
    return static_cast<int>(largest);
}

FailureReport classify_failure(const Graph& g, const DisseminationGraph& dg,
                               const DisseminationResult& r) {
    const int n = g.n_sites();
    if (dg.n_sites() != n || static_cast<int>(r.infected.size()) != n)
        throw std::invalid_argument("classify_failure: mismatched graph/result sizes");
    FailureReport report;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
    std::vector<SiteId> queue;
    for (SiteId start = 0; start < n; ++start) {
        if (r.infected[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)])
            continue;
        // Component of uninfected sites in the underlying graph.
        queue.clear();
        queue.push_back(start);
        seen[static_cast<std::size_t>(start)] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const SiteId u = queue[head];
            for (const SiteId v : g.neighbors(u)) {
                if (!r.infected[static_cast<std::size_t>(v)] && !seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    queue.push_back(v);
                }
            }
        }
        std::vector<SiteId> comp = queue;
        std::sort(comp.begin(), comp.end());
        if (comp.size() == 1) {
            const SiteId u = comp.front();
            bool has_incoming = false;
            for (const SiteId v : g.neighbors(u)) {
                const auto& arcs = dg.out_arcs[static_cast<std::size_t>(v)];
                if (std::binary_search(arcs.begin(), arcs.end(), u)) {
                    has_incoming = true;
                    break;
                }
            }
            if (!has_incoming)
                ++report.single_isolated_count;
        }
        report.uninfected_components.push_back(std::move(comp));
    }
    return report;
}

void save_arc_list(const DisseminationGraph& dg, std::ostream& os) {
    os << "source " << dg.source << '\n';
    for (SiteId i = 0; i < dg.n_sites(); ++i)
        for (const SiteId j : dg.out_arcs[static_cast<std::size_t>(i)])
            os << i << ' ' << j << '\n';
}

DisseminationGraph load_arc_list(std::istream& is, int n_sites) {
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("arc list: missing header");
    std::istringstream header(line);
    std::string tag;
    long long source = -1;
    if (!(header >> tag >> source) || tag != "source" || source < 0 || source >= n_sites)
        throw std::invalid_argument("arc list: bad header (want 'source s')");
    DisseminationGraph dg;
    dg.source = static_cast<SiteId>(source);
    dg.out_arcs.resize(static_cast<std::size_t>(n_sites));
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        long long i = -1, j = -1;
        if (!(ls >> i >> j) || i < 0 || j < 0 || i >= n_sites || j >= n_sites || i == j)
            throw std::invalid_argument("arc list: bad arc line: " + line);
        dg.out_arcs[static_cast<std::size_t>(i)].push_back(static_cast<SiteId>(j));
    }
    for (auto& arcs : dg.out_arcs)
        std::sort(arcs.begin(), arcs.end());
    return dg;
}

}  // namespace gossipnet
