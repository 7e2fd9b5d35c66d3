#include "gossipnet/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gossipnet {

std::size_t Graph::n_edges() const {
    std::size_t total = 0;
    for (const auto& nbrs : adjacency)
        total += nbrs.size();
    return total / 2;
}

double Graph::mean_degree() const {
    if (adjacency.empty())
        return 0.0;
    return 2.0 * static_cast<double>(n_edges()) / static_cast<double>(n_sites());
}

bool Graph::has_edge(SiteId u, SiteId v) const {
    const auto& nbrs = adjacency[static_cast<std::size_t>(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

void Graph::add_edge(SiteId u, SiteId v) {
    adjacency[static_cast<std::size_t>(u)].push_back(v);
    adjacency[static_cast<std::size_t>(v)].push_back(u);
}

void Graph::sort_adjacency() {
    for (auto& nbrs : adjacency)
        std::sort(nbrs.begin(), nbrs.end());
}

void Graph::validate() const {
    const int n = n_sites();
    for (SiteId i = 0; i < n; ++i) {
        const auto& nbrs = neighbors(i);
        for (std::size_t idx = 0; idx < nbrs.size(); ++idx) {
            const SiteId j = nbrs[idx];
            if (j < 0 || j >= n)
                throw std::invalid_argument("graph: neighbor id out of range");
            if (j == i)
                throw std::invalid_argument("graph: self-loop at site " + std::to_string(i));
            if (idx > 0 && nbrs[idx - 1] >= j)
                throw std::invalid_argument("graph: adjacency not sorted/unique at site " +
                                            std::to_string(i));
            if (!has_edge(j, i))
                throw std::invalid_argument("graph: asymmetric edge " + std::to_string(i) + "-" +
                                            std::to_string(j));
        }
    }
    if (!positions.empty() && static_cast<int>(positions.size()) != n)
        throw std::invalid_argument("graph: positions size mismatch");
}

std::vector<std::int32_t> bfs_hops(const Graph& g, SiteId source) {
    const int n = g.n_sites();
    std::vector<std::int32_t> hops(static_cast<std::size_t>(n), -1);
    if (source < 0 || source >= n)
        throw std::invalid_argument("bfs_hops: source out of range");
    std::vector<SiteId> queue;
    queue.reserve(static_cast<std::size_t>(n));
    hops[static_cast<std::size_t>(source)] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const SiteId u = queue[head];
        for (const SiteId v : g.neighbors(u)) {
            if (hops[static_cast<std::size_t>(v)] < 0) {
                hops[static_cast<std::size_t>(v)] = hops[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return hops;
}

bool is_connected(const Graph& g) {
    if (g.n_sites() == 0)
        return true;
    const auto hops = bfs_hops(g, 0);
    return std::none_of(hops.begin(), hops.end(), [](std::int32_t h) { return h < 0; });
}

double empirical_clustering(const Graph& g) {
    // Transitivity: closed connected triples over all connected triples.
    long long closed = 0, triples = 0;
    for (SiteId i = 0; i < g.n_sites(); ++i) {
        const auto& nbrs = g.neighbors(i);
        const long long d = static_cast<long long>(nbrs.size());
        triples += d * (d - 1) / 2;
        for (std::size_t a = 0; a + 1 < nbrs.size(); ++a)
            for (std::size_t b = a + 1; b < nbrs.size(); ++b)
                if (g.has_edge(nbrs[a], nbrs[b]))
                    ++closed;
    }
    if (triples == 0)
        throw std::domain_error("empirical_clustering: graph has no connected triple");
    return static_cast<double>(closed) / static_cast<double>(triples);
}

void save_edge_list(const Graph& g, std::ostream& os) {
    os << g.n_sites() << ' ' << g.n_edges() << '\n';
    for (SiteId u = 0; u < g.n_sites(); ++u)
        for (const SiteId v : g.neighbors(u))
            if (u < v)
                os << u << ' ' << v << '\n';
    if (!g.positions.empty()) {
        char buf[80];
        for (SiteId i = 0; i < g.n_sites(); ++i) {
            std::snprintf(buf, sizeof buf, "pos %d %.17g %.17g", i, g.positions[static_cast<std::size_t>(i)].x,
                          g.positions[static_cast<std::size_t>(i)].y);
            os << buf << '\n';
        }
    }
}

Graph load_edge_list(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("edge list: missing header");
    std::istringstream header(line);
    long long n = 0, e = 0;
    if (!(header >> n >> e) || n < 0 || e < 0)
        throw std::invalid_argument("edge list: bad header (want 'N E')");
    Graph g(static_cast<int>(n));
    long long edges_read = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "pos") {
            long long i = 0;
            double x = 0, y = 0;
            if (!(ls >> i >> x >> y) || i < 0 || i >= n)
                throw std::invalid_argument("edge list: bad position line: " + line);
            if (g.positions.empty())
                g.positions.resize(static_cast<std::size_t>(n));
            g.positions[static_cast<std::size_t>(i)] = {x, y};
            continue;
        }
        long long u = 0, v = 0;
        try {
            u = std::stoll(first);
        } catch (const std::exception&) {
            throw std::invalid_argument("edge list: bad edge line: " + line);
        }
        if (!(ls >> v))
            throw std::invalid_argument("edge list: bad edge line: " + line);
        if (u < 0 || v < 0 || u >= n || v >= n || u >= v)
            throw std::invalid_argument("edge list: edge ids out of range or not u < v: " + line);
        g.add_edge(static_cast<SiteId>(u), static_cast<SiteId>(v));
        ++edges_read;
    }
    if (edges_read != e)
        throw std::invalid_argument("edge list: header says " + std::to_string(e) + " edges, got " +
                                    std::to_string(edges_read));
    g.sort_adjacency();
    g.validate();
    return g;
}

}  // namespace gossipnet
