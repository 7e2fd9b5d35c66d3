#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace gossipnet {

using SiteId = std::int32_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// Undirected network over N sites. Neighbor lists are sorted, symmetric,
/// self-loop free and duplicate free. Positions are present only for
/// geometric graphs. Immutable after construction; safe to share between
/// threads read-only.
struct Graph {
    std::vector<std::vector<SiteId>> adjacency;
    std::vector<Position> positions;  // empty unless geometric
    int resample_count = 0;           // disconnected draws rejected before this one

    Graph() = default;
    explicit Graph(int n) : adjacency(static_cast<std::size_t>(n)) {}

    int n_sites() const { return static_cast<int>(adjacency.size()); }
    int degree(SiteId i) const { return static_cast<int>(adjacency[static_cast<std::size_t>(i)].size()); }
    const std::vector<SiteId>& neighbors(SiteId i) const { return adjacency[static_cast<std::size_t>(i)]; }

    std::size_t n_edges() const;
    double mean_degree() const;
    bool has_edge(SiteId u, SiteId v) const;

    /// Appends both directions; call sort_adjacency() once all edges are in.
    void add_edge(SiteId u, SiteId v);
    void sort_adjacency();

    /// Throws std::invalid_argument if symmetry / self-loop / duplicate /
    /// sortedness invariants are violated.
    void validate() const;
};

bool is_connected(const Graph& g);

/// Undirected BFS hop counts from `source`; -1 for unreachable sites.
std::vector<std::int32_t> bfs_hops(const Graph& g, SiteId source);

/// Global transitivity: closed connected triples / all connected triples,
/// i.e. the probability that two neighbors of a common site are themselves
/// connected. Throws std::domain_error when the graph has no connected
/// triple.
double empirical_clustering(const Graph& g);

/// Edge-list text format: header "N E", then E lines "u v" with 0-based
/// ids and u < v; graphs with positions append one "pos i x y" line per
/// site. Round-trips exactly (positions are printed with 17 significant
/// digits).
void save_edge_list(const Graph& g, std::ostream& os);
Graph load_edge_list(std::istream& is);

}  // namespace gossipnet
