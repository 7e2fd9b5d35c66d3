#include "gossipnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gossipnet/rng.hpp"

namespace gossipnet {

namespace {

constexpr int kMaxResamples = 64;
constexpr double kGeometricClustering = 0.5865;
constexpr double kTruncationMassLimit = 1e-3;

double sq(double x) { return x * x; }

Graph bernoulli_graph(int n, double p, Rng& rng) {
    Graph g(n);
    for (SiteId u = 0; u < n; ++u)
        for (SiteId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p))
                g.add_edge(u, v);
    g.sort_adjacency();
    return g;
}

Graph geometric_graph(int n, double a, double b, double rho, Rng& rng) {
    Graph g(n);
    g.positions.resize(static_cast<std::size_t>(n));
    for (auto& pos : g.positions) {
        pos.x = rng.next_double() * a;
        pos.y = rng.next_double() * b;
    }
    const double rho2 = rho * rho;
    for (SiteId u = 0; u < n; ++u) {
        const Position pu = g.positions[static_cast<std::size_t>(u)];
        for (SiteId v = u + 1; v < n; ++v) {
            const Position pv = g.positions[static_cast<std::size_t>(v)];
            if (sq(pu.x - pv.x) + sq(pu.y - pv.y) <= rho2)  // ties connect
                g.add_edge(u, v);
        }
    }
    g.sort_adjacency();
    return g;
}

Graph scale_free_graph(int n, int m, int m0, Rng& rng) {
    Graph g(n);
    // Every edge contributes both endpoints to the pool, so uniform pool
    // draws are degree-proportional draws.
    std::vector<SiteId> pool;
    pool.reserve(2 * (static_cast<std::size_t>(m0) * (m0 - 1) / 2 + static_cast<std::size_t>(m) * (n - m0)));
    for (SiteId u = 0; u < m0; ++u)
        for (SiteId v = u + 1; v < m0; ++v) {
            g.add_edge(u, v);
            pool.push_back(u);
            pool.push_back(v);
        }
    std::vector<SiteId> targets;
    targets.reserve(static_cast<std::size_t>(m));
    for (SiteId site = m0; site < n; ++site) {
        targets.clear();
        // Degree-proportional without replacement: rejected repeats leave
        // the remaining draws proportional to degree among unchosen sites.
        while (static_cast<int>(targets.size()) < m) {
            const SiteId candidate = pool[rng.next_below(pool.size())];
            if (std::find(targets.begin(), targets.end(), candidate) == targets.end())
                targets.push_back(candidate);
        }
        // Pool grows only after all m picks: a new site cannot attach to
        // itself or bias its own round.
        for (const SiteId t : targets) {
            g.add_edge(site, t);
            pool.push_back(site);
            pool.push_back(t);
        }
    }
    g.sort_adjacency();
    return g;
}

std::vector<double> poisson_probs(int n, double mean) {
    std::vector<double> probs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        probs[static_cast<std::size_t>(k)] =
            std::exp(-mean + k * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0));
    return probs;
}

DegreeDistribution finalize_distribution(std::vector<double> probs, int n, const char* what) {
    double mass = 0.0;
    for (const double p : probs)
        mass += p;
    if (!(mass > 0.0) || 1.0 - mass > kTruncationMassLimit)
        throw std::runtime_error(std::string(what) +
                                 ": truncation to degrees < N loses too much mass (sum = " +
                                 std::to_string(mass) + ")");
    for (double& p : probs)
        p /= mass;
    DegreeDistribution dist{std::move(probs), n};
    dist.validate();
    return dist;
}

// Adaptive Simpson with an absolute tolerance, for the border kernel.
struct SimpsonState {
    int k = 0;
    double vbar_s = 0.0;
    int evaluations = 0;
};

double border_integrand(double x, const SimpsonState& st) {
    const double fx = geometric_visible_fraction(x);
    return std::exp(-st.vbar_s * (fx - 1.0) + st.k * std::log(fx));
}

double simpson_recurse(SimpsonState& st, double lo, double hi, double flo, double fmid, double fhi,
                       double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flmid = border_integrand(lmid, st);
    const double frmid = border_integrand(rmid, st);
    st.evaluations += 2;
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw std::runtime_error("geometric_border_kernel: quadrature did not converge (k=" +
                                 std::to_string(st.k) + ", interval [" + std::to_string(lo) + "," +
                                 std::to_string(hi) + "], residual " + std::to_string(delta) +
                                 ", evaluations " + std::to_string(st.evaluations) + ")");
    return simpson_recurse(st, lo, mid, flo, flmid, fmid, left, tol / 2.0, depth - 1) +
           simpson_recurse(st, mid, hi, fmid, frmid, fhi, right, tol / 2.0, depth - 1);
}

}  // namespace

std::string topology_label(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Bernoulli: return "bernoulli";
        case TopologyKind::Geometric: return "geometric";
        case TopologyKind::ScaleFree: return "scalefree";
    }
    return "?";
}

TopologyKind topology_from_label(const std::string& label) {
    if (label == "bernoulli") return TopologyKind::Bernoulli;
    if (label == "geometric") return TopologyKind::Geometric;
    if (label == "scalefree") return TopologyKind::ScaleFree;
    throw std::invalid_argument("unknown topology: " + label);
}

TopologySpec TopologySpec::bernoulli(int n, double p) {
    TopologySpec spec;
    spec.kind = TopologyKind::Bernoulli;
    spec.n_sites = n;
    spec.p_edge = p;
    return spec;
}

TopologySpec TopologySpec::geometric(int n, double a, double b, double rho) {
    TopologySpec spec;
    spec.kind = TopologyKind::Geometric;
    spec.n_sites = n;
    spec.region_length = a;
    spec.region_width = b;
    spec.radius = rho;
    return spec;
}

TopologySpec TopologySpec::scale_free(int n, int m, int m0) {
    TopologySpec spec;
    spec.kind = TopologyKind::ScaleFree;
    spec.n_sites = n;
    spec.m_attach = m;
    spec.m0_clique = m0;
    return spec;
}

void TopologySpec::validate() const {
    if (n_sites < 1)
        throw std::invalid_argument("topology: n_sites must be positive");
    switch (kind) {
        case TopologyKind::Bernoulli:
            if (!(p_edge > 0.0) || p_edge > 1.0)
                throw std::invalid_argument("topology: p_edge must be in (0,1]");
            break;
        case TopologyKind::Geometric:
            if (!(region_length > 0.0) || !(region_width > 0.0))
                throw std::invalid_argument("topology: region sides must be positive");
            if (!(radius > 0.0))
                throw std::invalid_argument("topology: radius must be positive");
            break;
        case TopologyKind::ScaleFree:
            if (m_attach < 1)
                throw std::invalid_argument("topology: m_attach must be positive");
            if (m0_clique < m_attach)
                throw std::invalid_argument("topology: m0_clique must be >= m_attach");
            if (m0_clique < 2)
                throw std::invalid_argument(
                    "topology: m0_clique must be >= 2 (a one-site clique has no edges to seed "
                    "degree-proportional attachment)");
            if (m0_clique >= n_sites)
                throw std::invalid_argument("topology: m0_clique must be < n_sites");
            break;
    }
}

std::vector<std::string> TopologySpec::regime_warnings() const {
    std::vector<std::string> warnings;
    const double n = static_cast<double>(n_sites);
    if (kind == TopologyKind::Bernoulli && n_sites > 1) {
        const double threshold = std::log(n) / n;
        if (p_edge <= threshold)
            warnings.push_back("p_edge = " + std::to_string(p_edge) +
                               " is at or below ln(N)/N = " + std::to_string(threshold) +
                               "; sampled graphs are likely disconnected");
    }
    if (kind == TopologyKind::Geometric && n_sites > 1) {
        const double threshold =
            std::sqrt(std::log(n) * region_length * region_width / (n * std::numbers::pi));
        if (radius <= threshold)
            warnings.push_back("radius = " + std::to_string(radius) +
                               " is at or below sqrt(ln(N)*a*b/(N*pi)) = " + std::to_string(threshold) +
                               "; sampled graphs are likely disconnected");
    }
    return warnings;
}

Graph generate(const TopologySpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.kind == TopologyKind::ScaleFree) {
        // Attachment keeps the graph connected by construction.
        Rng rng(derive_seed(seed, 0));
        return scale_free_graph(spec.n_sites, spec.m_attach, spec.m0_clique, rng);
    }
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        Graph g = spec.kind == TopologyKind::Bernoulli
                      ? bernoulli_graph(spec.n_sites, spec.p_edge, rng)
                      : geometric_graph(spec.n_sites, spec.region_length, spec.region_width,
                                        spec.radius, rng);
        if (is_connected(g)) {
            g.resample_count = attempt;
            return g;
        }
    }
    throw std::runtime_error("generate: " + std::to_string(kMaxResamples) +
                             " consecutive draws were disconnected; parameters are below the "
                             "connectivity regime");
}

DegreeDistribution empirical_degree_distribution(const Graph& g) {
    const int n = g.n_sites();
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    for (SiteId i = 0; i < n; ++i)
        probs[static_cast<std::size_t>(g.degree(i))] += 1.0;
    for (double& p : probs)
        p /= static_cast<double>(n);
    return {std::move(probs), n};
}

double geometric_mean_degree_no_border(const TopologySpec& spec) {
    return static_cast<double>(spec.n_sites) * std::numbers::pi * sq(spec.radius) /
           (spec.region_length * spec.region_width);
}

double geometric_visible_fraction(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return (x * std::sqrt(1.0 - x * x) - std::acos(x)) / std::numbers::pi + 1.0;
}

double geometric_border_kernel(int k, double vbar_s) {
    SimpsonState st{k, vbar_s, 0};
    const double lo = 0.0, hi = 1.0;
    const double flo = border_integrand(lo, st);
    const double fhi = border_integrand(hi, st);
    const double fmid = border_integrand(0.5 * (lo + hi), st);
    st.evaluations = 3;
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson_recurse(st, lo, hi, flo, fmid, fhi, whole, 1e-8, 48);
}

DegreeDistribution analytic_degree_distribution_no_border(const TopologySpec& spec) {
    spec.validate();
    if (spec.kind != TopologyKind::Geometric)
        throw std::invalid_argument("analytic_degree_distribution_no_border: geometric only");
    return finalize_distribution(poisson_probs(spec.n_sites, geometric_mean_degree_no_border(spec)),
                                 spec.n_sites, "geometric degree distribution (no border)");
}

DegreeDistribution analytic_degree_distribution(const TopologySpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    switch (spec.kind) {
        case TopologyKind::Bernoulli:
            return finalize_distribution(poisson_probs(n, spec.p_edge * n), n,
                                         "bernoulli degree distribution");
        case TopologyKind::Geometric: {
            const double a = spec.region_length, b = spec.region_width, rho = spec.radius;
            if (a < 2.0 * rho || b < 2.0 * rho)
                throw std::runtime_error(
                    "geometric degree distribution: region smaller than twice the radius; "
                    "border decomposition does not apply");
            const double vbar_s = geometric_mean_degree_no_border(spec);
            const double interior_weight = (a - 2.0 * rho) * (b - 2.0 * rho) / (a * b);
            // Two full-length strips plus the two short strips between
            // them tile the border band exactly.
            const double border_weight = (2.0 * a * rho + 2.0 * (b - 2.0 * rho) * rho) / (a * b);
            auto probs = poisson_probs(n, vbar_s);
            for (int k = 0; k < n; ++k)
                probs[static_cast<std::size_t>(k)] *=
                    interior_weight + border_weight * geometric_border_kernel(k, vbar_s);
            return finalize_distribution(std::move(probs), n, "geometric degree distribution");
        }
        case TopologyKind::ScaleFree: {
            const double m = spec.m_attach;
            std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
            for (int k = spec.m_attach; k < n; ++k)
                probs[static_cast<std::size_t>(k)] =
                    2.0 * m * (m + 1.0) / (static_cast<double>(k) * (k + 1.0) * (k + 2.0));
            return finalize_distribution(std::move(probs), n, "scale-free degree distribution");
        }
    }
    throw std::invalid_argument("analytic_degree_distribution: unknown kind");
}

double analytic_clustering(const TopologySpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case TopologyKind::Bernoulli:
            return spec.p_edge;
        case TopologyKind::Geometric:
            return kGeometricClustering;
        case TopologyKind::ScaleFree: {
            const double n = static_cast<double>(spec.n_sites);
            return (spec.m_attach - 1.0) / 8.0 * sq(std::log(n)) / n;
        }
    }
    throw std::invalid_argument("analytic_clustering: unknown kind");
}

double DegreeDistribution::mean_degree() const {
    double mean = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k)
        mean += static_cast<double>(k) * probs[k];
    return mean;
}

int DegreeDistribution::min_degree_with_mass(double eps) const {
    for (std::size_t k = 0; k < probs.size(); ++k)
        if (probs[k] > eps)
            return static_cast<int>(k);
    return -1;
}

int DegreeDistribution::max_degree_with_mass(double eps) const {
    for (std::size_t k = probs.size(); k-- > 0;)
        if (probs[k] > eps)
            return static_cast<int>(k);
    return -1;
}

void DegreeDistribution::validate() const {
    if (static_cast<int>(probs.size()) != n_sites)
        throw std::invalid_argument("degree distribution: size must equal n_sites");
    double mass = 0.0;
    for (const double p : probs) {
        if (p < 0.0)
            throw std::invalid_argument("degree distribution: negative probability");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("degree distribution: probabilities sum to " +
                                    std::to_string(mass));
}

}  // namespace gossipnet
