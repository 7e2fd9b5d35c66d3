#pragma once

#include <vector>

#include "gossipnet/gossip.hpp"
#include "gossipnet/topology.hpp"

namespace gossipnet {

enum class ProfileLabel {
    EdgeProbability,       // constant p_e
    NeighborDegreeEdge,    // min(c_e/k, 1)
    DuoBernoulli,          // shared fanout/self-degree profile, uncorrelated network
    DuoGeometric,          // shared profile corrected for neighbor-degree dependency
};

/// prob[k] = probability that a degree-k site receives an arc from a given
/// neighbor.
struct ForwardingProfile {
    ProfileLabel label = ProfileLabel::EdgeProbability;
    std::vector<double> prob;  // indexed by degree, size n_sites

    double at(int k) const {
        return (k >= 0 && k < static_cast<int>(prob.size())) ? prob[static_cast<std::size_t>(k)] : 0.0;
    }
};

ForwardingProfile profile_pe(double p_e, int n_sites);
ForwardingProfile profile_pine(double c_e, int n_sites);

/// Fanout/self-degree-broadcast profile on an uncorrelated network:
/// constant sum_k P(k)*min(c,k) / vbar — expected outgoing arcs over
/// expected possible arcs. Fractional c uses min(c,k) directly, the
/// expectation of the fractional-fanout rule. Throws when vbar == 0.
ForwardingProfile profile_duo_bernoulli(double c, const DegreeDistribution& dist);

/// Mean degree of a neighbor of a degree-v_i site on a geometric graph,
/// ignoring the region border:
/// 1 + (v_i - 1)*C + (vbar_s - 1)*(1 - C).
double neighbor_mean_degree_rgg(double v_i, double clustering, double vbar_s);

/// Fanout/self-degree-broadcast profile on a geometric graph:
/// p(k) = min(sum_j P(j)*min(c,j) / neighbor_mean_degree_rgg(k), 1),
/// decreasing in k.
ForwardingProfile profile_duo_geometric(double c, const DegreeDistribution& dist,
                                        double clustering, double vbar_s);

/// Mean degree over the neighbors of an arbitrary site in a preferential-
/// attachment graph: sum_{k=m}^{N-1} k(m+1)/((k+1)(k+2)).
double ba_neighbor_degree_mean(int n, int m);

/// Average multiplicative degree growth of a minimum-degree site's
/// neighbors since that site attached ("age factor"):
/// [sum_{s=m0+1}^{N} sqrt(N/s) * prod_{i=s+1}^{N} (1 - 1/(2i))^m] / (2N/(m+2)).
/// Products are evaluated in log space. The lower summation bound barely
/// matters numerically (terms scale like (s/N)^3); s = m0+1 skips the
/// seed clique.
double ba_age_factor(int n, int m, int m0);

/// Mean degree of the neighbors of a minimum-degree (degree-m) site:
/// (ba_neighbor_degree_mean + 1) * ba_age_factor. At N=1000, m=7, m0=9
/// this is about 43 while an arbitrary site's neighbors average about 37:
/// low-degree sites preferentially sit next to hubs.
double ba_min_degree_neighbor_mean(int n, int m, int m0);

/// Probability that a given neighbor forwards to a degree-m site under the
/// fanout/self-degree disciplines on a preferential-attachment graph, with
/// phi = min(c, m):
/// sum_{k=m+1}^{floor(phi/Fac)} (m+1)/(k(k+1))
///   + sum_{k>phi/Fac}^{N-1} phi*(m+1)/(k^2 (k+1) Fac).
/// The first sum is empty whenever floor(phi/Fac) <= m.
double profile_duo_scalefree(double c, int n, int m, int m0);

/// Reliability estimate: probability that no site is isolated in the
/// dissemination graph,
///   R = prod_{i=1}^{N-1} (1 - (1 - p(i))^i)^{P(i)*N},
/// evaluated in log space; degrees with P(i)*N < 1e-9 are skipped. The
/// estimate presumes a connected graph, so degree-0 mass is excluded from
/// the product; if the distribution carries at least one expected
/// degree-0 site (P(0)*N >= 1) the graph cannot be fully reached and 0 is
/// returned.
double predict_reliability(const DegreeDistribution& dist, const ForwardingProfile& profile);

/// Reliability restricted to the minimum-degree sites of a preferential-
/// attachment graph (the dominant isolation mode for the fanout and
/// self-degree disciplines): (1 - (1 - p_forw_m)^m)^(p_m * N).
double predict_reliability_scalefree_duo(double p_forw_m, int m, double p_m, int n_sites);

/// Expected messages per site: M = sum_k P(k) * k * p(k).
double predict_message_complexity(const DegreeDistribution& dist, const ForwardingProfile& profile);

struct ModelCurvePoint {
    double param = 0.0;
    double predicted_m = 0.0;
    double predicted_r = 0.0;
};

/// Evaluates the analytic (M, R) trade-off of a policy on a topology over
/// a parameter grid. Profile selection:
///  - pe / pine: universal profiles on every topology.
///  - ff / pisb (one shared curve): Bernoulli -> profile_duo_bernoulli;
///    Geometric -> profile_duo_geometric; ScaleFree -> reliability from
///    the degree-m term via profile_duo_scalefree, message complexity from
///    the sender-side constant profile.
///  - flooding: M = vbar, R = 1 at every grid value.
std::vector<ModelCurvePoint> model_curve(const TopologySpec& spec, PolicyKind policy,
                                         const std::vector<double>& param_grid);

}  // namespace gossipnet
