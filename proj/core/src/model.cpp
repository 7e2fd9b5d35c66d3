#include "gossipnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gossipnet {

namespace {

constexpr double kNegligibleSiteCount = 1e-9;  // skip degrees with P(k)*N below this

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// sum_k P(k) * min(c, k): expected outgoing arcs per site for the subset
/// policies (fractional c is the expectation of the fractional-fanout rule).
double expected_selected_neighbors(double c, const DegreeDistribution& dist) {
    double total = 0.0;
    for (std::size_t k = 0; k < dist.probs.size(); ++k)
        total += dist.probs[k] * std::min(c, static_cast<double>(k));
    return total;
}

}  // namespace

ForwardingProfile profile_pe(double p_e, int n_sites) {
    if (p_e < 0.0 || p_e > 1.0)
        throw std::invalid_argument("profile_pe: probability must be in [0,1]");
    return {ProfileLabel::EdgeProbability,
            std::vector<double>(static_cast<std::size_t>(n_sites), p_e)};
}

ForwardingProfile profile_pine(double c_e, int n_sites) {
    if (c_e < 0.0)
        throw std::invalid_argument("profile_pine: budget must be >= 0");
    ForwardingProfile profile{ProfileLabel::NeighborDegreeEdge,
                              std::vector<double>(static_cast<std::size_t>(n_sites), 0.0)};
    for (int k = 1; k < n_sites; ++k)
        profile.prob[static_cast<std::size_t>(k)] = std::min(c_e / k, 1.0);
    return profile;
}

ForwardingProfile profile_duo_bernoulli(double c, const DegreeDistribution& dist) {
    if (c < 0.0)
        throw std::invalid_argument("profile_duo_bernoulli: budget must be >= 0");
    const double vbar = dist.mean_degree();
    if (!(vbar > 0.0))
        throw std::invalid_argument("profile_duo_bernoulli: distribution has zero mean degree");
    const double p = clamp01(expected_selected_neighbors(c, dist) / vbar);
    return {ProfileLabel::DuoBernoulli,
            std::vector<double>(static_cast<std::size_t>(dist.n_sites), p)};
}

double neighbor_mean_degree_rgg(double v_i, double clustering, double vbar_s) {
    if (clustering < 0.0 || clustering > 1.0)
        throw std::invalid_argument("neighbor_mean_degree_rgg: clustering must be in [0,1]");
    return 1.0 + (v_i - 1.0) * clustering + (vbar_s - 1.0) * (1.0 - clustering);
}

ForwardingProfile profile_duo_geometric(double c, const DegreeDistribution& dist,
                                        double clustering, double vbar_s) {
    if (c < 0.0)
        throw std::invalid_argument("profile_duo_geometric: budget must be >= 0");
    const double selected = expected_selected_neighbors(c, dist);
    ForwardingProfile profile{ProfileLabel::DuoGeometric,
                              std::vector<double>(static_cast<std::size_t>(dist.n_sites), 0.0)};
    for (int k = 1; k < dist.n_sites; ++k)
        profile.prob[static_cast<std::size_t>(k)] =
            std::min(selected / neighbor_mean_degree_rgg(static_cast<double>(k), clustering, vbar_s),
                     1.0);
    return profile;
}

double ba_neighbor_degree_mean(int n, int m) {
    if (n < 2 || m < 1)
        throw std::invalid_argument("ba_neighbor_degree_mean: need n >= 2, m >= 1");
    double total = 0.0;
    for (int k = m; k < n; ++k)
        total += static_cast<double>(k) * (m + 1.0) / ((k + 1.0) * (k + 2.0));
    return total;
}

double ba_age_factor(int n, int m, int m0) {
    if (!(n > m0) || !(m0 >= m) || m < 1)
        throw std::invalid_argument("ba_age_factor: need n > m0 >= m >= 1");
    // suffix[s] = sum_{i=s+1}^{n} ln(1 - 1/(2i)); log space keeps the
    // product finite for any m.
    std::vector<double> suffix(static_cast<std::size_t>(n) + 2, 0.0);
    for (int i = n; i >= 1; --i)
        suffix[static_cast<std::size_t>(i)] =
            suffix[static_cast<std::size_t>(i) + 1] + std::log1p(-1.0 / (2.0 * i));
    double numerator = 0.0;
    for (int s = m0 + 1; s <= n; ++s)
        numerator += std::sqrt(static_cast<double>(n) / s) *
                     std::exp(m * suffix[static_cast<std::size_t>(s) + 1]);
    return numerator / (2.0 * n / (m + 2.0));
}

double ba_min_degree_neighbor_mean(int n, int m, int m0) {
    return (ba_neighbor_degree_mean(n, m) + 1.0) * ba_age_factor(n, m, m0);
}

double profile_duo_scalefree(double c, int n, int m, int m0) {
    if (c < 0.0)
        throw std::invalid_argument("profile_duo_scalefree: budget must be >= 0");
    const double fac = ba_age_factor(n, m, m0);
    const double phi = std::min(c, static_cast<double>(m));
    const int cut = static_cast<int>(std::floor(phi / fac));
    double total = 0.0;
    for (int k = m + 1; k <= std::min(cut, n - 1); ++k)
        total += (m + 1.0) / (static_cast<double>(k) * (k + 1.0));
    for (int k = std::max(m + 1, cut + 1); k < n; ++k)
        total += phi * (m + 1.0) / (static_cast<double>(k) * k * (k + 1.0) * fac);
    return clamp01(total);
}

double predict_reliability(const DegreeDistribution& dist, const ForwardingProfile& profile) {
    const double n = static_cast<double>(dist.n_sites);
    if (dist.at(0) * n >= 1.0)
        return 0.0;  // at least one expected degree-0 site: unreachable
    double log_r = 0.0;
    for (int k = 1; k < dist.n_sites; ++k) {
        const double sites = dist.at(k) * n;
        if (sites < kNegligibleSiteCount)
            continue;
        const double p = clamp01(profile.at(k));
        // (1-p)^k via exp(k*log1p(-p)); p = 1 contributes log 0 = -inf cleanly.
        const double isolated = p >= 1.0 ? 0.0 : std::exp(k * std::log1p(-p));
        if (isolated >= 1.0)
            return 0.0;
        log_r += sites * std::log1p(-isolated);
    }
    return clamp01(std::exp(log_r));
}

double predict_reliability_scalefree_duo(double p_forw_m, int m, double p_m, int n_sites) {
    if (p_forw_m < 0.0 || p_forw_m > 1.0 || p_m < 0.0 || p_m > 1.0)
        throw std::invalid_argument("predict_reliability_scalefree_duo: probabilities out of range");
    const double isolated = p_forw_m >= 1.0 ? 0.0 : std::exp(m * std::log1p(-p_forw_m));
    if (isolated >= 1.0)
        return p_m > 0.0 ? 0.0 : 1.0;
    return clamp01(std::exp(p_m * n_sites * std::log1p(-isolated)));
}

double predict_message_complexity(const DegreeDistribution& dist,
                                  const ForwardingProfile& profile) {
    double total = 0.0;
    for (int k = 1; k < dist.n_sites; ++k)
        total += dist.at(k) * static_cast<double>(k) * clamp01(profile.at(k));
    return total;
}

std::vector<ModelCurvePoint> model_curve(const TopologySpec& spec, PolicyKind policy,
                                         const std::vector<double>& param_grid) {
    spec.validate();
    const DegreeDistribution dist = analytic_degree_distribution(spec);
    const int n = dist.n_sites;
    std::vector<ModelCurvePoint> curve;
    curve.reserve(param_grid.size());
    for (const double param : param_grid) {
        ModelCurvePoint point;
        point.param = param;
        switch (policy) {
            case PolicyKind::Flooding: {
                point.predicted_m = dist.mean_degree();
                point.predicted_r = 1.0;
                break;
            }
            case PolicyKind::EdgeProbability: {
                const auto prof = profile_pe(param, n);
                point.predicted_m = predict_message_complexity(dist, prof);
                point.predicted_r = predict_reliability(dist, prof);
                break;
            }
            case PolicyKind::NeighborDegreeEdge: {
                const auto prof = profile_pine(param, n);
                point.predicted_m = predict_message_complexity(dist, prof);
                point.predicted_r = predict_reliability(dist, prof);
                break;
            }
            case PolicyKind::FixedFanout:
            case PolicyKind::SelfDegreeBroadcast: {
                // One shared curve for the two subset policies.
                switch (spec.kind) {
                    case TopologyKind::Bernoulli: {
                        const auto prof = profile_duo_bernoulli(param, dist);
                        point.predicted_m = predict_message_complexity(dist, prof);
                        point.predicted_r = predict_reliability(dist, prof);
                        break;
                    }
                    case TopologyKind::Geometric: {
                        const auto prof = profile_duo_geometric(
                            param, dist, analytic_clustering(spec),
                            geometric_mean_degree_no_border(spec));
                        point.predicted_m = predict_message_complexity(dist, prof);
                        point.predicted_r = predict_reliability(dist, prof);
                        break;
                    }
                    case TopologyKind::ScaleFree: {
                        // Reliability from the dominant minimum-degree term;
                        // message complexity is sender-side, same as the
                        // uncorrelated profile.
                        const double p_forw =
                            profile_duo_scalefree(param, n, spec.m_attach, spec.m0_clique);
                        point.predicted_r = predict_reliability_scalefree_duo(
                            p_forw, spec.m_attach, dist.at(spec.m_attach), n);
                        const auto prof = profile_duo_bernoulli(param, dist);
                        point.predicted_m = predict_message_complexity(dist, prof);
                        break;
                    }
                }
                break;
            }
        }
        curve.push_back(point);
    }
    return curve;
}

}  // namespace gossipnet
