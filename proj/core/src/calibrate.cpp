#include "gossipnet/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gossipnet {

namespace {

constexpr double kResidualTolerance = 1e-6;

double subset_cost(double c, const DegreeDistribution& dist) {
    double total = 0.0;
    for (std::size_t k = 0; k < dist.probs.size(); ++k)
        total += dist.probs[k] * std::min(c, static_cast<double>(k));
    return total;
}

}  // namespace

double solve_parameter(const CalibrationRequest& req) {
    req.dist.validate();
    const double vbar = req.dist.mean_degree();
    if (req.policy == PolicyKind::Flooding)
        throw std::invalid_argument("solve_parameter: flooding has no tunable parameter");
    if (!(req.target_m >= 0.0) || req.target_m > vbar + kResidualTolerance)
        throw std::domain_error("solve_parameter: target M = " + std::to_string(req.target_m) +
                                " outside achievable range [0, " + std::to_string(vbar) + "]");
    if (req.policy == PolicyKind::EdgeProbability)
        return std::min(req.target_m / vbar, 1.0);

    // ff / pisb / pine share the sender-side cost map sum_k P(k)*min(c,k).
    const int min_degree = req.dist.min_degree_with_mass();
    if (min_degree > 0 && req.target_m <= static_cast<double>(min_degree))
        return req.target_m;  // below every cap the map is the identity
    double lo = 0.0;
    double hi = static_cast<double>(req.dist.n_sites - 1);
    if (req.target_m >= subset_cost(hi, req.dist))
        return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (subset_cost(mid, req.dist) < req.target_m)
            lo = mid;
        else
            hi = mid;
    }
    const double c = 0.5 * (lo + hi);
    if (std::abs(subset_cost(c, req.dist) - req.target_m) > kResidualTolerance)
        throw std::domain_error("solve_parameter: bisection residual above tolerance");
    return c;
}

double solve_parameter(const TopologySpec& spec, PolicyKind policy, double target_m) {
    return solve_parameter({analytic_degree_distribution(spec), policy, target_m});
}

}  // namespace gossipnet
