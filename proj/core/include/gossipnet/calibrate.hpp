#pragma once

#include "gossipnet/gossip.hpp"
#include "gossipnet/topology.hpp"

namespace gossipnet {

/// Calibration inverts the expected-messages-per-site map to find the
/// policy parameter hitting a target M. Forwarding cost is borne by
/// senders, so the cost map is the same for the three subset policies:
///   ff / pisb / pine:  M(c) = sum_k P(k) * min(c, k)
///   pe:                M(p) = p * vbar
/// Both maps are monotone; pe and the below-cap region of the subset map
/// have closed forms, the rest is solved by bisection to |M - target| <=
/// 1e-6.
struct CalibrationRequest {
    DegreeDistribution dist;
    PolicyKind policy = PolicyKind::EdgeProbability;
    double target_m = 0.0;
};

/// Returns the parameter achieving target_m. Throws std::domain_error when
/// the target lies outside the achievable range [0, vbar], and
/// std::invalid_argument for the parameterless flooding policy.
double solve_parameter(const CalibrationRequest& req);

/// Convenience overload calibrating against the analytic degree
/// distribution of a topology (the default: one calibration per
/// (topology, M) point, not per sampled graph).
double solve_parameter(const TopologySpec& spec, PolicyKind policy, double target_m);

}  // namespace gossipnet
