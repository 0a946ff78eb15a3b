#pragma once

#include <vector>

#include "dropsa/sim.hpp"

namespace dropsa {

/// Lindley recursion Q' = [Q + a - c]^+, componentwise.
std::vector<double> queue_step(const std::vector<double>& q, const std::vector<double>& arrivals,
                               const std::vector<double>& rates);

/// Dynamic fugacity weight W = log(Q + 1).
double local_weight(double q);

/// Upper bound on a neighbor's current weight from a k-slot-old observation.
double stale_weight_upper_bound(double last_q, double arrival, int64_t slots_elapsed);

struct QueueSpec {
    Algorithm alg = Algorithm::BSA;
    double beta = 1.0;
    DropModel drop = IndependentDrop{0.0};
    int64_t horizon = 0;
    uint64_t seed = 0;
    std::vector<double> arrivals;
    double bound_cmax = 0.0;  // 0 -> network max rate; larger values loosen RSA bounds
    bool record_queue_trace = false;
};

struct QueueResult {
    std::vector<double> avg_queue;       // per link, over the last half of the horizon
    std::vector<double> final_queue;
    int max_queue_link = -1;             // link with the largest average queue
    double max_stale_violation = 0.0;    // max over slots of W_j - What_j (<= 0 when sound)
    std::vector<std::vector<double>> queue_trace;  // per slot, when recorded
};

/// Queue-fed run: per slot, refresh weights from received messages, run one
/// algorithm slot with the current fugacity weights, serve, then apply
/// arrivals. Weight and differential messages share one subset draw per slot.
QueueResult run_queueing(const Network& net, const QueueSpec& spec);

}  // namespace dropsa
