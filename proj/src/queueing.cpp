#include "dropsa/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dropsa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> queue_step(const std::vector<double>& q, const std::vector<double>& arrivals,
                               const std::vector<double>& rates) {
    if (q.size() != arrivals.size() || q.size() != rates.size())
        throw std::invalid_argument("queue, arrival, and rate vectors must have equal length");
    std::vector<double> out(q.size());
    for (size_t i = 0; i < q.size(); ++i) out[i] = std::max(0.0, q[i] + arrivals[i] - rates[i]);
    return out;
}

double local_weight(double q) {
    if (q < 0.0) throw std::invalid_argument("queue size must be nonnegative");
    return std::log(q + 1.0);
}

double stale_weight_upper_bound(double last_q, double arrival, int64_t slots_elapsed) {
    if (slots_elapsed < 0) throw std::invalid_argument("elapsed slot count must be nonnegative");
    return std::log(last_q + arrival * static_cast<double>(slots_elapsed) + 1.0);
}

QueueResult run_queueing(const Network& net, const QueueSpec& spec) {
    const int n = net.n();
    if (static_cast<int>(spec.arrivals.size()) != n)
        throw std::invalid_argument("arrival vector must have length n");
    validate_drop(spec.drop, net.neighbors());
    const double cmax = spec.bound_cmax > 0.0 ? spec.bound_cmax : net.max_rate();

    std::mt19937_64 pick_rng = stream_rng(spec.seed, 1);
    std::mt19937_64 drop_rng = stream_rng(spec.seed, 2);
    std::mt19937_64 accept_rng = stream_rng(spec.seed, 3);

    Configuration x(static_cast<size_t>(n), 0);
    std::vector<double> queue(static_cast<size_t>(n), 0.0);
    // last observation of neighbor queues: value and the slot it reflects.
    // Q(0) and arrival rates are exchanged once at setup.
    struct Observation {
        double q = 0.0;
        int64_t slot = 0;
    };
    std::vector<std::vector<Observation>> last_obs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        last_obs[static_cast<size_t>(i)].resize(net.neighbors().of(i).size());

    QueueResult result;
    result.avg_queue.assign(static_cast<size_t>(n), 0.0);
    int64_t tail_start = spec.horizon / 2 + 1;
    int64_t tail_count = 0;

    for (int64_t t = 1; t <= spec.horizon; ++t) {
        // Fugacity weights from the queues at the start of the slot.
        WeightVector weights(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j)
            weights[static_cast<size_t>(j)] = local_weight(queue[static_cast<size_t>(j)]);

        auto [i, to_level] = pick_phase(x, net.num_levels(), pick_rng);
        int from_level = x[static_cast<size_t>(i)];
        int degree = net.neighbors().degree(i);
        uint64_t subset = sample_subset(spec.drop, i, degree, drop_rng);
        uint64_t full_mask = (degree >= 64) ? ~uint64_t{0} : (uint64_t{1} << degree) - 1;

        Configuration x_new = x;
        x_new[static_cast<size_t>(i)] = to_level;
        Differentials d = differentials(net, weights, x, x_new);

        // Stale-weight soundness: every observer's extrapolated bound must
        // dominate the true current weight.
        for (int obs = 0; obs < n; ++obs) {
            const auto& nbrs = net.neighbors().of(obs);
            for (size_t k = 0; k < nbrs.size(); ++k) {
                const Observation& o = last_obs[static_cast<size_t>(obs)][k];
                double w_hat = stale_weight_upper_bound(
                    o.q, spec.arrivals[static_cast<size_t>(nbrs[k])], (t - 1) - o.slot);
                double w_true = weights[static_cast<size_t>(nbrs[k])];
                result.max_stale_violation =
                    std::max(result.max_stale_violation, w_true - w_hat);
            }
        }

        double delta_used;
        switch (spec.alg) {
            case Algorithm::BSA:
                delta_used = aggregate(d);
                break;
            case Algorithm::LSA:
                delta_used = (subset == full_mask) ? aggregate(d) : kNegInf;
                break;
            case Algorithm::RSA: {
                delta_used = d.d_self;
                const auto& nbrs = d.neighbors;
                for (size_t k = 0; k < nbrs.size(); ++k) {
                    if (subset & (uint64_t{1} << k)) {
                        delta_used += d.d_neighbor[k];
                    } else if (to_level > from_level) {
                        const Observation& o = last_obs[static_cast<size_t>(i)][k];
                        double w_hat = stale_weight_upper_bound(
                            o.q, spec.arrivals[static_cast<size_t>(nbrs[k])], (t - 1) - o.slot);
                        double unit = net.kind() == Network::Kind::Conflict ? 1.0 : cmax;
                        delta_used += -w_hat * unit;
                    }
                    // power decrease: bound term is 0
                }
                break;
            }
        }

        bool accepted = uniform01(accept_rng) < acceptance_probability(delta_used, spec.beta);
        if (accepted) x = x_new;

        // Messaging also delivered the current queue values for the observed
        // subset to the proposer.
        {
            const auto& nbrs = net.neighbors().of(i);
            for (size_t k = 0; k < nbrs.size(); ++k) {
                if (subset & (uint64_t{1} << k))
                    last_obs[static_cast<size_t>(i)][k] = {queue[static_cast<size_t>(nbrs[k])],
                                                           t - 1};
            }
        }

        queue = queue_step(queue, spec.arrivals, net.capacities(x));
        if (t >= tail_start) {
            ++tail_count;
            for (int j = 0; j < n; ++j)
                result.avg_queue[static_cast<size_t>(j)] += queue[static_cast<size_t>(j)];
        }
        if (spec.record_queue_trace) result.queue_trace.push_back(queue);
    }

    if (tail_count > 0)
        for (double& v : result.avg_queue) v /= static_cast<double>(tail_count);
    result.final_queue = queue;
    result.max_queue_link = static_cast<int>(
        std::max_element(result.avg_queue.begin(), result.avg_queue.end()) -
        result.avg_queue.begin());
    return result;
}

}  // namespace dropsa
