#include "dropsa/sim.hpp"

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

uint64_t bounded(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

// Distinct per-purpose streams derived from one seed (splitmix64).
uint64_t mix(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + salt * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 stream_rng(uint64_t seed, uint64_t salt) {
    return std::mt19937_64(mix(seed, salt));
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "bsa" || name == "BSA") return Algorithm::BSA;
    if (name == "lsa" || name == "LSA") return Algorithm::LSA;
    if (name == "rsa" || name == "RSA") return Algorithm::RSA;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(Algorithm alg) {
    switch (alg) {
        case Algorithm::BSA: return "bsa";
        case Algorithm::LSA: return "lsa";
        case Algorithm::RSA: return "rsa";
    }
    return "?";
}

void validate_drop(const DropModel& drop, const NeighborSets& neighbors) {
    if (const auto* ind = std::get_if<IndependentDrop>(&drop)) {
        if (!(ind->p >= 0.0 && ind->p < 1.0))
            throw std::invalid_argument("drop probability must be in [0, 1)");
        return;
    }
    const auto& q = std::get<SubsetDistribution>(drop).q;
    if (q.size() != neighbors.sets.size())
        throw std::invalid_argument("subset distribution must cover every link");
    for (size_t i = 0; i < q.size(); ++i) {
        double total = 0.0;
        double full = 0.0;
        uint64_t full_mask = (neighbors.degree(static_cast<int>(i)) >= 64)
                                 ? ~uint64_t{0}
                                 : (uint64_t{1} << neighbors.degree(static_cast<int>(i))) - 1;
        for (auto [mask, p] : q[i]) {
            if (p < 0.0) throw std::invalid_argument("subset probabilities must be nonnegative");
            total += p;
            if (mask == full_mask) full += p;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("subset probabilities must sum to 1");
        if (!(full > 0.0))
            throw std::invalid_argument("the full neighbor set must have positive probability");
    }
}

double subset_probability(const DropModel& drop, int i, uint64_t mask, int degree) {
    if (const auto* ind = std::get_if<IndependentDrop>(&drop)) {
        int kept = 0;
        for (int k = 0; k < degree; ++k)
            if (mask & (uint64_t{1} << k)) ++kept;
        return std::pow(1.0 - ind->p, kept) * std::pow(ind->p, degree - kept);
    }
    const auto& q = std::get<SubsetDistribution>(drop).q[static_cast<size_t>(i)];
    double p = 0.0;
    for (auto [m, pm] : q)
        if (m == mask) p += pm;
    return p;
}

double full_subset_probability(const DropModel& drop, int i, int degree) {
    if (const auto* ind = std::get_if<IndependentDrop>(&drop))
        return std::pow(1.0 - ind->p, degree);
    uint64_t full_mask = (degree >= 64) ? ~uint64_t{0} : (uint64_t{1} << degree) - 1;
    return subset_probability(drop, i, full_mask, degree);
}

double CoolingSchedule::at(int64_t t) const {
    if (kind == Kind::Fixed) return beta;
    double b = std::log(static_cast<double>(t) + t0) / d;
    return std::max(0.0, b);
}

CoolingSchedule CoolingSchedule::fixed(double beta) {
    CoolingSchedule s;
    s.kind = Kind::Fixed;
    s.beta = beta;
    return s;
}

CoolingSchedule CoolingSchedule::inverse_log(double d, double t0) {
    if (!(d > 0.0)) throw std::invalid_argument("cooling-order constant d must be positive");
    CoolingSchedule s;
    s.kind = Kind::InverseLog;
    s.d = d;
    s.t0 = t0;
    return s;
}

StateSpace::StateSpace(int n_, int num_levels_, size_t cap) : n(n_), num_levels(num_levels_) {
    size = 1;
    for (int k = 0; k < n; ++k) {
        if (size > cap / static_cast<size_t>(num_levels))
            throw std::invalid_argument("state space exceeds the configured cap");
        size *= static_cast<size_t>(num_levels);
    }
}

size_t StateSpace::index(const Configuration& x) const {
    size_t idx = 0;
    size_t stride = 1;
    for (int k = 0; k < n; ++k) {
        idx += static_cast<size_t>(x[static_cast<size_t>(k)]) * stride;
        stride *= static_cast<size_t>(num_levels);
    }
    return idx;
}

Configuration StateSpace::config(size_t idx) const {
    Configuration x(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        x[static_cast<size_t>(k)] = static_cast<int>(idx % static_cast<size_t>(num_levels));
        idx /= static_cast<size_t>(num_levels);
    }
    return x;
}

std::pair<int, int> pick_phase(const Configuration& x, int num_levels, std::mt19937_64& rng) {
    if (num_levels < 2) throw std::invalid_argument("pick phase needs at least 2 levels");
    int i = static_cast<int>(bounded(rng, x.size()));
    int offset = static_cast<int>(bounded(rng, static_cast<uint64_t>(num_levels - 1)));
    int level = offset >= x[static_cast<size_t>(i)] ? offset + 1 : offset;
    return {i, level};
}

uint64_t sample_subset(const DropModel& drop, int i, int degree, std::mt19937_64& rng) {
    if (const auto* ind = std::get_if<IndependentDrop>(&drop)) {
        uint64_t mask = 0;
        for (int k = 0; k < degree; ++k) {
            if (uniform01(rng) >= ind->p) mask |= uint64_t{1} << k;
        }
        return mask;
    }
    const auto& q = std::get<SubsetDistribution>(drop).q[static_cast<size_t>(i)];
    double u = uniform01(rng);
    double acc = 0.0;
    for (auto [mask, p] : q) {
        acc += p;
        if (u < acc) return mask;
    }
    return q.back().first;
}

double acceptance_probability(double delta, double beta) {
    if (delta == kNegInf) return 0.0;
    if (delta >= 0.0) return 1.0;
    return std::exp(beta * delta);
}

bool decide_bsa(double delta, double beta, std::mt19937_64& rng) {
    return uniform01(rng) < acceptance_probability(delta, beta);
}

bool decide_lsa(uint64_t subset_mask, int degree, double delta, double beta,
                std::mt19937_64& rng) {
    uint64_t full_mask = (degree >= 64) ? ~uint64_t{0} : (uint64_t{1} << degree) - 1;
    double used = (subset_mask == full_mask) ? delta : kNegInf;
    return uniform01(rng) < acceptance_probability(used, beta);
}

bool decide_rsa(double delta_bounded, double beta, std::mt19937_64& rng) {
    return uniform01(rng) < acceptance_probability(delta_bounded, beta);
}

RunResult run(const Network& net, const WeightVector& weights, const RunSpec& spec,
              const std::function<double(const Configuration&)>& h) {
    if (spec.horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (spec.alg == Algorithm::RSA && spec.bounds == nullptr)
        throw std::invalid_argument("RSA requires a bound table");
    validate_drop(spec.drop, net.neighbors());

    Configuration x = spec.x0.empty() ? Configuration(static_cast<size_t>(net.n()), 0) : spec.x0;
    net.validate_configuration(x);

    std::mt19937_64 pick_rng(mix(spec.seed, 1));
    std::mt19937_64 drop_rng(mix(spec.seed, 2));
    std::mt19937_64 accept_rng(mix(spec.seed, 3));

    RunResult result;
    std::optional<StateSpace> space;
    if (spec.trace != TraceLevel::None) {
        double bits = static_cast<double>(net.n()) * std::log2(static_cast<double>(net.num_levels()));
        if (bits <= 31.0) {
            space.emplace(net.n(), net.num_levels());
            result.states.reserve(static_cast<size_t>(spec.horizon) + 1);
            result.states.push_back(static_cast<uint32_t>(space->index(x)));
        }
        if (spec.trace == TraceLevel::Full)
            result.records.reserve(static_cast<size_t>(spec.horizon));
    }
    if (h) result.h_trace.reserve(static_cast<size_t>(spec.horizon));

    for (int64_t t = 1; t <= spec.horizon; ++t) {
        auto [i, to_level] = pick_phase(x, net.num_levels(), pick_rng);
        int from_level = x[static_cast<size_t>(i)];
        int degree = net.neighbors().degree(i);
        uint64_t subset = sample_subset(spec.drop, i, degree, drop_rng);
        uint64_t full_mask = (degree >= 64) ? ~uint64_t{0} : (uint64_t{1} << degree) - 1;

        Configuration x_new = x;
        x_new[static_cast<size_t>(i)] = to_level;
        Differentials d = differentials(net, weights, x, x_new);
        double delta = aggregate(d);
        double delta_used;
        switch (spec.alg) {
            case Algorithm::BSA:
                delta_used = delta;
                break;
            case Algorithm::LSA:
                delta_used = (subset == full_mask) ? delta : kNegInf;
                break;
            case Algorithm::RSA:
                delta_used = bounded_aggregate(d, subset, *spec.bounds);
                break;
        }
        double beta = spec.schedule.at(t);
        bool accepted = uniform01(accept_rng) < acceptance_probability(delta_used, beta);
        if (accepted) x = std::move(x_new);

        if (space) result.states.push_back(static_cast<uint32_t>(space->index(x)));
        if (spec.trace == TraceLevel::Full) {
            SlotRecord rec;
            rec.t = t;
            rec.proposer = i;
            rec.from_level = from_level;
            rec.to_level = to_level;
            rec.subset = subset;
            rec.delta_full = delta;
            rec.delta_used = delta_used;
            rec.accepted = accepted;
            rec.objective = total_objective(net, weights, x);
            result.records.push_back(rec);
        }
        if (h) result.h_trace.push_back(h(x));
    }
    result.final_x = std::move(x);
    return result;
}

std::vector<double> occupancy_histogram(const std::vector<uint32_t>& states, size_t space_size) {
    if (states.empty()) throw std::invalid_argument("trajectory must be nonempty");
    std::vector<double> hist(space_size, 0.0);
    for (uint32_t s : states) hist[s] += 1.0;
    for (double& v : hist) v /= static_cast<double>(states.size());
    return hist;
}

std::vector<size_t> optimal_states(const Network& net, const WeightVector& weights) {
    StateSpace space(net.n(), net.num_levels());
    double best = kNegInf;
    std::vector<size_t> arg;
    for (size_t s = 0; s < space.size; ++s) {
        double f = total_objective(net, weights, space.config(s));
        if (f > best + 1e-9) {
            best = f;
            arg.clear();
            arg.push_back(s);
        } else if (f > best - 1e-9) {
            arg.push_back(s);
        }
    }
    return arg;
}

std::vector<double> annealing_occupancy(const Network& net, const WeightVector& weights,
                                        Algorithm alg, const CoolingSchedule& schedule,
                                        const DropModel& drop, const BoundTable* bounds,
                                        int64_t horizon, const std::vector<uint64_t>& seeds,
                                        int64_t stride) {
    if (stride < 1) throw std::invalid_argument("stride must be positive");
    std::vector<size_t> best = optimal_states(net, weights);
    std::vector<char> is_opt;
    StateSpace space(net.n(), net.num_levels());
    is_opt.assign(space.size, 0);
    for (size_t s : best) is_opt[s] = 1;

    size_t points = static_cast<size_t>(horizon / stride);
    std::vector<double> curve(points, 0.0);
    for (uint64_t seed : seeds) {
        RunSpec spec;
        spec.alg = alg;
        spec.schedule = schedule;
        spec.drop = drop;
        spec.horizon = horizon;
        spec.seed = seed;
        spec.trace = TraceLevel::States;
        spec.bounds = bounds;
        RunResult result = run(net, weights, spec);
        double hits = 0.0;
        size_t point = 0;
        for (int64_t t = 1; t <= horizon; ++t) {
            hits += is_opt[result.states[static_cast<size_t>(t)]];
            if (t % stride == 0) {
                curve[point++] += hits / static_cast<double>(t);
            }
        }
    }
    for (double& v : curve) v /= static_cast<double>(seeds.size());
    return curve;
}

}  // namespace dropsa
