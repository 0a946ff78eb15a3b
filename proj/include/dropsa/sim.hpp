#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "dropsa/objective.hpp"

namespace dropsa {

enum class Algorithm { BSA, LSA, RSA };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm alg);

/// Each neighbor message drops independently with probability p.
struct IndependentDrop {
    double p = 0.0;
};

/// Explicit per-link distribution over observed subsets, as (mask, probability)
/// pairs over the link's neighbor list order.
struct SubsetDistribution {
    std::vector<std::vector<std::pair<uint64_t, double>>> q;
};

using DropModel = std::variant<IndependentDrop, SubsetDistribution>;

void validate_drop(const DropModel& drop, const NeighborSets& neighbors);

/// q_{i,S} for a subset mask over N_i.
double subset_probability(const DropModel& drop, int i, uint64_t mask, int degree);
/// q_{i,N_i}.
double full_subset_probability(const DropModel& drop, int i, int degree);

struct CoolingSchedule {
    enum class Kind { Fixed, InverseLog };
    Kind kind = Kind::Fixed;
    double beta = 1.0;  // Fixed
    double d = 1.0;     // InverseLog: beta(t) = log(t + t0) / d
    double t0 = 1.0;

    double at(int64_t t) const;

    static CoolingSchedule fixed(double beta);
    static CoolingSchedule inverse_log(double d, double t0 = 1.0);
};

struct SlotRecord {
    int64_t t = 0;
    int proposer = -1;
    int from_level = 0;
    int to_level = 0;
    uint64_t subset = 0;
    double delta_full = 0.0;  // true aggregate differential
    double delta_used = 0.0;  // what the decision rule saw (Delta or Delta_[S])
    bool accepted = false;
    double objective = 0.0;  // f(x) after the slot
};

enum class TraceLevel { None, States, Full };

struct RunSpec {
    Algorithm alg = Algorithm::BSA;
    CoolingSchedule schedule;
    DropModel drop = IndependentDrop{0.0};
    int64_t horizon = 0;
    uint64_t seed = 0;
    TraceLevel trace = TraceLevel::None;
    Configuration x0;                   // empty -> all links at the lowest level
    const BoundTable* bounds = nullptr; // required for RSA
};

struct RunResult {
    Configuration final_x;
    std::vector<uint32_t> states;    // state index per slot (t = 0..T), if enumerable
    std::vector<SlotRecord> records; // TraceLevel::Full only
    std::vector<double> h_trace;     // per-slot h(x(t)), t = 1..T, if h given
};

/// Bijective configuration <-> index map over all |M|^n states.
struct StateSpace {
    int n = 0;
    int num_levels = 0;
    size_t size = 0;

    StateSpace(int n, int num_levels, size_t cap = size_t{1} << 20);
    size_t index(const Configuration& x) const;
    Configuration config(size_t idx) const;
};

/// Per-purpose RNG stream derived from one seed; salts 1/2/3 are the pick,
/// drop, and acceptance streams of the engines.
std::mt19937_64 stream_rng(uint64_t seed, uint64_t salt);

// Phase primitives (exposed for direct testing; the engine uses the same code).
std::pair<int, int> pick_phase(const Configuration& x, int num_levels, std::mt19937_64& rng);
uint64_t sample_subset(const DropModel& drop, int i, int degree, std::mt19937_64& rng);
bool decide_bsa(double delta, double beta, std::mt19937_64& rng);
bool decide_lsa(uint64_t subset_mask, int degree, double delta, double beta, std::mt19937_64& rng);
bool decide_rsa(double delta_bounded, double beta, std::mt19937_64& rng);
double acceptance_probability(double delta, double beta);

/// Slotted pick/train/messaging/decision simulation. Deterministic for a fixed
/// seed; pick, drop, and acceptance draws come from three separate streams so
/// runs with equal seeds are coupled across algorithms.
RunResult run(const Network& net, const WeightVector& weights, const RunSpec& spec,
              const std::function<double(const Configuration&)>& h = nullptr);

std::vector<double> occupancy_histogram(const std::vector<uint32_t>& states, size_t space_size);

/// Running time-average occupancy of the optimizer set X*, averaged over seeds.
std::vector<double> annealing_occupancy(const Network& net, const WeightVector& weights,
                                        Algorithm alg, const CoolingSchedule& schedule,
                                        const DropModel& drop, const BoundTable* bounds,
                                        int64_t horizon, const std::vector<uint64_t>& seeds,
                                        int64_t stride = 1);

/// Exhaustive argmax of f over the state space.
std::vector<size_t> optimal_states(const Network& net, const WeightVector& weights);

}  // namespace dropsa
