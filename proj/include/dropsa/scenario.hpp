#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dropsa/chain.hpp"
#include "dropsa/queueing.hpp"

namespace dropsa {

/// A declarative experiment: model, parameter lists, algorithms, metrics.
/// Cells are the cross product (algorithm x beta x p x cmax x arrival x seed).
struct Scenario {
    std::string name;
    std::string model_json;  // network document (see Network serialization)
    WeightVector weights;    // fixed-weight scenarios
    std::vector<Algorithm> algorithms;
    std::vector<double> betas;               // fixed temperature points
    std::optional<CoolingSchedule> schedule; // inverse-log annealing runs
    std::vector<double> drop_ps;
    std::vector<double> cmaxes;    // RSA bound parameter (0 -> tight bound)
    std::vector<double> arrivals;  // uniform per-link arrival rates (queueing)
    int64_t horizon = 0;
    std::vector<uint64_t> seeds;
    std::vector<std::string> metrics;  // occupancy | variance_rate | avg_queue | anneal_occupancy
    Configuration h_state;             // indicator functional for variance_rate
    std::vector<int64_t> batch_sizes;
    size_t state_cap = size_t{1} << 20;

    static Scenario from_json_string(const std::string& text);
    static Scenario from_file(const std::string& path);
    std::string to_json_string() const;
    void validate() const;

    Network build_network() const;
};

struct ResultRow {
    std::string scenario;
    std::string algorithm;
    double beta = 0.0;
    double p = 0.0;
    double cmax = 0.0;
    double arrival = 0.0;
    std::string seed;
    std::string metric;
    std::string key;
    double value = 0.0;
};

std::string to_csv(const std::vector<ResultRow>& rows);

/// Executes every cell of the scenario; deterministic per seed, cells run in a
/// thread pool, rows sorted before emission.
std::vector<ResultRow> run_scenario(const Scenario& scenario, int threads = 1);

struct AnalysisCheck {
    std::string name;
    bool pass = false;
    bool informational = false;  // reported, not gated
    double value = 0.0;
};

struct AnalysisReport {
    std::vector<AnalysisCheck> checks;
    bool all_pass() const;
    std::string to_text() const;
};

/// Exact small-instance verification: stationarity, detailed balance, Peskun
/// ordering, subset-inequality exponents, variance rates, RSA bias.
AnalysisReport analyze_scenario(const Scenario& scenario);

/// Overrides one parameter axis (p | arrival | beta | cmax | d) and runs the
/// resulting cross product.
std::vector<ResultRow> sweep_scenario(const Scenario& scenario, const std::string& axis,
                                      const std::vector<double>& values, int threads = 1);

const std::map<std::string, std::string>& bundled_scenarios();

}  // namespace dropsa
