#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dropsa {

/// Per-link transmit power level indices; the Markov-chain state.
using Configuration = std::vector<int>;

/// Ordered transmit power values (mW). Index 0 may be power 0.
struct PowerAlphabet {
    std::vector<double> levels;

    int size() const { return static_cast<int>(levels.size()); }
    double power(int idx) const { return levels.at(static_cast<size_t>(idx)); }
    void validate() const;
};

/// Step map from SINR (dB) to rate. Bands are open-left/closed-right:
/// (-inf, th[0]] -> rates[0], (th[k-1], th[k]] -> rates[k], (th.back(), inf) -> rates.back().
struct RateTable {
    std::vector<double> thresholds_db;
    std::vector<double> rates;

    double rate_at_db(double sinr_db) const;
    double rate_at_linear(double sinr_linear) const;
    double max_rate() const;
    void validate() const;
};

struct SinrTopology {
    int n = 0;
    std::vector<std::pair<double, double>> tx_pos;  // (x, y) in meters
    std::vector<std::pair<double, double>> rx_pos;
    std::vector<std::vector<double>> gain;  // gain[j][i]: link-j tx -> link-i rx
    double noise_mw = 0.0;
    double pathloss_exponent = 0.0;

    void validate() const;
};

struct ConflictGraph {
    int n = 0;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor lists, symmetric

    static ConflictGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    void validate() const;
};

/// Symmetric neighbor sets N[i]; stored sorted, i excluded.
struct NeighborSets {
    std::vector<std::vector<int>> sets;

    int degree(int i) const { return static_cast<int>(sets[static_cast<size_t>(i)].size()); }
    const std::vector<int>& of(int i) const { return sets[static_cast<size_t>(i)]; }
    bool symmetric() const;
};

enum class InterferenceMode {
    Truncated,  // interference only from N_i; neighbor-local differentials are exact
    Full,       // interference from all j != i; differentials become approximate
};

std::vector<double> sinr(const SinrTopology& topo, const PowerAlphabet& alphabet,
                         const Configuration& x, const NeighborSets& neighbors,
                         InterferenceMode mode);

/// A capacity model: either SINR-based with a rate table, or a binary conflict graph.
class Network {
  public:
    enum class Kind { Sinr, Conflict };

    static Network sinr_network(SinrTopology topo, PowerAlphabet alphabet, RateTable rates,
                                NeighborSets neighbors,
                                InterferenceMode mode = InterferenceMode::Truncated);
    static Network conflict_network(ConflictGraph graph);

    Kind kind() const { return kind_; }
    int n() const { return n_; }
    int num_levels() const { return num_levels_; }
    InterferenceMode mode() const { return mode_; }
    const NeighborSets& neighbors() const { return neighbors_; }
    const std::vector<int>& neighbor_list(int i) const { return neighbors_.of(i); }
    const SinrTopology& topology() const;
    const PowerAlphabet& alphabet() const;
    const RateTable& rate_table() const;
    const ConflictGraph& graph() const;
    double max_rate() const;

    double capacity(const Configuration& x, int i) const;
    std::vector<double> capacities(const Configuration& x) const;

    void validate_configuration(const Configuration& x) const;

    std::string to_json_string() const;
    static Network from_json_string(const std::string& doc);

  private:
    Network() = default;

    Kind kind_ = Kind::Conflict;
    int n_ = 0;
    int num_levels_ = 2;
    InterferenceMode mode_ = InterferenceMode::Truncated;
    NeighborSets neighbors_;
    SinrTopology topo_;
    PowerAlphabet alphabet_;
    RateTable rates_;
    ConflictGraph graph_;
};

/// Uniform deployment in a square region; rx retried until within max_link_len
/// (and at least 1 m) of its tx. Gains g[j][i] = d(tx_j, rx_i)^-gamma.
SinrTopology build_random_topology(uint64_t seed, int n, double region_size,
                                   double pathloss_exponent, double max_link_len = 100.0);

NeighborSets neighbor_sets(const SinrTopology& topo, double radius);

double rate_to_db(double linear);

}  // namespace dropsa
