#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dropsa/network.hpp"

namespace dropsa {

using WeightVector = std::vector<double>;

/// Per-link objective differentials for a proposed single-coordinate move at
/// `proposer`. Neighbor entries are aligned with the proposer's neighbor list.
struct Differentials {
    int proposer = -1;
    int from_level = 0;
    int to_level = 0;
    double d_self = 0.0;
    std::vector<int> neighbors;
    std::vector<double> d_neighbor;
};

/// Lower bounds b[i][j][from][to] on the differential of f_j caused by link i
/// moving from level `from` to `to`. -inf marks "no known bound".
class BoundTable {
  public:
    BoundTable(int n, int num_levels);

    double get(int i, int j, int from, int to) const;  // throws if (i,j) missing
    bool has(int i, int j) const;
    void set(int i, int j, int from, int to, double value);

    int num_levels() const { return num_levels_; }

    /// Trivial SINR bound: -w_j * cmax for a power increase, 0 otherwise.
    static BoundTable trivial_sinr(const WeightVector& weights, const NeighborSets& neighbors,
                                   int num_levels, double cmax);
    static BoundTable trivial_sinr(const WeightVector& weights, const NeighborSets& neighbors,
                                   int num_levels, const RateTable& table);
    /// Conflict-graph bound: -w_j when i activates, 0 when it deactivates.
    static BoundTable conflict(const WeightVector& weights, const NeighborSets& neighbors);

    std::string to_json_string() const;
    static BoundTable from_json_string(const std::string& text);

  private:
    int n_ = 0;
    int num_levels_ = 0;
    // per link i: neighbor j -> row-major (from, to) matrix
    std::vector<std::unordered_map<int, std::vector<double>>> entries_;
};

double local_objective(const Network& net, const WeightVector& weights, const Configuration& x,
                       int i);
double total_objective(const Network& net, const WeightVector& weights, const Configuration& x);

/// x_old and x_new must differ at exactly one coordinate.
Differentials differentials(const Network& net, const WeightVector& weights,
                            const Configuration& x_old, const Configuration& x_new);

double aggregate(const Differentials& d);

/// Delta_[S] with the observed subset given as a bitmask over the proposer's
/// neighbor list order. Any -inf bound term yields -inf.
double bounded_aggregate(const Differentials& d, uint64_t subset_mask, const BoundTable& bounds);

}  // namespace dropsa
