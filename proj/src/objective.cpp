#include "dropsa/objective.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace dropsa {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

BoundTable::BoundTable(int n, int num_levels) : n_(n), num_levels_(num_levels) {
    entries_.resize(static_cast<size_t>(n));
}

bool BoundTable::has(int i, int j) const {
    return entries_[static_cast<size_t>(i)].count(j) > 0;
}

double BoundTable::get(int i, int j, int from, int to) const {
    const auto& row = entries_[static_cast<size_t>(i)];
    auto it = row.find(j);
    if (it == row.end()) throw std::out_of_range("missing bound entry for link pair");
    return it->second[static_cast<size_t>(from * num_levels_ + to)];
}

void BoundTable::set(int i, int j, int from, int to, double value) {
    auto& row = entries_[static_cast<size_t>(i)];
    auto [it, inserted] = row.try_emplace(j, static_cast<size_t>(num_levels_ * num_levels_), 0.0);
    it->second[static_cast<size_t>(from * num_levels_ + to)] = value;
}

BoundTable BoundTable::trivial_sinr(const WeightVector& weights, const NeighborSets& neighbors,
                                    int num_levels, double cmax) {
    BoundTable table(static_cast<int>(neighbors.sets.size()), num_levels);
    for (size_t i = 0; i < neighbors.sets.size(); ++i) {
        for (int j : neighbors.sets[i]) {
            for (int from = 0; from < num_levels; ++from) {
                for (int to = 0; to < num_levels; ++to) {
                    double b = (to > from) ? -weights[static_cast<size_t>(j)] * cmax : 0.0;
                    table.set(static_cast<int>(i), j, from, to, b);
                }
            }
        }
    }
    return table;
}

BoundTable BoundTable::trivial_sinr(const WeightVector& weights, const NeighborSets& neighbors,
                                    int num_levels, const RateTable& rates) {
    return trivial_sinr(weights, neighbors, num_levels, rates.max_rate());
}

BoundTable BoundTable::conflict(const WeightVector& weights, const NeighborSets& neighbors) {
    BoundTable table(static_cast<int>(neighbors.sets.size()), 2);
    for (size_t i = 0; i < neighbors.sets.size(); ++i) {
        for (int j : neighbors.sets[i]) {
            table.set(static_cast<int>(i), j, 0, 1, -weights[static_cast<size_t>(j)]);
            table.set(static_cast<int>(i), j, 1, 0, 0.0);
        }
    }
    return table;
}

std::string BoundTable::to_json_string() const {
    nlohmann::json doc;
    doc["n"] = n_;
    doc["num_levels"] = num_levels_;
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < n_; ++i) {
        for (const auto& [j, values] : entries_[static_cast<size_t>(i)]) {
            nlohmann::json vals = nlohmann::json::array();
            for (double v : values) {
                if (std::isinf(v))
                    vals.push_back("-inf");
                else
                    vals.push_back(v);
            }
            entries.push_back({{"i", i}, {"j", j}, {"values", vals}});
        }
    }
    doc["entries"] = entries;
    return doc.dump(2);
}

BoundTable BoundTable::from_json_string(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    BoundTable table(doc.at("n"), doc.at("num_levels"));
    for (const auto& entry : doc.at("entries")) {
        int i = entry.at("i");
        int j = entry.at("j");
        const auto& vals = entry.at("values");
        int L = table.num_levels_;
        for (int from = 0; from < L; ++from) {
            for (int to = 0; to < L; ++to) {
                const auto& v = vals.at(static_cast<size_t>(from * L + to));
                table.set(i, j, from, to, v.is_string() ? kNegInf : v.get<double>());
            }
        }
    }
    return table;
}

double local_objective(const Network& net, const WeightVector& weights, const Configuration& x,
                       int i) {
    return weights[static_cast<size_t>(i)] * net.capacity(x, i);
}

double total_objective(const Network& net, const WeightVector& weights, const Configuration& x) {
    double f = 0.0;
    for (int i = 0; i < net.n(); ++i) f += local_objective(net, weights, x, i);
    return f;
}

Differentials differentials(const Network& net, const WeightVector& weights,
                            const Configuration& x_old, const Configuration& x_new) {
    if (x_old.size() != x_new.size())
        throw std::invalid_argument("configurations must have equal length");
    int proposer = -1;
    for (size_t k = 0; k < x_old.size(); ++k) {
        if (x_old[k] != x_new[k]) {
            if (proposer >= 0)
                throw std::invalid_argument("configurations differ at more than one coordinate");
            proposer = static_cast<int>(k);
        }
    }
    if (proposer < 0)
        throw std::invalid_argument("configurations differ at no coordinate");

    Differentials d;
    d.proposer = proposer;
    d.from_level = x_old[static_cast<size_t>(proposer)];
    d.to_level = x_new[static_cast<size_t>(proposer)];
    d.d_self = local_objective(net, weights, x_new, proposer) -
               local_objective(net, weights, x_old, proposer);
    d.neighbors = net.neighbor_list(proposer);
    d.d_neighbor.reserve(d.neighbors.size());
    for (int j : d.neighbors) {
        d.d_neighbor.push_back(local_objective(net, weights, x_new, j) -
                               local_objective(net, weights, x_old, j));
    }
    return d;
}

double aggregate(const Differentials& d) {
    double sum = d.d_self;
    for (double v : d.d_neighbor) sum += v;
    return sum;
}

double bounded_aggregate(const Differentials& d, uint64_t subset_mask, const BoundTable& bounds) {
    double sum = d.d_self;
    for (size_t k = 0; k < d.neighbors.size(); ++k) {
        if (subset_mask & (uint64_t{1} << k)) {
            sum += d.d_neighbor[k];
        } else {
            double b = bounds.get(d.proposer, d.neighbors[k], d.from_level, d.to_level);
            if (b == kNegInf) return kNegInf;
            sum += b;
        }
    }
    return sum;
}

}  // namespace dropsa
