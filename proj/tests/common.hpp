#pragma once

#include "dropsa/network.hpp"
#include "dropsa/objective.hpp"

namespace testing_support {

// Canonical small instance: links a=0, b=1, c=2, d=3; edges a-c, b-c, c-d.
inline dropsa::Network four_node() {
    return dropsa::Network::conflict_network(
        dropsa::ConflictGraph::from_edges(4, {{0, 2}, {1, 2}, {2, 3}}));
}

inline dropsa::WeightVector four_node_weights() { return {5.0, 7.0, 10.0, 3.0}; }

// 10-link deployment used by the bundled wireless scenarios.
inline dropsa::Network ten_link(dropsa::InterferenceMode mode = dropsa::InterferenceMode::Truncated) {
    dropsa::SinrTopology topo = dropsa::build_random_topology(7, 10, 500.0, 4.0, 100.0);
    dropsa::PowerAlphabet alphabet{{0.0, 5.0, 10.0}};
    dropsa::RateTable rates{{10.0, 20.0, 30.0}, {0.0, 1.0, 2.0, 3.0}};
    dropsa::NeighborSets ns = dropsa::neighbor_sets(topo, 250.0);
    return dropsa::Network::sinr_network(std::move(topo), std::move(alphabet), std::move(rates),
                                         std::move(ns), mode);
}

}  // namespace testing_support
