#include "dropsa/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

namespace dropsa {

namespace {

double dist(const std::pair<double, double>& a, const std::pair<double, double>& b) {
    return std::hypot(a.first - b.first, a.second - b.second);
}

}  // namespace

void PowerAlphabet::validate() const {
    if (levels.size() < 2) throw std::invalid_argument("power alphabet needs at least 2 levels");
    for (size_t k = 1; k < levels.size(); ++k) {
        if (!(levels[k] > levels[k - 1]))
            throw std::invalid_argument("power levels must be strictly increasing");
    }
    if (levels.front() < 0.0) throw std::invalid_argument("power levels must be nonnegative");
}

double rate_to_db(double linear) {
    if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

double RateTable::rate_at_db(double sinr_db) const {
    size_t band = 0;
    while (band < thresholds_db.size() && sinr_db > thresholds_db[band]) ++band;
    return rates[band];
}

double RateTable::rate_at_linear(double sinr_linear) const {
    return rate_at_db(rate_to_db(sinr_linear));
}

double RateTable::max_rate() const { return rates.back(); }

void RateTable::validate() const {
    if (rates.size() != thresholds_db.size() + 1)
        throw std::invalid_argument("rate table needs |rates| = |thresholds| + 1");
    if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end()))
        throw std::invalid_argument("rate table thresholds must be ascending");
    if (!std::is_sorted(rates.begin(), rates.end()))
        throw std::invalid_argument("rates must be non-decreasing in SINR");
}

void SinrTopology::validate() const {
    if (n < 1) throw std::invalid_argument("topology needs n >= 1");
    if (static_cast<int>(tx_pos.size()) != n || static_cast<int>(rx_pos.size()) != n)
        throw std::invalid_argument("position arrays must have length n");
    if (static_cast<int>(gain.size()) != n) throw std::invalid_argument("gain matrix must be n x n");
    for (const auto& row : gain) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("gain matrix must be n x n");
        for (double g : row) {
            if (!(g > 0.0) || !std::isfinite(g))
                throw std::invalid_argument("gains must be strictly positive and finite");
        }
    }
    if (!(noise_mw > 0.0)) throw std::invalid_argument("noise must be positive");
}

ConflictGraph ConflictGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    ConflictGraph g;
    g.n = n;
    g.adjacency.assign(static_cast<size_t>(n), {});
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-edges are not allowed");
        g.adjacency[static_cast<size_t>(a)].push_back(b);
        g.adjacency[static_cast<size_t>(b)].push_back(a);
    }
    for (auto& adj : g.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return g;
}

void ConflictGraph::validate() const {
    if (static_cast<int>(adjacency.size()) != n)
        throw std::invalid_argument("adjacency must have length n");
    for (int i = 0; i < n; ++i) {
        for (int j : adjacency[static_cast<size_t>(i)]) {
            if (j == i) throw std::invalid_argument("self-edges are not allowed");
            const auto& back = adjacency[static_cast<size_t>(j)];
            if (!std::binary_search(back.begin(), back.end(), i))
                throw std::invalid_argument("adjacency must be symmetric");
        }
    }
}

bool NeighborSets::symmetric() const {
    for (size_t i = 0; i < sets.size(); ++i) {
        for (int j : sets[i]) {
            const auto& back = sets[static_cast<size_t>(j)];
            if (!std::binary_search(back.begin(), back.end(), static_cast<int>(i))) return false;
        }
    }
    return true;
}

std::vector<double> sinr(const SinrTopology& topo, const PowerAlphabet& alphabet,
                         const Configuration& x, const NeighborSets& neighbors,
                         InterferenceMode mode) {
    if (static_cast<int>(x.size()) != topo.n)
        throw std::invalid_argument("configuration length does not match link count");
    std::vector<double> out(static_cast<size_t>(topo.n));
    for (int i = 0; i < topo.n; ++i) {
        double interference = 0.0;
        if (mode == InterferenceMode::Full) {
            for (int j = 0; j < topo.n; ++j) {
                if (j == i) continue;
                interference += topo.gain[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                                alphabet.power(x[static_cast<size_t>(j)]);
            }
        } else {
            for (int j : neighbors.of(i)) {
                interference += topo.gain[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                                alphabet.power(x[static_cast<size_t>(j)]);
            }
        }
        double signal = topo.gain[static_cast<size_t>(i)][static_cast<size_t>(i)] *
                        alphabet.power(x[static_cast<size_t>(i)]);
        out[static_cast<size_t>(i)] = signal / (interference + topo.noise_mw);
    }
    return out;
}

Network Network::sinr_network(SinrTopology topo, PowerAlphabet alphabet, RateTable rates,
                              NeighborSets neighbors, InterferenceMode mode) {
    topo.validate();
    alphabet.validate();
    rates.validate();
    if (static_cast<int>(neighbors.sets.size()) != topo.n)
        throw std::invalid_argument("neighbor sets must have length n");
    if (!neighbors.symmetric()) throw std::invalid_argument("neighbor sets must be symmetric");
    Network net;
    net.kind_ = Kind::Sinr;
    net.n_ = topo.n;
    net.num_levels_ = alphabet.size();
    net.mode_ = mode;
    net.topo_ = std::move(topo);
    net.alphabet_ = std::move(alphabet);
    net.rates_ = std::move(rates);
    net.neighbors_ = std::move(neighbors);
    return net;
}

Network Network::conflict_network(ConflictGraph graph) {
    graph.validate();
    Network net;
    net.kind_ = Kind::Conflict;
    net.n_ = graph.n;
    net.num_levels_ = 2;
    net.neighbors_.sets = graph.adjacency;
    net.graph_ = std::move(graph);
    return net;
}

const SinrTopology& Network::topology() const {
    if (kind_ != Kind::Sinr) throw std::logic_error("not an SINR network");
    return topo_;
}

const PowerAlphabet& Network::alphabet() const {
    if (kind_ != Kind::Sinr) throw std::logic_error("not an SINR network");
    return alphabet_;
}

const RateTable& Network::rate_table() const {
    if (kind_ != Kind::Sinr) throw std::logic_error("not an SINR network");
    return rates_;
}

const ConflictGraph& Network::graph() const {
    if (kind_ != Kind::Conflict) throw std::logic_error("not a conflict-graph network");
    return graph_;
}

double Network::max_rate() const {
    return kind_ == Kind::Sinr ? rates_.max_rate() : 1.0;
}

void Network::validate_configuration(const Configuration& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("configuration length does not match link count");
    for (int v : x) {
        if (v < 0 || v >= num_levels_)
            throw std::invalid_argument("configuration level index out of range");
    }
}

double Network::capacity(const Configuration& x, int i) const {
    if (kind_ == Kind::Conflict) {
        if (x[static_cast<size_t>(i)] == 0) return 0.0;
        for (int j : graph_.adjacency[static_cast<size_t>(i)]) {
            if (x[static_cast<size_t>(j)] != 0) return 0.0;
        }
        return 1.0;
    }
    double interference = 0.0;
    if (mode_ == InterferenceMode::Full) {
        for (int j = 0; j < n_; ++j) {
            if (j == i) continue;
            interference += topo_.gain[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                            alphabet_.power(x[static_cast<size_t>(j)]);
        }
    } else {
        for (int j : neighbors_.of(i)) {
            interference += topo_.gain[static_cast<size_t>(j)][static_cast<size_t>(i)] *
                            alphabet_.power(x[static_cast<size_t>(j)]);
        }
    }
    double signal = topo_.gain[static_cast<size_t>(i)][static_cast<size_t>(i)] *
                    alphabet_.power(x[static_cast<size_t>(i)]);
    return rates_.rate_at_linear(signal / (interference + topo_.noise_mw));
}

std::vector<double> Network::capacities(const Configuration& x) const {
    validate_configuration(x);
    std::vector<double> out(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<size_t>(i)] = capacity(x, i);
    return out;
}

SinrTopology build_random_topology(uint64_t seed, int n, double region_size,
                                   double pathloss_exponent, double max_link_len) {
    if (n < 1) throw std::invalid_argument("need n >= 1");
    constexpr double kMinLinkLen = 1.0;  // avoid degenerate d -> 0 gains
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    SinrTopology topo;
    topo.n = n;
    topo.noise_mw = 1e-12;
    topo.pathloss_exponent = pathloss_exponent;
    topo.tx_pos.resize(static_cast<size_t>(n));
    topo.rx_pos.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        topo.tx_pos[static_cast<size_t>(i)] = {uniform(0, region_size), uniform(0, region_size)};
        for (;;) {
            std::pair<double, double> rx = {uniform(0, region_size), uniform(0, region_size)};
            double d = dist(topo.tx_pos[static_cast<size_t>(i)], rx);
            if (d <= max_link_len && d >= kMinLinkLen) {
                topo.rx_pos[static_cast<size_t>(i)] = rx;
                break;
            }
        }
    }
    topo.gain.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double d = dist(topo.tx_pos[static_cast<size_t>(j)], topo.rx_pos[static_cast<size_t>(i)]);
            d = std::max(d, kMinLinkLen);
            topo.gain[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                std::pow(d, -pathloss_exponent);
        }
    }
    return topo;
}

NeighborSets neighbor_sets(const SinrTopology& topo, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    NeighborSets ns;
    ns.sets.assign(static_cast<size_t>(topo.n), {});
    std::vector<std::set<int>> tmp(static_cast<size_t>(topo.n));
    for (int i = 0; i < topo.n; ++i) {
        for (int j = 0; j < topo.n; ++j) {
            if (j == i) continue;
            if (dist(topo.tx_pos[static_cast<size_t>(i)], topo.rx_pos[static_cast<size_t>(j)]) <=
                radius) {
                // symmetric closure by union
                tmp[static_cast<size_t>(i)].insert(j);
                tmp[static_cast<size_t>(j)].insert(i);
            }
        }
    }
    for (int i = 0; i < topo.n; ++i)
        ns.sets[static_cast<size_t>(i)].assign(tmp[static_cast<size_t>(i)].begin(),
                                               tmp[static_cast<size_t>(i)].end());
    return ns;
}

std::string Network::to_json_string() const {
    nlohmann::json doc;
    if (kind_ == Kind::Conflict) {
        doc["type"] = "conflict";
        nlohmann::json edges = nlohmann::json::array();
        for (int i = 0; i < n_; ++i) {
            for (int j : graph_.adjacency[static_cast<size_t>(i)]) {
                if (j > i) edges.push_back({i, j});
            }
        }
        doc["n"] = n_;
        doc["edges"] = edges;
    } else {
        doc["type"] = "sinr";
        doc["n"] = n_;
        doc["tx_pos"] = topo_.tx_pos;
        doc["rx_pos"] = topo_.rx_pos;
        doc["gain"] = topo_.gain;
        doc["noise_mw"] = topo_.noise_mw;
        doc["pathloss_exponent"] = topo_.pathloss_exponent;
        doc["levels_mw"] = alphabet_.levels;
        doc["rate_thresholds_db"] = rates_.thresholds_db;
        doc["rates"] = rates_.rates;
        doc["neighbors"] = neighbors_.sets;
        doc["mode"] = mode_ == InterferenceMode::Truncated ? "truncated" : "full";
    }
    return doc.dump(2);
}

Network Network::from_json_string(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    const std::string type = doc.at("type");
    if (type == "conflict") {
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : doc.at("edges")) edges.emplace_back(e.at(0), e.at(1));
        return conflict_network(ConflictGraph::from_edges(doc.at("n"), edges));
    }
    if (type != "sinr") throw std::invalid_argument("unknown network type: " + type);
    SinrTopology topo;
    topo.n = doc.at("n");
    topo.tx_pos = doc.at("tx_pos").get<std::vector<std::pair<double, double>>>();
    topo.rx_pos = doc.at("rx_pos").get<std::vector<std::pair<double, double>>>();
    topo.gain = doc.at("gain").get<std::vector<std::vector<double>>>();
    topo.noise_mw = doc.at("noise_mw");
    topo.pathloss_exponent = doc.at("pathloss_exponent");
    PowerAlphabet alphabet{doc.at("levels_mw").get<std::vector<double>>()};
    RateTable rates{doc.at("rate_thresholds_db").get<std::vector<double>>(),
                    doc.at("rates").get<std::vector<double>>()};
    NeighborSets ns{doc.at("neighbors").get<std::vector<std::vector<int>>>()};
    InterferenceMode mode = doc.at("mode") == "full" ? InterferenceMode::Full
                                                     : InterferenceMode::Truncated;
    return sinr_network(std::move(topo), std::move(alphabet), std::move(rates), std::move(ns), mode);
}

}  // namespace dropsa
