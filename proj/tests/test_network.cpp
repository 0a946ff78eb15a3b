#include <doctest.h>

#include <cmath>

#include "common.hpp"

using namespace dropsa;
using testing_support::four_node;
using testing_support::ten_link;

TEST_CASE("rate table bands are open-left closed-right") {
    RateTable table{{10.0, 20.0, 30.0}, {0.0, 1.0, 2.0, 3.0}};
    table.validate();
    CHECK(table.rate_at_db(50.0) == 3.0);
    CHECK(table.rate_at_db(10.0) == 0.0);
    CHECK(table.rate_at_db(15.0) == 1.0);
    CHECK(table.rate_at_db(20.0) == 1.0);
    CHECK(table.rate_at_db(-1e9) == 0.0);
    CHECK(table.max_rate() == 3.0);
    // non-decreasing step function
    double prev = -1.0;
    for (double db = -10.0; db <= 50.0; db += 0.25) {
        double r = table.rate_at_db(db);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("sinr of an isolated link is signal over noise") {
    SinrTopology topo;
    topo.n = 2;
    topo.tx_pos = {{0, 0}, {100, 100}};
    topo.rx_pos = {{10, 0}, {110, 100}};
    topo.gain = {{1e-8, 1e-10}, {1e-10, 1e-8}};
    topo.noise_mw = 1e-12;
    topo.pathloss_exponent = 4.0;
    PowerAlphabet alphabet{{0.0, 10.0}};
    NeighborSets ns{{{1}, {0}}};

    auto g = sinr(topo, alphabet, {1, 0}, ns, InterferenceMode::Truncated);
    CHECK(g[0] == doctest::Approx(1e5).epsilon(1e-12));
    CHECK(rate_to_db(g[0]) == doctest::Approx(50.0));

    auto zero = sinr(topo, alphabet, {0, 0}, ns, InterferenceMode::Truncated);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
}

TEST_CASE("ten-link sinr matches a direct formula evaluation") {
    Network net = ten_link();
    const SinrTopology& topo = net.topology();
    Configuration x = {1, 0, 2, 1, 0, 2, 1, 1, 0, 2};
    auto got = sinr(topo, net.alphabet(), x, net.neighbors(), InterferenceMode::Full);
    for (int i = 0; i < 10; ++i) {
        double interference = 0.0;
        for (int j = 0; j < 10; ++j) {
            if (j == i) continue;
            interference += topo.gain[j][i] * net.alphabet().power(x[j]);
        }
        double expect = topo.gain[i][i] * net.alphabet().power(x[i]) /
                        (interference + topo.noise_mw);
        CHECK(got[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    // capacity = weight-free table lookup on the same SINR (truncated here)
    auto caps = net.capacities(x);
    auto trunc = sinr(topo, net.alphabet(), x, net.neighbors(), InterferenceMode::Truncated);
    for (int i = 0; i < 10; ++i)
        CHECK(caps[i] == net.rate_table().rate_at_linear(trunc[i]));
}

TEST_CASE("conflict capacity requires an idle neighborhood") {
    Network net = four_node();
    CHECK(net.capacities({1, 1, 0, 0}) == std::vector<double>{1, 1, 0, 0});
    CHECK(net.capacities({1, 1, 1, 0}) == std::vector<double>{0, 0, 0, 0});
    CHECK(net.capacities({0, 0, 0, 0}) == std::vector<double>{0, 0, 0, 0});
    CHECK(net.capacities({0, 0, 1, 0}) == std::vector<double>{0, 0, 1, 0});
    // binary-valued and exclusive with active neighbors
    for (int s = 0; s < 16; ++s) {
        Configuration x = {s & 1, (s >> 1) & 1, (s >> 2) & 1, (s >> 3) & 1};
        auto c = net.capacities(x);
        for (int i = 0; i < 4; ++i) {
            CHECK((c[i] == 0.0 || c[i] == 1.0));
            if (c[i] == 1.0)
                for (int j : net.neighbor_list(i)) CHECK(x[j] == 0);
        }
    }
    CHECK_THROWS(net.validate_configuration({0, 1, 2, 0}));
}

TEST_CASE("random topology generation is seed-deterministic") {
    SinrTopology a = build_random_topology(42, 10, 500.0, 4.0);
    SinrTopology b = build_random_topology(42, 10, 500.0, 4.0);
    CHECK(a.tx_pos == b.tx_pos);
    CHECK(a.rx_pos == b.rx_pos);
    CHECK(a.gain == b.gain);
    SinrTopology c = build_random_topology(43, 10, 500.0, 4.0);
    CHECK(a.tx_pos != c.tx_pos);

    for (const auto& row : a.gain)
        for (double g : row) {
            CHECK(g > 0.0);
            CHECK(std::isfinite(g));
        }

    SinrTopology single = build_random_topology(1, 1, 500.0, 4.0);
    CHECK(single.n == 1);
    CHECK(single.gain[0][0] > 0.0);
}

TEST_CASE("neighbor sets from radius, with symmetric closure") {
    SinrTopology topo = build_random_topology(5, 8, 500.0, 4.0);
    NeighborSets all = neighbor_sets(topo, 1e6);
    for (int i = 0; i < 8; ++i) CHECK(all.degree(i) == 7);
    NeighborSets none = neighbor_sets(topo, 1e-9);
    for (int i = 0; i < 8; ++i) CHECK(none.degree(i) == 0);
    NeighborSets mid = neighbor_sets(topo, 250.0);
    CHECK(mid.symmetric());
}

TEST_CASE("sinr monotonicity in own and others' power") {
    Network net = ten_link();
    const SinrTopology& topo = net.topology();
    Configuration x = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    auto base = sinr(topo, net.alphabet(), x, net.neighbors(), InterferenceMode::Full);
    for (int i = 0; i < 10; ++i) {
        Configuration up = x;
        up[i] = 2;
        auto g = sinr(topo, net.alphabet(), up, net.neighbors(), InterferenceMode::Full);
        CHECK(g[i] >= base[i]);
        for (int j = 0; j < 10; ++j)
            if (j != i) CHECK(g[j] <= base[j]);
    }
}

TEST_CASE("network json round trip") {
    Network conflict = four_node();
    Network c2 = Network::from_json_string(conflict.to_json_string());
    CHECK(c2.n() == 4);
    CHECK(c2.neighbor_list(2) == std::vector<int>{0, 1, 3});

    Network wireless = ten_link();
    Network w2 = Network::from_json_string(wireless.to_json_string());
    CHECK(w2.n() == 10);
    CHECK(w2.topology().gain == wireless.topology().gain);
    CHECK(w2.neighbors().sets == wireless.neighbors().sets);
    Configuration x = {2, 1, 0, 2, 1, 0, 2, 1, 0, 2};
    CHECK(w2.capacities(x) == wireless.capacities(x));
}
