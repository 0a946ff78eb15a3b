#include <doctest.h>

#include "common.hpp"
#include "dropsa/scenario.hpp"

using namespace dropsa;

namespace {

const char* kSmallScenario = R"({
  "name": "small",
  "model": {"type": "conflict", "n": 4, "edges": [[0,2],[1,2],[2,3]]},
  "weights": [5, 7, 10, 3],
  "algorithms": ["bsa", "lsa", "rsa"],
  "beta": [1.0],
  "drop_p": [0.5],
  "horizon": 20000,
  "seeds": [1, 2],
  "metrics": ["occupancy"]
})";

}  // namespace

TEST_CASE("scenario json round trip and validation") {
    Scenario sc = Scenario::from_json_string(kSmallScenario);
    CHECK(sc.name == "small");
    CHECK(sc.algorithms.size() == 3);
    CHECK(sc.build_network().n() == 4);

    Scenario copy = Scenario::from_json_string(sc.to_json_string());
    CHECK(copy.name == sc.name);
    CHECK(copy.betas == sc.betas);
    CHECK(copy.drop_ps == sc.drop_ps);
    CHECK(copy.seeds == sc.seeds);
    CHECK(copy.metrics == sc.metrics);

    std::string no_algs = kSmallScenario;
    const std::string needle = "\"bsa\", \"lsa\", \"rsa\"";
    no_algs.replace(no_algs.find(needle), needle.size(), "");
    CHECK_THROWS_WITH(Scenario::from_json_string(no_algs), doctest::Contains("algorithms"));
}

TEST_CASE("runs replay to byte-identical csv") {
    Scenario sc = Scenario::from_json_string(kSmallScenario);
    std::string csv1 = to_csv(run_scenario(sc, 2));
    std::string csv2 = to_csv(run_scenario(sc, 1));
    CHECK(csv1 == csv2);
    CHECK(csv1.substr(0, csv1.find('\n')) ==
          "scenario,algorithm,beta,p,cmax,arrival,seed,metric,key,value");
    // 2 seeds x 3 algorithms of nonempty occupancy rows
    CHECK(csv1.find("small,bsa,1,0.5,0,0,1,occupancy,") != std::string::npos);
    CHECK(csv1.find("small,rsa,1,0.5,0,0,2,occupancy,") != std::string::npos);
}

TEST_CASE("single-point sweep equals a plain run") {
    Scenario sc = Scenario::from_json_string(kSmallScenario);
    auto swept = sweep_scenario(sc, "p", {0.5}, 2);
    auto plain = run_scenario(sc, 2);
    CHECK(to_csv(swept) == to_csv(plain));
    CHECK_THROWS_WITH(sweep_scenario(sc, "bogus", {1.0}), doctest::Contains("axis"));
}

TEST_CASE("bundled scenarios parse and validate") {
    const auto& bundled = bundled_scenarios();
    CHECK(bundled.size() == 6);
    for (const char* name : {"fig2", "fig3", "fig4", "fig6", "fig7", "anneal"})
        CHECK(bundled.count(name) == 1);
    for (const auto& [name, text] : bundled) {
        Scenario sc = Scenario::from_json_string(text);
        CHECK(sc.name == name);
        CHECK(sc.build_network().n() >= 4);
    }
}

TEST_CASE("exact analysis report on the canonical instance") {
    Scenario sc = Scenario::from_json_string(kSmallScenario);
    AnalysisReport report = analyze_scenario(sc);
    CHECK(report.all_pass());
    CHECK(report.to_text().find("RESULT: all checks passed") != std::string::npos);
    bool saw_bias = false;
    for (const auto& c : report.checks)
        if (c.name.rfind("rsa_bias_tv", 0) == 0) saw_bias = true;
    CHECK(saw_bias);
}

TEST_CASE("queueing metrics flow into rows") {
    Scenario sc = Scenario::from_json_string(R"({
      "name": "q",
      "model": {"type": "conflict", "n": 4, "edges": [[0,2],[1,2],[2,3]]},
      "algorithms": ["lsa", "rsa"],
      "beta": [1.0],
      "drop_p": [0.5],
      "arrival": [0.2],
      "horizon": 10000,
      "seeds": [1],
      "metrics": ["avg_queue"]
    })");
    auto rows = run_scenario(sc, 2);
    int queue_rows = 0, stale_rows = 0;
    for (const auto& r : rows) {
        if (r.metric == "avg_queue") ++queue_rows;
        if (r.metric == "stale_weight_violation") {
            ++stale_rows;
            CHECK(r.value <= 1e-12);
        }
    }
    CHECK(queue_rows == 2 * 4);
    CHECK(stale_rows == 2);
}
