#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dropsa/chain.hpp"
#include "dropsa/queueing.hpp"
#include "dropsa/scenario.hpp"

namespace py = pybind11;
using namespace dropsa;

namespace {

// Eigen vectors/matrices cross the boundary as plain nested lists; the desk
// scale instances this module targets make copies cheap.
std::vector<double> to_list(const Vector& v) {
    return {v.data(), v.data() + v.size()};
}

std::vector<std::vector<double>> to_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(static_cast<size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        rows[static_cast<size_t>(r)].assign(m.row(r).begin(), m.row(r).end());
    }
    return rows;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

Vector from_list(const std::vector<double>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distributed annealing simulator and exact-analysis toolkit";

    py::enum_<Algorithm>(m, "Algorithm")
        .value("BSA", Algorithm::BSA)
        .value("LSA", Algorithm::LSA)
        .value("RSA", Algorithm::RSA);
    m.def("algorithm_from_string", &algorithm_from_string);

    py::class_<Network>(m, "Network")
        .def_static("conflict",
                    [](int n, const std::vector<std::pair<int, int>>& edges) {
                        return Network::conflict_network(ConflictGraph::from_edges(n, edges));
                    },
                    py::arg("n"), py::arg("edges"))
        .def_static("from_json", &Network::from_json_string)
        .def("to_json", &Network::to_json_string)
        .def_property_readonly("n", &Network::n)
        .def_property_readonly("num_levels", &Network::num_levels)
        .def("neighbors", [](const Network& net, int i) { return net.neighbor_list(i); })
        .def("capacities", &Network::capacities);

    m.def("build_random_network",
          [](uint64_t seed, int n, double region, double pathloss, double max_link_len,
             std::vector<double> levels_mw, std::vector<double> thresholds_db,
             std::vector<double> rates, double radius) {
              SinrTopology topo = build_random_topology(seed, n, region, pathloss, max_link_len);
              NeighborSets ns = neighbor_sets(topo, radius);
              return Network::sinr_network(std::move(topo), PowerAlphabet{std::move(levels_mw)},
                                           RateTable{std::move(thresholds_db), std::move(rates)},
                                           std::move(ns));
          },
          py::arg("seed"), py::arg("n"), py::arg("region"), py::arg("pathloss"),
          py::arg("max_link_len"), py::arg("levels_mw"), py::arg("thresholds_db"),
          py::arg("rates"), py::arg("radius"));

    py::class_<BoundTable>(m, "BoundTable")
        .def_static("conflict",
                    [](const Network& net, const WeightVector& w) {
                        return BoundTable::conflict(w, net.neighbors());
                    })
        .def_static("trivial_sinr",
                    [](const Network& net, const WeightVector& w, double cmax) {
                        return BoundTable::trivial_sinr(w, net.neighbors(), net.num_levels(),
                                                        cmax);
                    })
        .def("get", &BoundTable::get)
        .def("set", &BoundTable::set)
        .def("to_json", &BoundTable::to_json_string)
        .def_static("from_json", &BoundTable::from_json_string);

    m.def("total_objective", &total_objective);
    m.def("optimal_states", &optimal_states);

    py::class_<CoolingSchedule>(m, "CoolingSchedule")
        .def_static("fixed", &CoolingSchedule::fixed)
        .def_static("inverse_log", &CoolingSchedule::inverse_log, py::arg("d"),
                    py::arg("t0") = 1.0)
        .def("at", &CoolingSchedule::at);

    m.def("simulate",
          [](const Network& net, const WeightVector& weights, const std::string& algorithm,
             const CoolingSchedule& schedule, double drop_p, int64_t horizon, uint64_t seed,
             const BoundTable* bounds) {
              RunSpec spec;
              spec.alg = algorithm_from_string(algorithm);
              spec.schedule = schedule;
              spec.drop = IndependentDrop{drop_p};
              spec.horizon = horizon;
              spec.seed = seed;
              spec.trace = TraceLevel::States;
              spec.bounds = bounds;
              RunResult r = run(net, weights, spec);
              return py::make_tuple(r.final_x, r.states);
          },
          py::arg("network"), py::arg("weights"), py::arg("algorithm"), py::arg("schedule"),
          py::arg("drop_p"), py::arg("horizon"), py::arg("seed"),
          py::arg("bounds") = nullptr);

    m.def("occupancy_histogram", &occupancy_histogram);

    m.def("gibbs", [](const Network& net, const WeightVector& w, double beta) {
        return to_list(gibbs(net, w, beta));
    });
    m.def("matrix_bsa", [](const Network& net, const WeightVector& w, double beta) {
        return to_rows(matrix_bsa(net, w, beta));
    });
    m.def("matrix_lsa", [](const Network& net, const WeightVector& w, double beta, double p) {
        return to_rows(matrix_lsa(net, w, beta, IndependentDrop{p}));
    });
    m.def("matrix_rsa",
          [](const Network& net, const WeightVector& w, const BoundTable& bounds, double beta,
             double p) { return to_rows(matrix_rsa(net, w, bounds, beta, IndependentDrop{p})); });
    m.def("stationary", [](const std::vector<std::vector<double>>& P) {
        return to_list(stationary(from_rows(P)));
    });
    m.def("peskun_check",
          [](const std::vector<std::vector<double>>& low,
             const std::vector<std::vector<double>>& high) {
              PeskunResult r = peskun_check(from_rows(low), from_rows(high));
              return py::make_tuple(r.ordered, r.max_violation);
          });
    m.def("exact_avr",
          [](const std::vector<std::vector<double>>& P, const std::vector<double>& pi,
             const std::vector<double>& h) {
              return exact_avr(from_rows(P), from_list(pi), from_list(h));
          });
    m.def("empirical_avr", &empirical_avr);
    m.def("tv_distance", [](const std::vector<double>& a, const std::vector<double>& b) {
        return tv_distance(from_list(a), from_list(b));
    });
    m.def("exponent_check", [](const Network& net, const WeightVector& w,
                               const BoundTable& bounds) {
        ExponentReport r = exponent_check(net, w, bounds);
        return py::make_tuple(r.ok(), r.violations, r.equality_failures, r.subsets_checked);
    });

    m.def("run_queueing",
          [](const Network& net, const std::string& algorithm, double drop_p, int64_t horizon,
             uint64_t seed, const std::vector<double>& arrivals) {
              QueueSpec spec;
              spec.alg = algorithm_from_string(algorithm);
              spec.drop = IndependentDrop{drop_p};
              spec.horizon = horizon;
              spec.seed = seed;
              spec.arrivals = arrivals;
              QueueResult r = run_queueing(net, spec);
              return py::make_tuple(r.avg_queue, r.max_queue_link, r.max_stale_violation);
          },
          py::arg("network"), py::arg("algorithm"), py::arg("drop_p"), py::arg("horizon"),
          py::arg("seed"), py::arg("arrivals"));

    m.def("run_scenario_csv", [](const std::string& scenario_json, int threads) {
        return to_csv(run_scenario(Scenario::from_json_string(scenario_json), threads));
    }, py::arg("scenario_json"), py::arg("threads") = 1);
    m.def("analyze_scenario_text", [](const std::string& scenario_json) {
        AnalysisReport report = analyze_scenario(Scenario::from_json_string(scenario_json));
        return py::make_tuple(report.all_pass(), report.to_text());
    });
    m.def("bundled_scenarios", [] {
        return std::map<std::string, std::string>(bundled_scenarios());
    });
}
