#include "dropsa/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dropsa {

namespace {

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string fmt_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string config_string(const Configuration& x) {
    std::string s;
    for (int v : x) s += std::to_string(v);
    return s;
}

struct Cell {
    Algorithm alg;
    double beta = 0.0;
    double p = 0.0;
    double cmax = 0.0;
    double arrival = 0.0;
    uint64_t seed = 0;
};

}  // namespace

Scenario Scenario::from_json_string(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    Scenario sc;
    sc.name = doc.at("name");
    sc.model_json = doc.at("model").dump();
    if (doc.contains("weights")) sc.weights = doc["weights"].get<WeightVector>();
    for (const auto& a : doc.at("algorithms"))
        sc.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    if (doc.contains("beta")) sc.betas = doc["beta"].get<std::vector<double>>();
    if (doc.contains("schedule")) {
        const auto& s = doc["schedule"];
        if (s.at("type") == "inverse_log")
            sc.schedule = CoolingSchedule::inverse_log(s.at("d"), s.value("t0", 1.0));
        else
            sc.schedule = CoolingSchedule::fixed(s.at("beta"));
    }
    sc.drop_ps = doc.at("drop_p").get<std::vector<double>>();
    if (doc.contains("cmax")) sc.cmaxes = doc["cmax"].get<std::vector<double>>();
    if (doc.contains("arrival")) sc.arrivals = doc["arrival"].get<std::vector<double>>();
    sc.horizon = doc.at("horizon");
    sc.seeds = doc.at("seeds").get<std::vector<uint64_t>>();
    sc.metrics = doc.at("metrics").get<std::vector<std::string>>();
    if (doc.contains("h_state")) sc.h_state = doc["h_state"].get<Configuration>();
    if (doc.contains("batch_sizes")) sc.batch_sizes = doc["batch_sizes"].get<std::vector<int64_t>>();
    if (doc.contains("state_cap")) sc.state_cap = doc["state_cap"].get<size_t>();
    sc.validate();
    return sc;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

std::string Scenario::to_json_string() const {
    nlohmann::json doc;
    doc["name"] = name;
    doc["model"] = nlohmann::json::parse(model_json);
    if (!weights.empty()) doc["weights"] = weights;
    nlohmann::json algs = nlohmann::json::array();
    for (Algorithm a : algorithms) algs.push_back(to_string(a));
    doc["algorithms"] = algs;
    if (!betas.empty()) doc["beta"] = betas;
    if (schedule) {
        if (schedule->kind == CoolingSchedule::Kind::InverseLog)
            doc["schedule"] = {{"type", "inverse_log"}, {"d", schedule->d}, {"t0", schedule->t0}};
        else
            doc["schedule"] = {{"type", "fixed"}, {"beta", schedule->beta}};
    }
    doc["drop_p"] = drop_ps;
    if (!cmaxes.empty()) doc["cmax"] = cmaxes;
    if (!arrivals.empty()) doc["arrival"] = arrivals;
    doc["horizon"] = horizon;
    doc["seeds"] = seeds;
    doc["metrics"] = metrics;
    if (!h_state.empty()) doc["h_state"] = h_state;
    if (!batch_sizes.empty()) doc["batch_sizes"] = batch_sizes;
    doc["state_cap"] = state_cap;
    return doc.dump(2);
}

void Scenario::validate() const {
    if (algorithms.empty()) throw std::invalid_argument("scenario.algorithms: must be nonempty");
    if (metrics.empty()) throw std::invalid_argument("scenario.metrics: must be nonempty");
    if (seeds.empty()) throw std::invalid_argument("scenario.seeds: must be nonempty");
    if (drop_ps.empty()) throw std::invalid_argument("scenario.drop_p: must be nonempty");
    if (horizon < 0) throw std::invalid_argument("scenario.horizon: must be nonnegative");
    if (betas.empty() && !schedule)
        throw std::invalid_argument("scenario: needs either beta points or a schedule");
    for (const std::string& m : metrics) {
        if (m != "occupancy" && m != "variance_rate" && m != "avg_queue" &&
            m != "anneal_occupancy")
            throw std::invalid_argument("scenario.metrics: unknown metric " + m);
        if (m == "variance_rate" && (h_state.empty() || batch_sizes.empty()))
            throw std::invalid_argument("scenario: variance_rate needs h_state and batch_sizes");
        if (m == "avg_queue" && arrivals.empty())
            throw std::invalid_argument("scenario.arrival: needed for avg_queue");
    }
}

Network Scenario::build_network() const {
    nlohmann::json doc = nlohmann::json::parse(model_json);
    if (doc.at("type") == "sinr_random") {
        SinrTopology topo =
            build_random_topology(doc.at("seed"), doc.at("n"), doc.at("region"),
                                  doc.at("pathloss"), doc.value("max_link_len", 100.0));
        topo.noise_mw = doc.value("noise_mw", 1e-12);
        PowerAlphabet alphabet{doc.at("levels_mw").get<std::vector<double>>()};
        RateTable rates{doc.at("rate_thresholds_db").get<std::vector<double>>(),
                        doc.at("rates").get<std::vector<double>>()};
        NeighborSets ns = neighbor_sets(topo, doc.at("neighbor_radius"));
        InterferenceMode mode = doc.value("mode", std::string("truncated")) == "full"
                                    ? InterferenceMode::Full
                                    : InterferenceMode::Truncated;
        return Network::sinr_network(std::move(topo), std::move(alphabet), std::move(rates),
                                     std::move(ns), mode);
    }
    return Network::from_json_string(model_json);
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "scenario,algorithm,beta,p,cmax,arrival,seed,metric,key,value\n";
    for (const auto& r : rows) {
        out += r.scenario + ',' + r.algorithm + ',' + fmt_param(r.beta) + ',' + fmt_param(r.p) +
               ',' + fmt_param(r.cmax) + ',' + fmt_param(r.arrival) + ',' + r.seed + ',' +
               r.metric + ',' + r.key + ',' + fmt_value(r.value) + '\n';
    }
    return out;
}

namespace {

BoundTable make_bounds(const Network& net, const WeightVector& weights, double cmax) {
    if (net.kind() == Network::Kind::Conflict && cmax <= 0.0)
        return BoundTable::conflict(weights, net.neighbors());
    double c = cmax > 0.0 ? cmax : net.max_rate();
    return BoundTable::trivial_sinr(weights, net.neighbors(), net.num_levels(), c);
}

void sort_rows(std::vector<ResultRow>& rows) {
    auto key = [](const ResultRow& r) {
        return std::tie(r.scenario, r.metric, r.algorithm, r.beta, r.p, r.cmax, r.arrival, r.seed,
                        r.key);
    };
    std::sort(rows.begin(), rows.end(),
              [&](const ResultRow& a, const ResultRow& b) { return key(a) < key(b); });
}

std::vector<ResultRow> run_cell(const Scenario& sc, const Network& net, const Cell& cell) {
    std::vector<ResultRow> rows;
    ResultRow base;
    base.scenario = sc.name;
    base.algorithm = to_string(cell.alg);
    base.beta = cell.beta;
    base.p = cell.p;
    base.cmax = cell.cmax;
    base.arrival = cell.arrival;
    base.seed = std::to_string(cell.seed);

    for (const std::string& metric : sc.metrics) {
        if (metric == "anneal_occupancy") continue;  // aggregated across seeds below
        if (metric == "avg_queue") {
            QueueSpec qs;
            qs.alg = cell.alg;
            qs.beta = cell.beta;
            qs.drop = IndependentDrop{cell.p};
            qs.horizon = sc.horizon;
            qs.seed = cell.seed;
            qs.arrivals.assign(static_cast<size_t>(net.n()), cell.arrival);
            qs.bound_cmax = cell.cmax;
            QueueResult qr = run_queueing(net, qs);
            for (int j = 0; j < net.n(); ++j) {
                ResultRow r = base;
                r.metric = "avg_queue";
                r.key = std::to_string(j);
                r.value = qr.avg_queue[static_cast<size_t>(j)];
                rows.push_back(r);
            }
            ResultRow worst = base;
            worst.metric = "max_queue_link";
            worst.key = "link";
            worst.value = qr.max_queue_link;
            rows.push_back(worst);
            ResultRow stale = base;
            stale.metric = "stale_weight_violation";
            stale.key = "max";
            stale.value = qr.max_stale_violation;
            rows.push_back(stale);
            continue;
        }

        BoundTable bounds = make_bounds(net, sc.weights, cell.cmax);
        RunSpec spec;
        spec.alg = cell.alg;
        spec.schedule = sc.schedule ? *sc.schedule : CoolingSchedule::fixed(cell.beta);
        spec.drop = IndependentDrop{cell.p};
        spec.horizon = sc.horizon;
        spec.seed = cell.seed;
        spec.bounds = &bounds;

        if (metric == "occupancy") {
            spec.trace = TraceLevel::States;
            RunResult result = run(net, sc.weights, spec);
            StateSpace space(net.n(), net.num_levels(), sc.state_cap);
            std::vector<double> hist = occupancy_histogram(result.states, space.size);
            for (size_t s = 0; s < hist.size(); ++s) {
                if (hist[s] == 0.0) continue;
                ResultRow r = base;
                r.metric = "occupancy";
                r.key = config_string(space.config(s));
                r.value = hist[s];
                rows.push_back(r);
            }
        } else if (metric == "variance_rate") {
            Configuration target = sc.h_state;
            auto h = [&target](const Configuration& x) { return x == target ? 1.0 : 0.0; };
            RunResult result = run(net, sc.weights, spec, h);
            for (auto [b, v] : empirical_avr(result.h_trace, sc.batch_sizes)) {
                ResultRow r = base;
                r.metric = "variance_rate";
                r.key = std::to_string(b);
                r.value = v;
                rows.push_back(r);
            }
        }
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> run_scenario(const Scenario& sc, int threads) {
    sc.validate();
    Network net = sc.build_network();

    std::vector<Cell> cells;
    std::vector<double> betas = sc.betas.empty() ? std::vector<double>{-1.0} : sc.betas;
    std::vector<double> cmaxes = sc.cmaxes.empty() ? std::vector<double>{0.0} : sc.cmaxes;
    std::vector<double> arrivals = sc.arrivals.empty() ? std::vector<double>{0.0} : sc.arrivals;
    for (Algorithm alg : sc.algorithms)
        for (double beta : betas)
            for (double p : sc.drop_ps)
                for (double cmax : cmaxes)
                    for (double arrival : arrivals)
                        for (uint64_t seed : sc.seeds)
                            cells.push_back({alg, beta, p, cmax, arrival, seed});

    std::vector<std::vector<ResultRow>> per_cell(cells.size());
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            try {
                per_cell[k] = run_cell(sc, net, cells[k]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    std::vector<ResultRow> rows;
    for (auto& cr : per_cell) rows.insert(rows.end(), cr.begin(), cr.end());

    // Seed-averaged annealing occupancy curves.
    if (std::find(sc.metrics.begin(), sc.metrics.end(), "anneal_occupancy") != sc.metrics.end()) {
        if (!sc.schedule) throw std::invalid_argument("anneal_occupancy needs a schedule");
        int64_t stride = std::max<int64_t>(1, sc.horizon / 100);
        for (Algorithm alg : sc.algorithms) {
            for (double p : sc.drop_ps) {
                for (double cmax : cmaxes) {
                    BoundTable bounds = make_bounds(net, sc.weights, cmax);
                    std::vector<double> curve =
                        annealing_occupancy(net, sc.weights, alg, *sc.schedule,
                                            IndependentDrop{p}, &bounds, sc.horizon, sc.seeds,
                                            stride);
                    for (size_t k = 0; k < curve.size(); ++k) {
                        ResultRow r;
                        r.scenario = sc.name;
                        r.algorithm = to_string(alg);
                        r.beta = -1.0;
                        r.p = p;
                        r.cmax = cmax;
                        r.arrival = 0.0;
                        r.seed = "mean";
                        r.metric = "anneal_occupancy";
                        r.key = std::to_string(static_cast<int64_t>(k + 1) * stride);
                        r.value = curve[k];
                        rows.push_back(r);
                    }
                }
            }
        }
    }

    sort_rows(rows);
    return rows;
}

bool AnalysisReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AnalysisCheck& c) { return c.pass || c.informational; });
}

std::string AnalysisReport::to_text() const {
    std::string out;
    for (const auto& c : checks) {
        out += c.informational ? "INFO" : (c.pass ? "PASS" : "FAIL");
        out += ' ' + c.name + " = " + fmt_value(c.value) + '\n';
    }
    out += all_pass() ? "RESULT: all checks passed\n" : "RESULT: checks FAILED\n";
    return out;
}

AnalysisReport analyze_scenario(const Scenario& sc) {
    Network net = sc.build_network();
    AnalysisReport report;
    auto add = [&report](const std::string& name, bool pass, double value,
                         bool informational = false) {
        report.checks.push_back({name, pass, informational, value});
    };

    std::vector<double> cmaxes = sc.cmaxes.empty() ? std::vector<double>{0.0} : sc.cmaxes;
    std::vector<size_t> optima = optimal_states(net, sc.weights);

    for (double cmax : cmaxes) {
        BoundTable bounds = make_bounds(net, sc.weights, cmax);
        ExponentReport er = exponent_check(net, sc.weights, bounds, sc.state_cap);
        add("exponent_check[cmax=" + fmt_param(cmax) + "].violations", er.ok(),
            static_cast<double>(er.violations + er.equality_failures));
    }

    for (double beta : sc.betas) {
        std::string bt = "[beta=" + fmt_param(beta) + "]";
        Vector pi = gibbs(net, sc.weights, beta, sc.state_cap);
        Matrix pb = matrix_bsa(net, sc.weights, beta, sc.state_cap);
        double tv_b = tv_distance(stationary(pb), pi);
        add("bsa_stationary_tv" + bt, tv_b < 1e-10, tv_b);
        double db = 0.0;
        for (Eigen::Index r = 0; r < pb.rows(); ++r)
            for (Eigen::Index c = 0; c < pb.cols(); ++c)
                db = std::max(db, std::abs(pi(r) * pb(r, c) - pi(c) * pb(c, r)));
        add("bsa_detailed_balance" + bt, db < 1e-12, db);

        for (double p : sc.drop_ps) {
            std::string pt = bt + "[p=" + fmt_param(p) + "]";
            IndependentDrop drop{p};
            Matrix pl = matrix_lsa(net, sc.weights, beta, drop, sc.state_cap);
            double tv_l = tv_distance(stationary(pl), pi);
            add("lsa_stationary_tv" + pt, tv_l < 1e-10, tv_l);

            for (double cmax : cmaxes) {
                std::string ct = pt + (cmax > 0.0 ? "[cmax=" + fmt_param(cmax) + "]" : "");
                BoundTable bounds = make_bounds(net, sc.weights, cmax);
                Matrix pr = matrix_rsa(net, sc.weights, bounds, beta, drop, sc.state_cap);
                PeskunResult br = peskun_check(pr, pb);
                add("peskun_bsa_dominates_rsa" + ct, br.ordered, br.max_violation);
                PeskunResult rl = peskun_check(pl, pr);
                add("peskun_rsa_dominates_lsa" + ct, rl.ordered, rl.max_violation);

                Vector pi_r = stationary(pr);
                add("rsa_bias_tv" + ct, true, tv_distance(pi_r, pi), true);
                Eigen::Index argmax = 0;
                pi_r.maxCoeff(&argmax);
                bool opt = std::find(optima.begin(), optima.end(),
                                     static_cast<size_t>(argmax)) != optima.end();
                // Bias can move the mode at high temperature; the argmax claim
                // is a low-temperature property.
                add("rsa_argmax_optimal" + ct, opt, static_cast<double>(argmax), beta < 1.0);

                if (!sc.h_state.empty()) {
                    StateSpace space(net.n(), net.num_levels(), sc.state_cap);
                    Vector h = Vector::Zero(static_cast<Eigen::Index>(space.size));
                    h(static_cast<Eigen::Index>(space.index(sc.h_state))) = 1.0;
                    double sb = exact_avr(pb, pi, h);
                    double sl = exact_avr(pl, pi, h);
                    double sr = exact_avr(pr, pi_r, h);
                    add("avr_lsa_ge_bsa" + ct, sl >= sb - 1e-12, sl - sb);
                    add("avr_lsa_ge_rsa_ge_bsa" + ct,
                        sl >= sr - 1e-12 && sr >= sb - 1e-12, sr);
                }
            }
        }
    }
    return report;
}

std::vector<ResultRow> sweep_scenario(const Scenario& sc, const std::string& axis,
                                      const std::vector<double>& values, int threads) {
    Scenario swept = sc;
    if (axis == "p")
        swept.drop_ps = values;
    else if (axis == "arrival")
        swept.arrivals = values;
    else if (axis == "beta")
        swept.betas = values;
    else if (axis == "cmax")
        swept.cmaxes = values;
    else if (axis == "d") {
        if (values.size() != 1)
            throw std::invalid_argument("axis d supports a single value per sweep");
        swept.schedule = CoolingSchedule::inverse_log(values.front());
    } else {
        throw std::invalid_argument("unknown sweep axis: " + axis);
    }
    return run_scenario(swept, threads);
}

const std::map<std::string, std::string>& bundled_scenarios() {
    static const std::map<std::string, std::string> scenarios = {
        {"fig2", R"({
  "name": "fig2",
  "model": {"type": "conflict", "n": 4, "edges": [[0,2],[1,2],[2,3]]},
  "weights": [5, 7, 10, 3],
  "algorithms": ["bsa", "lsa", "rsa"],
  "beta": [0.1, 1.0],
  "drop_p": [0.5],
  "horizon": 1000000,
  "seeds": [1],
  "metrics": ["occupancy"]
})"},
        {"fig3", R"({
  "name": "fig3",
  "model": {"type": "conflict", "n": 4, "edges": [[0,2],[1,2],[2,3]]},
  "weights": [5, 7, 10, 3],
  "algorithms": ["bsa", "lsa", "rsa"],
  "beta": [0.5],
  "drop_p": [0.1, 0.5],
  "horizon": 1000000,
  "seeds": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
  "metrics": ["variance_rate"],
  "h_state": [0, 0, 1, 0],
  "batch_sizes": [10, 100, 1000, 10000]
})"},
        {"fig4", R"({
  "name": "fig4",
  "model": {"type": "conflict", "n": 4, "edges": [[0,2],[1,2],[2,3]]},
  "algorithms": ["bsa", "lsa", "rsa"],
  "beta": [1.0],
  "drop_p": [0.1, 0.5],
  "arrival": [0.2],
  "horizon": 200000,
  "seeds": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
  "metrics": ["avg_queue"]
})"},
        {"fig6", R"({
  "name": "fig6",
  "model": {"type": "sinr_random", "seed": 7, "n": 10, "region": 500.0, "pathloss": 4.0,
            "max_link_len": 100.0, "noise_mw": 1e-12, "levels_mw": [0, 5, 10],
            "rate_thresholds_db": [10, 20, 30], "rates": [0, 1, 2, 3],
            "neighbor_radius": 250.0},
  "algorithms": ["bsa", "lsa", "rsa"],
  "beta": [1.0],
  "drop_p": [0.1, 0.3],
  "arrival": [0.2],
  "horizon": 100000,
  "seeds": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
  "metrics": ["avg_queue"]
})"},
        {"fig7", R"({
  "name": "fig7",
  "model": {"type": "sinr_random", "seed": 7, "n": 10, "region": 500.0, "pathloss": 4.0,
            "max_link_len": 100.0, "noise_mw": 1e-12, "levels_mw": [0, 5, 10],
            "rate_thresholds_db": [10, 20, 30], "rates": [0, 1, 2, 3],
            "neighbor_radius": 250.0},
  "algorithms": ["lsa", "rsa"],
  "beta": [1.0],
  "drop_p": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4],
  "cmax": [3, 4, 5, 6, 7, 8, 9, 10],
  "arrival": [0.2, 0.4],
  "horizon": 50000,
  "seeds": [1, 2, 3, 4, 5],
  "metrics": ["avg_queue"]
})"},
        {"anneal", R"({
  "name": "anneal",
  "model": {"type": "conflict", "n": 4, "edges": [[0,2],[1,2],[2,3]]},
  "weights": [5, 7, 10, 3],
  "algorithms": ["bsa", "lsa", "rsa"],
  "schedule": {"type": "inverse_log", "d": 10.0, "t0": 1.0},
  "drop_p": [0.5],
  "horizon": 1000000,
  "seeds": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
  "metrics": ["anneal_occupancy"]
})"},
    };
    return scenarios;
}

}  // namespace dropsa
