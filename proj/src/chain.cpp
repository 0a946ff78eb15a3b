#include "dropsa/chain.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace dropsa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Proposal probability for single-coordinate neighbors.
double proposal_prob(const Network& net) {
    return 1.0 / (static_cast<double>(net.n()) * static_cast<double>(net.num_levels() - 1));
}

template <typename OffDiagonal>
Matrix build_matrix(const Network& net, const WeightVector& weights, size_t cap,
                    OffDiagonal&& off_diagonal) {
    StateSpace space(net.n(), net.num_levels(), cap);
    const auto N = static_cast<Eigen::Index>(space.size);
    Matrix P = Matrix::Zero(N, N);
    for (size_t s = 0; s < space.size; ++s) {
        Configuration x = space.config(s);
        double row_sum = 0.0;
        for (int i = 0; i < net.n(); ++i) {
            for (int to = 0; to < net.num_levels(); ++to) {
                if (to == x[static_cast<size_t>(i)]) continue;
                Configuration x_new = x;
                x_new[static_cast<size_t>(i)] = to;
                size_t s_new = space.index(x_new);
                Differentials d = differentials(net, weights, x, x_new);
                double p = off_diagonal(d);
                P(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s_new)) = p;
                row_sum += p;
            }
        }
        P(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = 1.0 - row_sum;
    }
    return P;
}

}  // namespace

Vector gibbs(const Network& net, const WeightVector& weights, double beta, size_t cap) {
    StateSpace space(net.n(), net.num_levels(), cap);
    Vector logw(static_cast<Eigen::Index>(space.size));
    for (size_t s = 0; s < space.size; ++s)
        logw(static_cast<Eigen::Index>(s)) = beta * total_objective(net, weights, space.config(s));
    double shift = logw.maxCoeff();
    Vector pi = (logw.array() - shift).exp();
    pi /= pi.sum();
    return pi;
}

Matrix matrix_bsa(const Network& net, const WeightVector& weights, double beta, size_t cap) {
    if (net.kind() == Network::Kind::Sinr && net.mode() != InterferenceMode::Truncated)
        throw std::invalid_argument("exact analysis requires truncated interference mode");
    double c = proposal_prob(net);
    return build_matrix(net, weights, cap, [&](const Differentials& d) {
        return c * acceptance_probability(aggregate(d), beta);
    });
}

Matrix matrix_lsa(const Network& net, const WeightVector& weights, double beta,
                  const DropModel& drop, size_t cap) {
    if (net.kind() == Network::Kind::Sinr && net.mode() != InterferenceMode::Truncated)
        throw std::invalid_argument("exact analysis requires truncated interference mode");
    validate_drop(drop, net.neighbors());
    double c = proposal_prob(net);
    return build_matrix(net, weights, cap, [&](const Differentials& d) {
        double q_full =
            full_subset_probability(drop, d.proposer, static_cast<int>(d.neighbors.size()));
        return c * q_full * acceptance_probability(aggregate(d), beta);
    });
}

Matrix matrix_rsa(const Network& net, const WeightVector& weights, const BoundTable& bounds,
                  double beta, const DropModel& drop, size_t cap) {
    if (net.kind() == Network::Kind::Sinr && net.mode() != InterferenceMode::Truncated)
        throw std::invalid_argument("exact analysis requires truncated interference mode");
    validate_drop(drop, net.neighbors());
    double c = proposal_prob(net);
    return build_matrix(net, weights, cap, [&](const Differentials& d) {
        int degree = static_cast<int>(d.neighbors.size());
        if (degree > 20) throw std::invalid_argument("subset enumeration cap |N_i| <= 20 exceeded");
        double sum = 0.0;
        for (uint64_t mask = 0; mask < (uint64_t{1} << degree); ++mask) {
            double q = subset_probability(drop, d.proposer, mask, degree);
            if (q == 0.0) continue;
            sum += q * acceptance_probability(bounded_aggregate(d, mask, bounds), beta);
        }
        return c * sum;
    });
}

bool is_irreducible(const Matrix& P) {
    const Eigen::Index N = P.rows();
    auto reach = [&](bool forward) {
        std::vector<char> seen(static_cast<size_t>(N), 0);
        std::deque<Eigen::Index> queue{0};
        seen[0] = 1;
        while (!queue.empty()) {
            Eigen::Index u = queue.front();
            queue.pop_front();
            for (Eigen::Index v = 0; v < N; ++v) {
                if (seen[static_cast<size_t>(v)]) continue;
                double p = forward ? P(u, v) : P(v, u);
                if (u != v && p > 0.0) {
                    seen[static_cast<size_t>(v)] = 1;
                    queue.push_back(v);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reach(true) && reach(false);
}

Vector stationary(const Matrix& P) {
    if (!is_irreducible(P)) throw std::invalid_argument("chain is reducible");
    const Eigen::Index N = P.rows();
    Matrix A = P.transpose() - Matrix::Identity(N, N);
    A.row(N - 1).setOnes();
    Vector b = Vector::Zero(N);
    b(N - 1) = 1.0;
    Vector pi = A.fullPivLu().solve(b);
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    return pi;
}

PeskunResult peskun_check(const Matrix& P_low, const Matrix& P_high) {
    if (P_low.rows() != P_high.rows() || P_low.cols() != P_high.cols())
        throw std::invalid_argument("matrix dimensions differ");
    PeskunResult result;
    result.ordered = true;
    for (Eigen::Index r = 0; r < P_low.rows(); ++r) {
        for (Eigen::Index c = 0; c < P_low.cols(); ++c) {
            if (r == c) continue;
            double violation = P_low(r, c) - P_high(r, c);
            if (violation > result.max_violation) {
                result.max_violation = violation;
                result.row = static_cast<int>(r);
                result.col = static_cast<int>(c);
            }
        }
    }
    result.ordered = result.max_violation <= 1e-12;
    return result;
}

namespace {

// Period of an irreducible chain via gcd of closed-walk length differences.
int chain_period(const Matrix& P) {
    const Eigen::Index N = P.rows();
    std::vector<int64_t> depth(static_cast<size_t>(N), -1);
    std::deque<Eigen::Index> queue{0};
    depth[0] = 0;
    while (!queue.empty()) {
        Eigen::Index u = queue.front();
        queue.pop_front();
        for (Eigen::Index v = 0; v < N; ++v) {
            if (P(u, v) <= 0.0) continue;
            if (depth[static_cast<size_t>(v)] < 0) {
                depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    int64_t g = 0;
    for (Eigen::Index u = 0; u < N; ++u) {
        for (Eigen::Index v = 0; v < N; ++v) {
            if (P(u, v) <= 0.0) continue;
            g = std::gcd(g, std::abs(depth[static_cast<size_t>(u)] + 1 -
                                     depth[static_cast<size_t>(v)]));
        }
    }
    return static_cast<int>(g == 0 ? 1 : g);
}

}  // namespace

double exact_avr(const Matrix& P, const Vector& pi, const Vector& h) {
    if (!is_irreducible(P)) throw std::invalid_argument("chain is reducible");
    if (chain_period(P) != 1) throw std::invalid_argument("chain is periodic");
    const Eigen::Index N = P.rows();
    double mean = pi.dot(h);
    Vector centered = h.array() - mean;
    // fundamental-matrix solve: (I - P + 1 pi^T) g = centered
    Matrix A = Matrix::Identity(N, N) - P + Vector::Ones(N) * pi.transpose();
    Vector g = A.partialPivLu().solve(centered);
    double var = (pi.array() * centered.array().square()).sum();
    double sigma = 2.0 * (pi.array() * centered.array() * g.array()).sum() - var;
    return std::max(sigma, 0.0);
}

std::vector<std::pair<int64_t, double>> empirical_avr(const std::vector<double>& h_trace,
                                                      const std::vector<int64_t>& batch_sizes) {
    std::vector<std::pair<int64_t, double>> curve;
    for (int64_t b : batch_sizes) {
        if (b < 1) throw std::invalid_argument("batch size must be positive");
        int64_t m = static_cast<int64_t>(h_trace.size()) / b;
        if (m < 30) throw std::invalid_argument("insufficient data: need >= 30 batches");
        std::vector<double> means(static_cast<size_t>(m));
        for (int64_t k = 0; k < m; ++k) {
            double sum = 0.0;
            for (int64_t t = k * b; t < (k + 1) * b; ++t)
                sum += h_trace[static_cast<size_t>(t)];
            means[static_cast<size_t>(k)] = sum / static_cast<double>(b);
        }
        double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(m);
        double var = 0.0;
        for (double v : means) var += (v - grand) * (v - grand);
        var /= static_cast<double>(m - 1);
        curve.emplace_back(b, static_cast<double>(b) * var);
    }
    return curve;
}

ExponentReport exponent_check(const Network& net, const WeightVector& weights,
                              const BoundTable& bounds, size_t cap, int max_degree) {
    StateSpace space(net.n(), net.num_levels(), cap);
    ExponentReport report;
    for (size_t s = 0; s < space.size; ++s) {
        Configuration x = space.config(s);
        for (int i = 0; i < net.n(); ++i) {
            int degree = net.neighbors().degree(i);
            if (degree > max_degree)
                throw std::invalid_argument("subset enumeration cap exceeded");
            for (int to = 0; to < net.num_levels(); ++to) {
                if (to == x[static_cast<size_t>(i)]) continue;
                Configuration x_new = x;
                x_new[static_cast<size_t>(i)] = to;
                Differentials d = differentials(net, weights, x, x_new);
                double delta = aggregate(d);
                ++report.transitions_checked;
                uint64_t full_mask = (uint64_t{1} << degree) - 1;
                for (uint64_t mask = 0; mask <= full_mask; ++mask) {
                    double bounded = bounded_aggregate(d, mask, bounds);
                    ++report.subsets_checked;
                    bool bad = false;
                    if (bounded > delta + 1e-9) {
                        ++report.violations;
                        bad = true;
                    }
                    if (mask == full_mask && std::abs(bounded - delta) > 1e-9) {
                        ++report.equality_failures;
                        bad = true;
                    }
                    if (bad && report.witnesses.size() < 10) {
                        report.witnesses.push_back(
                            {s, i, to, mask, delta, bounded});
                    }
                }
            }
        }
    }
    return report;
}

double tv_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("distribution dimensions differ");
    return 0.5 * (a - b).cwiseAbs().sum();
}

}  // namespace dropsa
