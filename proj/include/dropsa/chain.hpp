#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dropsa/sim.hpp"

namespace dropsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// pi(x) proportional to exp(beta * f(x)), normalized with a max-shift.
Vector gibbs(const Network& net, const WeightVector& weights, double beta,
             size_t cap = size_t{1} << 20);

Matrix matrix_bsa(const Network& net, const WeightVector& weights, double beta,
                  size_t cap = size_t{1} << 20);
Matrix matrix_lsa(const Network& net, const WeightVector& weights, double beta,
                  const DropModel& drop, size_t cap = size_t{1} << 20);
Matrix matrix_rsa(const Network& net, const WeightVector& weights, const BoundTable& bounds,
                  double beta, const DropModel& drop, size_t cap = size_t{1} << 20);

bool is_irreducible(const Matrix& P);

/// Unique solution of pi P = pi; throws on reducible chains.
Vector stationary(const Matrix& P);

struct PeskunResult {
    bool ordered = false;
    double max_violation = 0.0;
    int row = -1;
    int col = -1;
};

/// True iff P_low <= P_high elementwise off the diagonal (within 1e-12).
PeskunResult peskun_check(const Matrix& P_low, const Matrix& P_high);

/// Asymptotic variance rate of the ergodic average of h, via the fundamental
/// matrix of the chain.
double exact_avr(const Matrix& P, const Vector& pi, const Vector& h);

/// Batch-means variance-rate estimates: for each batch size b, b * Var(batch
/// means of h). Needs at least 30 batches at the largest size.
std::vector<std::pair<int64_t, double>> empirical_avr(const std::vector<double>& h_trace,
                                                      const std::vector<int64_t>& batch_sizes);

struct ExponentWitness {
    size_t state = 0;
    int proposer = -1;
    int to_level = 0;
    uint64_t subset = 0;
    double delta = 0.0;
    double delta_bounded = 0.0;
};

struct ExponentReport {
    size_t transitions_checked = 0;
    size_t subsets_checked = 0;
    size_t violations = 0;          // Delta_[S] > Delta
    size_t equality_failures = 0;   // Delta_[N_i] != Delta
    std::vector<ExponentWitness> witnesses;
    bool ok() const { return violations == 0 && equality_failures == 0; }
};

/// Exhaustive check of the subset inequality Delta_[S] <= Delta over every
/// single-coordinate transition and every S, with equality at S = N_i.
ExponentReport exponent_check(const Network& net, const WeightVector& weights,
                              const BoundTable& bounds, size_t cap = size_t{1} << 20,
                              int max_degree = 20);

double tv_distance(const Vector& a, const Vector& b);

}  // namespace dropsa
