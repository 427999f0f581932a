#pragma once

#include <functional>
#include <string>
#include <vector>

#include "llt/lattice.hpp"
#include "llt/models.hpp"

namespace llt {

// Everything the pair-correlation ops need about one model+level setup.
// hit_prob[n-start] = P{S_n = kappa_n}, exact.
struct CorrelationContext {
    const DistributionModel* model = nullptr;
    const ScalarChain* chain = nullptr;
    const KappaSequence* kappa = nullptr;
    const std::vector<double>* hit_prob = nullptr;

    long start() const { return chain->start; }
    long N() const { return chain->N; }
    double prob(long n) const { return (*hit_prob)[static_cast<std::size_t>(n - start())]; }
};

CorrelationContext make_context(const DistributionModel& model, const ScalarChain& chain,
                                const KappaSequence& kappa, const std::vector<double>& probs);

// Exact law of the segment X_{m+1} + ... + X_n.
LatticeDistribution segment_law(const DistributionModel& model, long m, long n);

// E Y_n Y_m = sigma_m P{S_m=k_m} * sigma_n (P{segment = k_n - k_m} - P{S_n=k_n}).
double correlation_Y(const CorrelationContext& ctx, long m, long n);

// E Y_n^2 = sigma_n^2 P (1 - P).
double variance_Y(const CorrelationContext& ctx, long n);

// P{S_m = kappa_m, S_n = kappa_n} by exhaustive enumeration over outcome
// tuples; the independent oracle. Throws TooLarge when the product of support
// sizes exceeds 1e7.
double brute_force_joint(const DistributionModel& model, const KappaSequence& kappa, long m,
                         long n);

struct CorrelationReport {
    long m = 0, n = 0;
    double nu_m = 0.0, nu_n = 0.0;
    double lhs = 0.0;        // |E Y_n Y_m|
    double rhs_shape = 0.0;  // bound's structural right side, unit constant
    double ratio = 0.0;
    std::string variant;
};

// Hypothesis caps for (kappa_j - a_j)/sigma_j and sigma_j P{S_j = kappa_j}.
struct HypothesisCaps {
    double standardized = 10.0;
    double scaled_prob = 10.0;
};

// variant: "main" (full bound), "tau" (uniform-theta form),
// "ratio-c" (well-separated form), "simple" (sigma-only form).
CorrelationReport verify_bound(const CorrelationContext& ctx, long m, long n,
                               const std::string& variant, const HypothesisCaps& caps = {});

// Geometric-n sweep crossed with m in {n/8, n/4, n/2, n-1}.
std::vector<CorrelationReport> bound_sweep(const CorrelationContext& ctx, long n_max,
                                           const std::string& variant,
                                           const HypothesisCaps& caps = {});

struct QuadraticFormCheck {
    double lhs;
    double rhs;
};

// lhs = |sum_{i<j} x_i x_j alpha_{ij}|,
// rhs = (1/2) sum_i |x_i|^2 (sum_{l>i} |alpha_{il}| + sum_{l<i} |alpha_{li}|).
QuadraticFormCheck quadratic_form_check(const std::vector<double>& x,
                                        const std::vector<std::vector<double>>& alpha);

// Symmetrized variant: lhs = |sum_{i != j} x_i x_j alpha_{ij}|,
// rhs = sum_i |x_i|^2 sum_{l != i} |alpha_{il}|; requires symmetric alpha.
QuadraticFormCheck quadratic_form_check_symmetric(const std::vector<double>& x,
                                                  const std::vector<std::vector<double>>& alpha);

// Weighted pair sums for block Gram matrices. block_of[n-start] gives the
// block slot of n (or -1 to exclude); gram[i*nblocks+j] accumulates
// coef_m coef_n E Y_m Y_n over ordered pairs (m in slot i) x (n in slot j),
// diagonal m = n included via variance_Y. Deterministic for any job count.
std::vector<double> block_gram(const CorrelationContext& ctx, const std::vector<int>& block_of,
                               int nblocks, const std::vector<double>& coef, int jobs = 1);

}  // namespace llt
