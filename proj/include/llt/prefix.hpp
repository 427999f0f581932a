#pragma once

#include <functional>
#include <vector>

#include "llt/lattice.hpp"
#include "llt/models.hpp"

namespace llt {

// One prefix S_n = X_start + ... + X_n with its exact law and the scalars
// accumulated from per-step moments (the law only cross-checks them).
struct PrefixState {
    long n = 0;
    LatticeDistribution dist;
    double a = 0.0;    // E S_n
    double var = 0.0;  // Var S_n
    double nu = 0.0;   // sum of theta_j, j <= n

    double sigma() const;
    // Throws if the scalar/vector cross-checks or the liaison inequality fail.
    void validate() const;
};

// Materialized chain S_start..S_N by incremental convolution. Memory grows
// with the summed support sizes; callers keeping long chains should use
// walk_prefix instead.
std::vector<PrefixState> prefix_chain(const DistributionModel& model, long N);

// Streaming variant: visits each prefix state once, keeping only the rolling
// law. Stops early if the visitor returns false.
void walk_prefix(const DistributionModel& model, long N,
                 const std::function<bool(const PrefixState&)>& visit);

// P{S_n = kappa_n} for n = start..N via one rolling walk.
std::vector<double> hit_probabilities(const DistributionModel& model, const KappaSequence& kappa,
                                      long N);

// The sup/sum windows below extend this many lattice steps past the support;
// the gaussian tail out there is below 1e-20 for every tested range. Reports
// quoting discrepancy values carry this constant.
inline constexpr int kDiscrepancyWindowSteps = 10;

// sup over lattice points (support +/- window) of
// |sigma_n P{S_n=N} - (D/sqrt(2 pi)) exp(-(N-a_n)^2 / (2 sigma_n^2))|.
double llt_discrepancy(const PrefixState& state);

// Signed Poisson-summation defect: sum over the same window of
// P{S_n=N} - (D/(sqrt(2 pi) sigma_n)) exp(-(N-a_n)^2/(2 sigma_n^2)).
double gaussian_defect(const PrefixState& state);

// sup_k |P{B_n=k} - sqrt(2/(pi n)) exp(-(2k-n)^2/(2n))| for the fair-coin sum
// B_n, from the exact binomial law in log space.
double bernoulli_llt_error(long n);

// Exact log P{Binomial(n,1/2) = k}; shared with the test oracles.
double log_binomial_half_pmf(long n, long long k);

// Partial Rozanov sum: sum_{k<=K} min_{0<=m<q} P{X_k != m (mod q)}, residues
// taken over lattice offsets.
double rozanov_partial(const DistributionModel& model, int q, long K);

}  // namespace llt
