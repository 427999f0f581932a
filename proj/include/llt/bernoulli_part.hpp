#pragma once

#include <cstdint>
#include <vector>

#include "llt/lattice.hpp"
#include "llt/models.hpp"
#include "llt/rng.hpp"

namespace llt {

// The coupling X = V + eps*D*L: tau_k picks the adjacent-atom overlap used
// as the Bernoulli part, the joint table is the law of (V, eps), and L is a
// fair bit independent of the pair.
struct BernoulliPartDecomposition {
    LatticeDistribution source;
    double theta = 0.0;
    // Indexed by source offset k - k_min. tau[last] is always 0.
    std::vector<double> tau;
    std::vector<double> joint_eps1;  // P{(V,eps) = (v_k, 1)} = tau_k
    std::vector<double> joint_eps0;  // P{(V,eps) = (v_k, 0)}

    long long k_min() const { return source.k_min(); }
    // Margin P{V = v_k}.
    double margin_v(long long k) const;
    // Cumulative table over (k,0),(k,1) pairs in offset order, for sampling.
    std::vector<double> cumulative() const;
};

// tau_k = theta * (f(k) ^ f(k+1)) / theta_X, joint per the coupling law.
BernoulliPartDecomposition decompose(const LatticeDistribution& dist, double theta);

// Law of V + eps*D*L; equals the source law exactly.
LatticeDistribution reconstruct_law(const BernoulliPartDecomposition& dec);

// One sampled trajectory with its Bernoulli-part bookkeeping. Offsets are
// exact integers; S, W are the corresponding lattice values.
struct PathRealization {
    std::uint64_t seed = 0;
    long start = 1;
    long N = 0;
    double v0 = 0.0;
    double D = 1.0;
    std::vector<long long> s_off, w_off;  // S_n = n*v0 + D*s_off, same for W
    std::vector<long long> B, M;
    std::vector<std::uint8_t> hits;

    std::size_t idx(long n) const { return static_cast<std::size_t>(n - start); }
    double S(long n) const { return static_cast<double>(n) * v0 + D * static_cast<double>(s_off[idx(n)]); }
    double W(long n) const { return static_cast<double>(n) * v0 + D * static_cast<double>(w_off[idx(n)]); }
};

// Samples (V_j, eps_j, L_j) per step and accumulates S, W, B, M and the hit
// indicators 1{S_n = kappa_n}. Two RNG draws per step, always consumed, so
// the stream position is a pure function of the step count.
PathRealization sample_path(const DistributionModel& model, const KappaSequence& kappa, long N,
                            std::uint64_t seed);

struct ChernoffBounds {
    double upper;  // P{S_n >= (1+eps) mu} bound
    double lower;  // P{S_n <= (1-eps) mu} bound
};

// (exp(-eps^2 mu / (2(1+eps/3))), exp(-eps^2 mu / 2)).
ChernoffBounds chernoff_bounds(double epsilon, double mu);

// Paths export to CSV: columns n,S_n,W_n,B_n,M_n,hit.
std::string path_to_csv(const PathRealization& path);

}  // namespace llt
