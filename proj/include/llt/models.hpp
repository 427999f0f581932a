#pragma once

#include <functional>
#include <string>
#include <vector>

#include "llt/lattice.hpp"

namespace llt {

// Independent sequence X_start, X_start+1, ... given by full marginal laws.
// marginal(n) and theta(n) are pure functions of n; theta(n) is the chosen
// Bernoulli-part parameter, 0 < theta(n) <= theta_characteristic(marginal(n)).
struct DistributionModel {
    LatticeSpec spec;
    long start_index = 1;
    bool iid = false;
    std::string name;
    std::function<LatticeDistribution(long)> marginal;
    std::function<double(long)> theta;
};

// Parameter-only stream (theta_n, var_n) with a declared span but no concrete
// law; feeds the weight/series machinery, not the samplers.
struct ParameterModel {
    double D = 1.0;
    long start_index = 1;
    std::string name;
    std::function<double(long)> theta;
    std::function<double(long)> var;
};

// Cumulative scalars of a prefix chain: nu_n, a_n, var_n, sigma_n for
// n = start..N, accumulated exactly from per-step moments.
struct ScalarChain {
    long start = 1;
    long N = 0;
    double D = 1.0;
    double v0 = 0.0;
    bool has_law = true;  // false for ParameterModel (a_n meaningless)
    std::vector<double> nu, a, var, sigma;
    std::vector<double> theta;      // per-step theta_n
    std::vector<double> log_theta;  // cumulative sum of log theta_j (for products)

    std::size_t idx(long n) const { return static_cast<std::size_t>(n - start); }
    double nu_at(long n) const { return nu[idx(n)]; }
    double a_at(long n) const { return a[idx(n)]; }
    double var_at(long n) const { return var[idx(n)]; }
    double sigma_at(long n) const { return sigma[idx(n)]; }
    double theta_at(long n) const { return theta[idx(n)]; }
    // prod_{j=m+1}^{n} theta_j, evaluated in log space.
    double theta_product(long m, long n) const;
    // Deviation of the segment X_{m+1}+...+X_n.
    double segment_sigma(long m, long n) const;
};

ScalarChain build_scalar_chain(const DistributionModel& model, long N);
ScalarChain build_scalar_chain(const ParameterModel& model, long N);

// The level sequence kappa_n: nearest lattice point of L(n*v0, D) to
// a_n + kappa*sigma_n, ties toward +inf. Stored as integer lattice offsets.
struct KappaSequence {
    double target_kappa = 0.0;
    long start = 1;
    double v0 = 0.0;
    double D = 1.0;
    std::vector<long long> offset;  // kappa_n = n*v0 + D*offset[n-start]

    long long offset_at(long n) const { return offset[static_cast<std::size_t>(n - start)]; }
    double value_at(long n) const {
        return static_cast<double>(n) * v0 + D * static_cast<double>(offset_at(n));
    }
};

KappaSequence kappa_sequence(const ScalarChain& chain, double kappa);

// Catalog.
DistributionModel iid_model(const LatticeDistribution& dist, double theta_scale = 1.0);
DistributionModel block_uniform_model(std::function<long long(long)> n_j,
                                      std::function<int(long)> b_j, double theta_scale = 1.0);
DistributionModel cramer_model(double theta_scale = 1.0);
ParameterModel log_variance_parameter_model();

// Model identifier strings for configs: "iid:<dist-file>",
// "block-uniform:b=<int>" / "block-uniform:b=j", "log-variance", "cramer".
struct ParsedModel {
    bool is_parameter = false;
    DistributionModel dist_model;
    ParameterModel param_model;
};
ParsedModel parse_model(const std::string& id, double theta_scale = 1.0);

}  // namespace llt
