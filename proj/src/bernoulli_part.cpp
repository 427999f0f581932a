#include "llt/bernoulli_part.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "llt/errors.hpp"

namespace llt {

double BernoulliPartDecomposition::margin_v(long long k) const {
    long long i = k - k_min();
    if (i < 0 || i >= static_cast<long long>(tau.size())) return 0.0;
    return joint_eps1[static_cast<std::size_t>(i)] + joint_eps0[static_cast<std::size_t>(i)];
}

std::vector<double> BernoulliPartDecomposition::cumulative() const {
    std::vector<double> cum;
    cum.reserve(2 * tau.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        acc += joint_eps0[i];
        cum.push_back(acc);
        acc += joint_eps1[i];
        cum.push_back(acc);
    }
    return cum;
}

BernoulliPartDecomposition decompose(const LatticeDistribution& dist, double theta) {
    double theta_x = theta_characteristic(dist);
    if (theta_x <= 0.0) throw DegenerateTheta("decompose: theta_X = 0");
    if (!(theta > 0.0) || theta > theta_x * (1.0 + 1e-12))
        throw ThetaOutOfRange("decompose: need 0 < theta <= theta_X");

    const auto& f = dist.mass();
    std::size_t n = f.size();
    BernoulliPartDecomposition dec{dist, theta, std::vector<double>(n, 0.0),
                                   std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t k = 0; k + 1 < n; ++k)
        dec.tau[k] = theta * std::min(f[k], f[k + 1]) / theta_x;
    for (std::size_t k = 0; k < n; ++k) {
        double tau_prev = (k == 0) ? 0.0 : dec.tau[k - 1];
        dec.joint_eps1[k] = dec.tau[k];
        double p0 = f[k] - 0.5 * (tau_prev + dec.tau[k]);
        // tau_{k-1}+tau_k <= 2 f(k) holds analytically; clamp rounding dust.
        dec.joint_eps0[k] = std::max(p0, 0.0);
    }
    return dec;
}

LatticeDistribution reconstruct_law(const BernoulliPartDecomposition& dec) {
    std::size_t n = dec.tau.size();
    // Z = V + eps*D*L lives on offsets [k_min, k_max + 1]; the top entry is
    // zero because tau vanishes at the boundary.
    std::vector<double> mass(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        mass[k] += dec.joint_eps0[k] + 0.5 * dec.joint_eps1[k];
        mass[k + 1] += 0.5 * dec.joint_eps1[k];
    }
    return LatticeDistribution(dec.source.spec(), dec.source.k_min(), std::move(mass),
                               dec.source.lost_mass());
}

namespace {

struct StepSampler {
    long long k_min;
    std::vector<double> cum;  // cumulative over (k,0),(k,1) pairs

    // Returns (v offset, eps).
    std::pair<long long, int> draw(double u) const {
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        std::size_t pos = (it == cum.end()) ? cum.size() - 1
                                            : static_cast<std::size_t>(it - cum.begin());
        return {k_min + static_cast<long long>(pos / 2), static_cast<int>(pos % 2)};
    }
};

StepSampler make_step_sampler(const DistributionModel& model, long n) {
    LatticeDistribution x = model.marginal(n);
    BernoulliPartDecomposition dec = decompose(x, model.theta(n));
    return {dec.k_min(), dec.cumulative()};
}

}  // namespace

PathRealization sample_path(const DistributionModel& model, const KappaSequence& kappa, long N,
                            std::uint64_t seed) {
    PathRealization path;
    path.seed = seed;
    path.start = model.start_index;
    path.N = N;
    path.v0 = model.spec.v0;
    path.D = model.spec.D;
    if (N < model.start_index) return path;  // empty path

    std::size_t len = static_cast<std::size_t>(N - model.start_index + 1);
    path.s_off.resize(len);
    path.w_off.resize(len);
    path.B.resize(len);
    path.M.resize(len);
    path.hits.resize(len);

    CounterRng rng(seed);
    StepSampler iid_sampler;
    if (model.iid) iid_sampler = make_step_sampler(model, model.start_index);

    long long sw = 0, ss = 0, b = 0, mm = 0;
    for (long n = model.start_index; n <= N; ++n) {
        const StepSampler sampler = model.iid ? iid_sampler : make_step_sampler(model, n);
        double u = rng.next_double();
        int l = rng.next_bit();
        auto [v_off, eps] = sampler.draw(u);
        sw += v_off;
        b += eps;
        mm += static_cast<long long>(eps) * l;
        ss = sw + mm;  // X = V + eps*D*L in offset coordinates
        std::size_t i = path.idx(n);
        path.s_off[i] = ss;
        path.w_off[i] = sw;
        path.B[i] = b;
        path.M[i] = mm;
        path.hits[i] = (ss == kappa.offset_at(n)) ? 1 : 0;
    }
    return path;
}

ChernoffBounds chernoff_bounds(double epsilon, double mu) {
    if (!(epsilon > 0.0) || !(mu > 0.0))
        throw InvalidArgument("chernoff_bounds needs epsilon > 0 and mu > 0");
    double e2m = epsilon * epsilon * mu;
    return {std::exp(-e2m / (2.0 * (1.0 + epsilon / 3.0))), std::exp(-e2m / 2.0)};
}

std::string path_to_csv(const PathRealization& path) {
    std::ostringstream os;
    os << "n,S_n,W_n,B_n,M_n,hit\n";
    char buf[64];
    for (long n = path.start; n <= path.N; ++n) {
        std::size_t i = path.idx(n);
        std::snprintf(buf, sizeof buf, "%.17g", path.S(n));
        os << n << ',' << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", path.W(n));
        os << buf << ',' << path.B[i] << ',' << path.M[i] << ','
           << static_cast<int>(path.hits[i]) << '\n';
    }
    return os.str();
}

}  // namespace llt
