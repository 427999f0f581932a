#include "llt/prefix.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "llt/errors.hpp"

namespace llt {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)
constexpr int kWindowSteps = kDiscrepancyWindowSteps;

struct RollingChain {
    LatticeDistribution dist;
    double a = 0.0, var = 0.0, nu = 0.0;
};

void advance(RollingChain& rc, const DistributionModel& model, long n, bool first) {
    LatticeDistribution x = model.marginal(n);
    Moments mo = moments(x);
    if (first)
        rc.dist = x;
    else
        rc.dist = convolve(rc.dist, x);
    rc.a += mo.mean;
    rc.var += mo.variance;
    rc.nu += model.theta(n);
}

}  // namespace

double PrefixState::sigma() const { return std::sqrt(var); }

void PrefixState::validate() const {
    Moments mo = moments(dist);
    double scale_a = std::max(1.0, std::abs(a));
    if (std::abs(mo.mean - a) > 1e-9 * scale_a)
        throw InvalidArgument("prefix mean drift at n=" + std::to_string(n));
    double scale_v = std::max(1.0, var);
    if (std::abs(mo.variance - var) > 1e-9 * scale_v)
        throw InvalidArgument("prefix variance drift at n=" + std::to_string(n));
    double D = dist.spec().D;
    if (var < (D * D / 4.0) * nu)
        throw InvalidArgument("liaison inequality violated at n=" + std::to_string(n));
}

std::vector<PrefixState> prefix_chain(const DistributionModel& model, long N) {
    std::vector<PrefixState> out;
    out.reserve(static_cast<std::size_t>(N - model.start_index + 1));
    walk_prefix(model, N, [&](const PrefixState& st) {
        out.push_back(st);
        return true;
    });
    return out;
}

void walk_prefix(const DistributionModel& model, long N,
                 const std::function<bool(const PrefixState&)>& visit) {
    if (N < model.start_index) throw InvalidArgument("walk_prefix: N below start_index");
    RollingChain rc{make_point_mass(0.0, model.spec.D)};
    for (long n = model.start_index; n <= N; ++n) {
        advance(rc, model, n, n == model.start_index);
        PrefixState st{n, rc.dist, rc.a, rc.var, rc.nu};
        if (!visit(st)) return;
    }
}

std::vector<double> hit_probabilities(const DistributionModel& model, const KappaSequence& kappa,
                                      long N) {
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(N - model.start_index + 1));
    walk_prefix(model, N, [&](const PrefixState& st) {
        probs.push_back(st.dist.pmf(kappa.offset_at(st.n)));
        return true;
    });
    return probs;
}

double llt_discrepancy(const PrefixState& state) {
    if (!(state.var > 0.0)) throw DegenerateVariance("llt_discrepancy needs var_n > 0");
    const auto& d = state.dist;
    double D = d.spec().D;
    double sig = state.sigma();
    double sup = 0.0;
    for (long long k = d.k_min() - kWindowSteps; k <= d.k_max() + kWindowSteps; ++k) {
        double x = d.spec().point(k) - state.a;
        double gauss = D * kInvSqrt2Pi * std::exp(-x * x / (2.0 * state.var));
        sup = std::max(sup, std::abs(sig * d.pmf(k) - gauss));
    }
    return sup;
}

double gaussian_defect(const PrefixState& state) {
    if (!(state.var > 0.0)) throw DegenerateVariance("gaussian_defect needs var_n > 0");
    const auto& d = state.dist;
    double D = d.spec().D;
    double sig = state.sigma();
    double sum = 0.0, comp = 0.0;
    for (long long k = d.k_min() - kWindowSteps; k <= d.k_max() + kWindowSteps; ++k) {
        double x = d.spec().point(k) - state.a;
        double term = d.pmf(k) - (D * kInvSqrt2Pi / sig) * std::exp(-x * x / (2.0 * state.var));
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double log_binomial_half_pmf(long n, long long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    double nn = static_cast<double>(n);
    double kk = static_cast<double>(k);
    return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0) -
           nn * std::numbers::ln2;
}

double bernoulli_llt_error(long n) {
    if (n < 1) throw InvalidArgument("bernoulli_llt_error needs n >= 1");
    double sup = 0.0;
    for (long long k = -1; k <= n + 1; ++k) {
        double p = (k < 0 || k > n) ? 0.0 : std::exp(log_binomial_half_pmf(n, k));
        double z = 2.0 * static_cast<double>(k) - static_cast<double>(n);
        double gauss = std::sqrt(2.0 / (std::numbers::pi * static_cast<double>(n))) *
                       std::exp(-z * z / (2.0 * static_cast<double>(n)));
        sup = std::max(sup, std::abs(p - gauss));
    }
    return sup;
}

double rozanov_partial(const DistributionModel& model, int q, long K) {
    if (q < 2) throw InvalidModulus("rozanov_partial needs q >= 2");
    if (K < model.start_index) throw InvalidArgument("rozanov_partial: K below start_index");
    double sum = 0.0;
    for (long k = model.start_index; k <= K; ++k) {
        LatticeDistribution x = model.marginal(k);
        std::vector<double> residue(static_cast<std::size_t>(q), 0.0);
        for (long long off = x.k_min(); off <= x.k_max(); ++off) {
            long long r = ((off % q) + q) % q;
            residue[static_cast<std::size_t>(r)] += x.pmf(off);
        }
        double best = 0.0;
        for (double p : residue) best = std::max(best, p);
        sum += 1.0 - best;  // min_m P{X != m (mod q)} = 1 - max_m P{X == m}
    }
    return sum;
}

}  // namespace llt
