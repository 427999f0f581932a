#include "llt/models.hpp"

#include <cmath>
#include <memory>

#include "llt/errors.hpp"

namespace llt {

double ScalarChain::theta_product(long m, long n) const {
    if (m < start || n > N || m > n) throw IndexOrder("theta_product: bad range");
    if (m == n) return 1.0;
    return std::exp(log_theta[idx(n)] - log_theta[idx(m)]);
}

double ScalarChain::segment_sigma(long m, long n) const {
    if (n <= m) throw IndexOrder("segment_sigma needs m < n");
    double dv = var_at(n) - (m >= start ? var_at(m) : 0.0);
    return dv > 0.0 ? std::sqrt(dv) : 0.0;
}

namespace {

template <typename ThetaFn, typename MeanFn, typename VarFn>
ScalarChain accumulate_chain(long start, long N, double D, double v0, bool has_law,
                             ThetaFn&& theta_fn, MeanFn&& mean_fn, VarFn&& var_fn) {
    if (N < start) throw InvalidArgument("chain range empty: N < start_index");
    ScalarChain c;
    c.start = start;
    c.N = N;
    c.D = D;
    c.v0 = v0;
    c.has_law = has_law;
    std::size_t len = static_cast<std::size_t>(N - start + 1);
    c.nu.resize(len);
    c.a.resize(len);
    c.var.resize(len);
    c.sigma.resize(len);
    c.theta.resize(len);
    c.log_theta.resize(len);
    double nu = 0.0, a = 0.0, var = 0.0, lt = 0.0;
    for (long n = start; n <= N; ++n) {
        double th = theta_fn(n);
        if (!(th > 0.0)) throw DegenerateTheta("theta(n) must be > 0 at n=" + std::to_string(n));
        nu += th;
        a += mean_fn(n);
        var += var_fn(n);
        lt += std::log(th);
        std::size_t i = static_cast<std::size_t>(n - start);
        c.nu[i] = nu;
        c.a[i] = a;
        c.var[i] = var;
        c.sigma[i] = std::sqrt(var);
        c.theta[i] = th;
        c.log_theta[i] = lt;
    }
    return c;
}

}  // namespace

ScalarChain build_scalar_chain(const DistributionModel& model, long N) {
    // For an i.i.d. model the per-step moments are constant; compute once.
    if (model.iid) {
        Moments mo = moments(model.marginal(model.start_index));
        double th = model.theta(model.start_index);
        return accumulate_chain(
            model.start_index, N, model.spec.D, model.spec.v0, true, [&](long) { return th; },
            [&](long) { return mo.mean; }, [&](long) { return mo.variance; });
    }
    return accumulate_chain(
        model.start_index, N, model.spec.D, model.spec.v0, true,
        [&](long n) { return model.theta(n); },
        [&](long n) { return moments(model.marginal(n)).mean; },
        [&](long n) { return moments(model.marginal(n)).variance; });
}

ScalarChain build_scalar_chain(const ParameterModel& model, long N) {
    return accumulate_chain(
        model.start_index, N, model.D, 0.0, false, [&](long n) { return model.theta(n); },
        [](long) { return 0.0; }, [&](long n) { return model.var(n); });
}

KappaSequence kappa_sequence(const ScalarChain& chain, double kappa) {
    if (!chain.has_law) throw NotSimulable("kappa_sequence needs a model with a law");
    KappaSequence ks;
    ks.target_kappa = kappa;
    ks.start = chain.start;
    ks.v0 = chain.v0;
    ks.D = chain.D;
    ks.offset.resize(chain.nu.size());
    for (long n = chain.start; n <= chain.N; ++n) {
        double target = chain.a_at(n) + kappa * chain.sigma_at(n);
        double x = (target - static_cast<double>(n) * chain.v0) / chain.D;
        // Nearest lattice offset, ties toward +inf.
        ks.offset[chain.idx(n)] = static_cast<long long>(std::floor(x + 0.5));
    }
    return ks;
}

DistributionModel iid_model(const LatticeDistribution& dist, double theta_scale) {
    if (!(theta_scale > 0.0 && theta_scale <= 1.0))
        throw InvalidArgument("theta_scale must be in (0,1]");
    double theta_x = theta_characteristic(dist);
    if (theta_x <= 0.0) throw DegenerateTheta("i.i.d. model needs theta_X > 0");
    double th = theta_scale * theta_x;
    auto shared = std::make_shared<LatticeDistribution>(dist);
    DistributionModel m;
    m.spec = dist.spec();
    m.start_index = 1;
    m.iid = true;
    m.name = "iid";
    m.marginal = [shared](long) { return *shared; };
    m.theta = [th](long) { return th; };
    return m;
}

DistributionModel block_uniform_model(std::function<long long(long)> n_j,
                                      std::function<int(long)> b_j, double theta_scale) {
    if (!(theta_scale > 0.0 && theta_scale <= 1.0))
        throw InvalidArgument("theta_scale must be in (0,1]");
    DistributionModel m;
    m.spec = {0.0, 1.0};
    m.start_index = 1;
    m.iid = false;
    m.name = "block-uniform";
    m.marginal = [n_j, b_j](long j) {
        int b = b_j(j);
        if (b < 2) throw InvalidBlock("block-uniform needs b_j >= 2");
        return make_uniform(b, n_j(j) + 1);
    };
    m.theta = [b_j, theta_scale](long j) {
        int b = b_j(j);
        if (b < 2) throw InvalidBlock("block-uniform needs b_j >= 2");
        return theta_scale * (1.0 - 1.0 / b);
    };
    return m;
}

DistributionModel cramer_model(double theta_scale) {
    if (!(theta_scale > 0.0 && theta_scale <= 1.0))
        throw InvalidArgument("theta_scale must be in (0,1]");
    DistributionModel m;
    m.spec = {0.0, 1.0};
    m.start_index = 3;
    m.iid = false;
    m.name = "cramer";
    m.marginal = [](long j) { return make_two_point(1.0 / std::log(static_cast<double>(j))); };
    m.theta = [theta_scale](long j) {
        double p = 1.0 / std::log(static_cast<double>(j));
        return theta_scale * std::min(p, 1.0 - p);
    };
    return m;
}

ParameterModel log_variance_parameter_model() {
    ParameterModel m;
    m.D = 2.0;
    m.start_index = 2;
    m.name = "log-variance";
    m.theta = [](long n) {
        return std::log(static_cast<double>(n)) - std::log(static_cast<double>(n - 1));
    };
    m.var = m.theta;
    return m;
}

ParsedModel parse_model(const std::string& id, double theta_scale) {
    ParsedModel out;
    if (id == "cramer") {
        out.dist_model = cramer_model(theta_scale);
        return out;
    }
    if (id == "log-variance") {
        out.is_parameter = true;
        out.param_model = log_variance_parameter_model();
        return out;
    }
    if (id.rfind("iid:", 0) == 0) {
        out.dist_model = iid_model(load_distribution(id.substr(4)), theta_scale);
        return out;
    }
    if (id.rfind("block-uniform:", 0) == 0) {
        std::string params = id.substr(14);
        if (params == "b=j") {
            out.dist_model = block_uniform_model([](long) { return 0ll; },
                                                 [](long j) { return static_cast<int>(j) + 1; },
                                                 theta_scale);
            return out;
        }
        if (params.rfind("b=", 0) == 0) {
            int b = std::stoi(params.substr(2));
            if (b < 2) throw InvalidBlock("block-uniform needs b >= 2");
            out.dist_model = block_uniform_model([](long) { return 0ll; },
                                                 [b](long) { return b; }, theta_scale);
            return out;
        }
    }
    throw ParseError("unknown model identifier: " + id);
}

}  // namespace llt
