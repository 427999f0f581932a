#include "llt/asllt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "llt/errors.hpp"

namespace llt {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

int nu_block_index(double nu, double R) {
    int i = static_cast<int>(std::floor(std::log(nu) / std::log(R)));
    while (std::pow(R, i + 1) <= nu) ++i;
    while (std::pow(R, i) > nu) --i;
    return i;
}

WeightSchedule finish_schedule(ScalarChain chain, double R) {
    if (!(R > 1.0)) throw InvalidArgument("block base R must be > 1");
    WeightSchedule s;
    s.R = R;
    s.chain = std::move(chain);
    const ScalarChain& c = s.chain;
    std::size_t len = c.nu.size();
    s.w.resize(len);
    s.wcum.resize(len);
    s.h_prefix.resize(len);
    s.block_index_of.resize(len);
    double acc = 0.0, hmax = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        s.w[i] = c.theta[i] / (c.sigma[i] * std::sqrt(c.nu[i]));
        acc += s.w[i];
        s.wcum[i] = acc;
        hmax = std::max(hmax, c.var[i] / c.nu[i]);
        s.h_prefix[i] = hmax;
        s.block_index_of[i] = nu_block_index(c.nu[i], R);
    }
    s.i_min = s.block_index_of.front();
    s.i_max = s.block_index_of.back();
    s.m_block.assign(static_cast<std::size_t>(s.i_max - s.i_min + 1), 0.0);
    for (std::size_t i = 0; i < len; ++i)
        s.m_block[static_cast<std::size_t>(s.block_index_of[i] - s.i_min)] += s.w[i];

    // M_J = M(R^J), accumulated block-wise so that M_J = sum_{i<J} m_i holds
    // bit-exactly (blocks below J cover exactly the indices with nu_n < R^J).
    s.J_max = 0;
    double block_acc = 0.0;
    int next_block = s.i_min;
    for (int J = 1; std::pow(R, J) <= c.nu.back(); ++J) {
        while (next_block < J && next_block <= s.i_max)
            block_acc += s.m_block[static_cast<std::size_t>(next_block++ - s.i_min)];
        s.MJ.push_back(block_acc);
        s.J_max = J;
    }

    // Divergence surrogate: the second half of the index range must still
    // contribute visibly to the weight mass. Log-speed divergence adds a
    // log(2)/log(N) fraction there; a convergent stream adds rounding dust.
    if (len >= 8) {
        double m_mid = s.wcum[len / 2];
        if (s.wcum.back() - m_mid < 1e-9 * s.wcum.back())
            throw DivergenceViolated("sum theta_n/(sigma_n sqrt(nu_n)) stalls over the range");
    }
    return s;
}

}  // namespace

double WeightSchedule::m_i(int i) const {
    if (i < i_min || i > i_max) return 0.0;
    return m_block[static_cast<std::size_t>(i - i_min)];
}

long WeightSchedule::block_first(int i) const {
    for (long n = start(); n <= N(); ++n)
        if (block_index_of[idx(n)] == i) return n;
    return -1;
}

long WeightSchedule::block_last(int i) const {
    long hit = -1;
    for (long n = start(); n <= N(); ++n) {
        int b = block_index_of[idx(n)];
        if (b == i) hit = n;
        if (b > i) break;
    }
    return hit;
}

double WeightSchedule::omega(long m) const {
    const ScalarChain& c = chain;
    bool in_range = m >= start() && m <= N();
    double nu_m, var_m;
    if (in_range) {
        nu_m = c.nu_at(m);
        var_m = c.var_at(m);
    } else if (nu_closed && varcum_closed) {
        nu_m = nu_closed(m);
        var_m = varcum_closed(m);
    } else {
        throw RangeExceeded("omega(m): m outside the cached range");
    }
    double window_hi = 2.0 * nu_m;

    if (in_range && window_hi <= c.nu.back()) {
        // Cached-array path: indices with nu_m < nu_n < 2 nu_m.
        auto lo_it = std::upper_bound(c.nu.begin(), c.nu.end(), nu_m);
        double sum = 0.0;
        for (auto it = lo_it; it != c.nu.end() && *it < window_hi; ++it) {
            std::size_t i = static_cast<std::size_t>(it - c.nu.begin());
            double seg_sigma = std::sqrt(c.var[i] - var_m);
            sum += c.theta[i] / (seg_sigma * std::sqrt(c.nu[i]));
        }
        return sum;
    }
    if (nu_closed && varcum_closed && theta_closed) {
        double sum = 0.0;
        double nu_prev = nu_closed(m);
        for (long n = m + 1;; ++n) {
            double nu_n = nu_closed(n);
            if (nu_n >= window_hi) break;
            if (nu_n > nu_m) {
                double theta_n = theta_is_nu_increment ? nu_n - nu_prev : theta_closed(n);
                double varcum_n = varcum_is_nu ? nu_n : varcum_closed(n);
                sum += theta_n / (std::sqrt(varcum_n - var_m) * std::sqrt(nu_n));
            }
            nu_prev = nu_n;
        }
        return sum;
    }
    throw RangeExceeded("omega(m): window 2 nu_m = " + std::to_string(window_hi) +
                        " beyond cached nu range");
}

double WeightSchedule::M(double t) const {
    const auto& nu = chain.nu;
    auto it = std::lower_bound(nu.begin(), nu.end(), t);
    if (it == nu.begin()) return 0.0;
    return wcum[static_cast<std::size_t>(it - nu.begin()) - 1];
}

long WeightSchedule::M_inverse(double x) const {
    auto it = std::upper_bound(wcum.begin(), wcum.end(), x);
    if (it == wcum.begin()) return start();
    return start() + static_cast<long>(it - wcum.begin()) - 1;
}

double WeightSchedule::Phi(double x) const {
    long n = M_inverse(x);
    return h_at(n) * std::max(1.0, omega(n));
}

WeightSchedule build_schedule(const DistributionModel& model, long N, double R) {
    return finish_schedule(build_scalar_chain(model, N), R);
}

WeightSchedule build_schedule(const ParameterModel& model, long N, double R) {
    WeightSchedule s = finish_schedule(build_scalar_chain(model, N), R);
    if (model.name == "log-variance") {
        // nu and the cumulative variance telescope to log n exactly.
        s.nu_closed = [](long n) { return std::log(static_cast<double>(n)); };
        s.varcum_closed = s.nu_closed;
        s.theta_closed = model.theta;
        s.theta_is_nu_increment = true;
        s.varcum_is_nu = true;
    }
    return s;
}

BlockStats block_second_moments(const CorrelationContext& ctx, const WeightSchedule& sched,
                                int I, int J, const std::function<bool(long)>& subsequence,
                                int jobs) {
    if (I > J) throw InvalidArgument("block_second_moments needs I <= J");
    if (I < sched.i_min || J > sched.i_max)
        throw RangeExceeded("blocks outside the schedule range");
    if (ctx.start() != sched.start() || ctx.N() != sched.N())
        throw InvalidArgument("context and schedule cover different ranges");

    const long start = sched.start();
    const long N = sched.N();
    int dim = J - I + 1;
    std::vector<int> slots(static_cast<std::size_t>(N - start + 1), -1);
    std::vector<double> coef(slots.size(), 0.0);
    double m_sum = 0.0;
    for (long n = start; n <= N; ++n) {
        int b = sched.block_of(n);
        if (b < I || b > J) continue;
        if (subsequence && !subsequence(n)) continue;
        std::size_t i = sched.idx(n);
        slots[i] = b - I;
        coef[i] = sched.w[i];
        m_sum += sched.w[i];
    }

    BlockStats st;
    st.I = I;
    st.J = J;
    st.gram = block_gram(ctx, slots, dim, coef, jobs);
    st.m_sum = m_sum;
    for (int i = I; i < J; ++i)
        for (int j = I; j < J; ++j) st.sum_sq += st.at(i, j);
    st.rhs_shape = sched.Phi(sched.M(std::pow(sched.R, J))) * m_sum;
    st.ratio = st.rhs_shape > 0.0 ? st.sum_sq / st.rhs_shape : 0.0;
    return st;
}

std::vector<double> quasi_orthogonality_rowsums(const BlockStats& stats) {
    int dim = stats.dim();
    std::vector<double> rows(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            rows[static_cast<std::size_t>(i)] +=
                std::abs(stats.gram[static_cast<std::size_t>(i) * dim + j]);
    return rows;
}

SeriesDiagnostic s_squared_core(const std::vector<double>& M_values,
                                const std::function<double(double)>& Phi, int L_max) {
    if (M_values.empty()) throw InvalidArgument("s_squared_core: no M values");
    double m_max = M_values.back();
    if (m_max < std::pow(2.0, L_max + 1))
        throw RangeExceeded("schedule does not cover M up to 2^(L_max+1)");
    SeriesDiagnostic out;
    double acc = 0.0;
    for (int l = 0; l <= L_max; ++l) {
        double lo = std::pow(2.0, l), hi = std::pow(2.0, l + 1);
        long cnt = 0;
        for (double v : M_values)
            if (v >= lo && v < hi) ++cnt;
        if (cnt == 0) continue;  // empty intersections contribute nothing
        double L = 1.0 + std::log(static_cast<double>(cnt));
        double term = Phi(lo) * L / lo;
        acc += term;
        out.l.push_back(l);
        out.counts.push_back(cnt);
        out.log_factors.push_back(L);
        out.terms.push_back(term);
        out.partials.push_back(acc);
    }
    // Tail-slope verdict: terms decreasing over the observed tail and the last
    // step dominated by a geometric ratio.
    bool decreasing = out.terms.size() >= 2;
    for (std::size_t i = out.terms.size() / 2; i + 1 < out.terms.size(); ++i)
        if (out.terms[i + 1] > out.terms[i]) decreasing = false;
    bool dominated = out.terms.size() >= 2 &&
                     out.terms.back() <= 0.9 * out.terms[out.terms.size() - 2];
    out.verdict = (decreasing && dominated) ? "convergent" : "inconclusive";
    return out;
}

SeriesDiagnostic s_squared_diagnostic(const WeightSchedule& sched, int L_max) {
    return s_squared_core(sched.MJ, [&](double x) { return sched.Phi(x); }, L_max);
}

namespace {

void check_average_range(const WeightSchedule& sched, long N) {
    if (N <= sched.start()) throw InvalidArgument("average needs N > start_index");
    if (N - 1 > sched.N()) throw RangeExceeded("average range beyond schedule");
}

}  // namespace

double asllt_average(const PathRealization& path, const WeightSchedule& sched, long N) {
    check_average_range(sched, N);
    if (path.N < N - 1 || path.start != sched.start())
        throw InvalidArgument("path does not cover the averaging range");
    double num = 0.0, den = 0.0;
    for (long n = sched.start(); n < N; ++n) {
        std::size_t i = sched.idx(n);
        num += sched.chain.theta[i] * static_cast<double>(path.hits[path.idx(n)]) /
               std::sqrt(sched.chain.nu[i]);
        den += sched.w[i];
    }
    return num / den;
}

double asllt_expected_average(const std::vector<double>& probs, const WeightSchedule& sched,
                              long N) {
    check_average_range(sched, N);
    if (probs.size() < static_cast<std::size_t>(N - sched.start()))
        throw InvalidArgument("probability array does not cover the averaging range");
    double num = 0.0, den = 0.0;
    for (long n = sched.start(); n < N; ++n) {
        std::size_t i = sched.idx(n);
        num += sched.chain.theta[i] * probs[i] / std::sqrt(sched.chain.nu[i]);
        den += sched.w[i];
    }
    return num / den;
}

double iid_log_average(const std::vector<double>& values, long start, long N) {
    if (N <= start) throw InvalidArgument("iid_log_average needs N > start");
    double num = 0.0, den = 0.0;
    for (long n = start; n < N; ++n) {
        double nn = static_cast<double>(n);
        num += values[static_cast<std::size_t>(n - start)] / std::sqrt(nn);
        den += 1.0 / nn;
    }
    return num / den;
}

WindowedSup windowed_sup_statistic(const std::vector<std::uint8_t>& hits,
                                   const std::vector<double>& probs,
                                   const WeightSchedule& sched) {
    std::size_t len = sched.w.size();
    if (hits.size() < len || probs.size() < len)
        throw InvalidArgument("windowed_sup_statistic: arrays shorter than the schedule");
    // Cumulative centered sums, then S_j at each block boundary nu < R^j.
    std::vector<double> cum(len);
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        acc += sched.chain.theta[i] * (static_cast<double>(hits[i]) - probs[i]) /
               std::sqrt(sched.chain.nu[i]);
        cum[i] = acc;
    }
    WindowedSup out;
    if (sched.J_max == 0) return out;
    int k_cur = -1;
    for (int j = 1; j <= sched.J_max; ++j) {
        double Mj = sched.MJ[static_cast<std::size_t>(j - 1)];
        if (Mj <= 0.0) continue;
        double t = std::pow(sched.R, j);
        auto it = std::lower_bound(sched.chain.nu.begin(), sched.chain.nu.end(), t);
        if (it == sched.chain.nu.begin()) continue;
        double Sj = cum[static_cast<std::size_t>(it - sched.chain.nu.begin()) - 1];
        int k = static_cast<int>(std::floor(std::log2(Mj)));
        double value = std::abs(Sj) / Mj;
        if (k != k_cur) {
            out.window.push_back(k);
            out.sup.push_back(value);
            k_cur = k;
        } else {
            out.sup.back() = std::max(out.sup.back(), value);
        }
    }
    return out;
}

std::vector<double> realized_block_sums(const std::vector<std::uint8_t>& hits,
                                        const std::vector<double>& probs,
                                        const WeightSchedule& sched, int I, int J) {
    if (I < sched.i_min || J > sched.i_max) throw RangeExceeded("blocks outside schedule");
    std::vector<double> z(static_cast<std::size_t>(J - I + 1), 0.0);
    for (long n = sched.start(); n <= sched.N(); ++n) {
        int b = sched.block_of(n);
        if (b < I || b > J) continue;
        std::size_t i = sched.idx(n);
        z[static_cast<std::size_t>(b - I)] += sched.chain.theta[i] *
                                              (static_cast<double>(hits[i]) - probs[i]) /
                                              std::sqrt(sched.chain.nu[i]);
    }
    return z;
}

SeriesPartials weighted_series_partials(const std::vector<double>& z, double b) {
    SeriesPartials out;
    bool withheld = !(b > 1.5);
    double acc = 0.0, total_abs = 0.0;
    for (std::size_t j = 2; j <= z.size(); ++j) {
        double weight = 1.0 / (std::sqrt(static_cast<double>(j)) *
                               std::pow(std::log(static_cast<double>(j)), b));
        double term = weight * z[j - 1];
        acc += term;
        total_abs += std::abs(term);
        out.partials.push_back(acc);
    }
    if (out.partials.size() >= 4) {
        std::size_t q = out.partials.size() - out.partials.size() / 4;
        double lo = out.partials[q], hi = out.partials[q];
        for (std::size_t i = q; i < out.partials.size(); ++i) {
            lo = std::min(lo, out.partials[i]);
            hi = std::max(hi, out.partials[i]);
        }
        out.tail_oscillation = hi - lo;
    }
    if (withheld)
        out.verdict = "withheld";
    else if (out.partials.size() >= 4 &&
             out.tail_oscillation < 0.05 * std::max(1.0, total_abs))
        out.verdict = "convergent";
    else
        out.verdict = "inconclusive";
    return out;
}

HlpCheck hlp_check(const WeightSchedule& sched, double delta, long N, long M) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("hlp_check needs 0 < delta < 1");
    if (N < sched.start() || M < N || M > sched.N())
        throw InvalidArgument("hlp_check needs start <= N <= M <= range end");
    const ScalarChain& c = sched.chain;
    HlpCheck out;
    double nu_N = c.nu_at(N);

    double tail = 0.0;
    for (long n = N + 1; n <= sched.N(); ++n) {
        std::size_t i = sched.idx(n);
        tail += delta * c.theta[i] / (std::pow(c.nu[i - 1], delta) * c.nu[i]);
    }
    out.tail = {tail, std::pow(nu_N, -delta)};

    if (M > N && !(nu_N > std::numbers::e))
        throw InvalidArgument("hlp_check variant (ii) needs nu_N > e");
    double logsum = 0.0;
    for (long n = N + 1; n <= M; ++n) {
        std::size_t i = sched.idx(n);
        logsum += c.theta[i] / c.nu[i];
    }
    out.log = {std::abs(logsum), M == N ? 0.0 : std::abs(std::log(c.nu_at(M)) - std::log(nu_N))};
    return out;
}

SpeedReport speed_report(const CorrelationContext& ctx, long N, double b) {
    const DistributionModel& model = *ctx.model;
    if (!model.iid) throw NotIID("speed_report is defined for i.i.d. models only");
    if (N > ctx.N() + 1) throw RangeExceeded("speed_report range beyond chain");
    Moments mo = moments(model.marginal(model.start_index));
    double mu = mo.mean;
    double sigma = std::sqrt(mo.variance);
    double D = model.spec.D;
    double kappa_iid = ctx.kappa->target_kappa * sigma;

    SpeedReport rep;
    long start = ctx.start();
    rep.delta.reserve(static_cast<std::size_t>(N - start));
    rep.eps.reserve(rep.delta.capacity());
    for (long n = start; n < N; ++n) {
        double nn = static_cast<double>(n);
        double dev = ctx.kappa->value_at(n) - nn * mu;
        double gauss = D * kInvSqrt2Pi * std::exp(-dev * dev / (2.0 * nn * sigma * sigma));
        rep.delta.push_back(std::abs(sigma * std::sqrt(nn) * ctx.prob(n) - gauss));
        rep.eps.push_back(kappa_iid != 0.0 ? dev / (kappa_iid * std::sqrt(nn)) - 1.0
                                           : dev / std::sqrt(nn));
    }

    std::vector<double> probs_prefix(ctx.hit_prob->begin(),
                                     ctx.hit_prob->begin() + static_cast<std::ptrdiff_t>(N - start));
    rep.average = iid_log_average(probs_prefix, start, N);
    rep.limit = D * kInvSqrt2Pi / sigma * std::exp(-kappa_iid * kappa_iid / (2.0 * sigma * sigma));

    double J = std::log2(static_cast<double>(N));
    double errsum = 0.0;
    for (long n = start; n < N; ++n) {
        std::size_t i = static_cast<std::size_t>(n - start);
        errsum += (rep.delta[i] + std::abs(rep.eps[i])) / static_cast<double>(n);
    }
    rep.err_term = errsum / J;
    rep.log_term = std::pow(std::log(J), b) / std::sqrt(J);

    double acc = 0.0;
    for (long j = 2; std::pow(2.0, j + 1) <= static_cast<double>(N); ++j) {
        double blocksum = 0.0;
        for (long n = std::max(start, static_cast<long>(std::pow(2.0, j)));
             n < static_cast<long>(std::pow(2.0, j + 1)); ++n) {
            std::size_t i = static_cast<std::size_t>(n - start);
            blocksum += (rep.delta[i] + std::abs(rep.eps[i])) / static_cast<double>(n);
        }
        acc += blocksum / (std::sqrt(static_cast<double>(j)) *
                           std::pow(std::log(static_cast<double>(j)), b));
        rep.summability_partials.push_back(acc);
    }
    return rep;
}

}  // namespace llt
