#include "llt/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "llt/errors.hpp"

namespace llt {

CorrelationContext make_context(const DistributionModel& model, const ScalarChain& chain,
                                const KappaSequence& kappa, const std::vector<double>& probs) {
    return {&model, &chain, &kappa, &probs};
}

LatticeDistribution segment_law(const DistributionModel& model, long m, long n) {
    if (m >= n) throw IndexOrder("segment_law needs m < n");
    LatticeDistribution acc = model.marginal(m + 1);
    for (long j = m + 2; j <= n; ++j) acc = convolve(acc, model.marginal(j));
    return acc;
}

double correlation_Y(const CorrelationContext& ctx, long m, long n) {
    if (m >= n) throw IndexOrder("correlation_Y needs m < n");
    if (m < ctx.start() || n > ctx.N()) throw RangeExceeded("correlation_Y outside chain");
    double pm = ctx.prob(m);
    if (pm == 0.0) return 0.0;
    LatticeDistribution seg = segment_law(*ctx.model, m, n);
    double pseg = seg.pmf(ctx.kappa->offset_at(n) - ctx.kappa->offset_at(m));
    double pn = ctx.prob(n);
    return ctx.chain->sigma_at(m) * pm * ctx.chain->sigma_at(n) * (pseg - pn);
}

double variance_Y(const CorrelationContext& ctx, long n) {
    double p = ctx.prob(n);
    double s = ctx.chain->sigma_at(n);
    return s * s * p * (1.0 - p);
}

double brute_force_joint(const DistributionModel& model, const KappaSequence& kappa, long m,
                         long n) {
    if (m >= n) throw IndexOrder("brute_force_joint needs m < n");
    long start = model.start_index;
    double count = 1.0;
    std::vector<LatticeDistribution> marg;
    for (long j = start; j <= n; ++j) {
        marg.push_back(model.marginal(j));
        count *= static_cast<double>(marg.back().support_size());
        if (count > 1e7) throw TooLarge("brute_force_joint enumeration bound exceeded");
    }
    long long km = kappa.offset_at(m), kn = kappa.offset_at(n);
    std::size_t steps = marg.size();
    std::vector<long long> pick(steps, 0);
    double joint = 0.0;
    // Odometer over outcome tuples in offset coordinates.
    while (true) {
        double p = 1.0;
        long long sum = 0;
        long long sum_m = 0;
        for (std::size_t j = 0; j < steps; ++j) {
            long long off = marg[j].k_min() + pick[j];
            p *= marg[j].pmf(off);
            sum += off;
            if (static_cast<long>(j) + start == m) sum_m = sum;
        }
        if (sum_m == km && sum == kn) joint += p;
        std::size_t pos = 0;
        while (pos < steps) {
            if (++pick[pos] < static_cast<long long>(marg[pos].support_size())) break;
            pick[pos++] = 0;
        }
        if (pos == steps) break;
    }
    return joint;
}

namespace {

double max_sigma_ratio_cubed(const CorrelationContext& ctx, long m, long n) {
    double rm = ctx.chain->sigma_at(m) / std::sqrt(ctx.chain->nu_at(m));
    double rn = ctx.chain->sigma_at(n) / std::sqrt(ctx.chain->nu_at(n));
    double r = std::max(rm, rn);
    return r * r * r;
}

}  // namespace

CorrelationReport verify_bound(const CorrelationContext& ctx, long m, long n,
                               const std::string& variant, const HypothesisCaps& caps) {
    if (m >= n) throw IndexOrder("verify_bound needs m < n");
    for (long j : {m, n}) {
        double std_dev = (ctx.kappa->value_at(j) - ctx.chain->a_at(j)) / ctx.chain->sigma_at(j);
        if (std::abs(std_dev) > caps.standardized)
            throw HypothesisViolated("(kappa_j - a_j)/sigma_j cap exceeded at j=" +
                                     std::to_string(j));
        if (ctx.chain->sigma_at(j) * ctx.prob(j) > caps.scaled_prob)
            throw HypothesisViolated("sigma_j P{S_j=kappa_j} cap exceeded at j=" +
                                     std::to_string(j));
    }

    CorrelationReport rep;
    rep.m = m;
    rep.n = n;
    rep.nu_m = ctx.chain->nu_at(m);
    rep.nu_n = ctx.chain->nu_at(n);
    rep.variant = variant;
    rep.lhs = std::abs(correlation_Y(ctx, m, n));

    double D = ctx.chain->D;
    double invD2 = 1.0 / (D * D);
    double num = rep.nu_n, den = rep.nu_m;
    if (variant == "main") {
        double prod = ctx.chain->theta_product(m, n);
        rep.rhs_shape = invD2 * max_sigma_ratio_cubed(ctx, m, n) *
                        (std::sqrt(num) * prod + std::sqrt(num) / std::pow(num - den, 1.5) +
                         1.0 / (std::sqrt(num / den) - 1.0));
    } else if (variant == "tau") {
        rep.rhs_shape = invD2 * max_sigma_ratio_cubed(ctx, m, n) *
                        (1.0 / (std::sqrt(num / den) - 1.0) +
                         std::sqrt(num) / std::pow(num - den, 1.5));
    } else if (variant == "ratio-c") {
        rep.rhs_shape = invD2 * max_sigma_ratio_cubed(ctx, m, n) * std::sqrt(den / num);
    } else if (variant == "simple") {
        rep.rhs_shape = ctx.chain->sigma_at(n) / ctx.chain->segment_sigma(m, n) + 1.0;
    } else {
        throw InvalidArgument("unknown bound variant: " + variant);
    }
    rep.ratio = rep.rhs_shape > 0.0 ? rep.lhs / rep.rhs_shape : 0.0;
    return rep;
}

std::vector<CorrelationReport> bound_sweep(const CorrelationContext& ctx, long n_max,
                                           const std::string& variant,
                                           const HypothesisCaps& caps) {
    std::vector<CorrelationReport> out;
    long start = ctx.start();
    for (long n = 2; n <= std::min(n_max, ctx.N()); n *= 2) {
        if (n <= start) continue;
        long candidates[4] = {n / 8, n / 4, n / 2, n - 1};
        long prev = -1;
        for (long m : candidates) {
            if (m <= start - 1 || m >= n || m == prev || m < start) continue;
            prev = m;
            out.push_back(verify_bound(ctx, m, n, variant, caps));
        }
    }
    return out;
}

QuadraticFormCheck quadratic_form_check(const std::vector<double>& x,
                                        const std::vector<std::vector<double>>& alpha) {
    std::size_t n = x.size();
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) lhs += x[i] * x[j] * alpha[i][j];
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t l = i + 1; l < n; ++l) row += std::abs(alpha[i][l]);
        for (std::size_t l = 0; l < i; ++l) row += std::abs(alpha[l][i]);
        rhs += 0.5 * x[i] * x[i] * row;
    }
    return {std::abs(lhs), rhs};
}

QuadraticFormCheck quadratic_form_check_symmetric(const std::vector<double>& x,
                                                  const std::vector<std::vector<double>>& alpha) {
    std::size_t n = x.size();
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) lhs += x[i] * x[j] * alpha[i][j];
    double rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t l = 0; l < n; ++l)
            if (l != i) row += std::abs(alpha[i][l]);
        rhs += x[i] * x[i] * row;
    }
    return {std::abs(lhs), rhs};
}

namespace {

// Incremental law of X_{m+1}+...+X_n over a pruned offset window. Marginal
// supports stay small for the catalog models, so each step is a short dense
// convolution followed by edge pruning at an absolute floor far below the
// pair tolerances.
class SegmentWalker {
  public:
    static constexpr double kFloor = 1e-18;

    explicit SegmentWalker(const DistributionModel& model) : model_(&model) {
        pmf_ = {1.0};
        lo_ = 0;
    }

    void step(long n) {
        LatticeDistribution x = model_->marginal(n);
        const auto& fx = x.mass();
        std::vector<double> out(pmf_.size() + fx.size() - 1, 0.0);
        for (std::size_t i = 0; i < pmf_.size(); ++i) {
            double pi = pmf_[i];
            if (pi == 0.0) continue;
            for (std::size_t j = 0; j < fx.size(); ++j) out[i + j] += pi * fx[j];
        }
        long long lo = lo_ + x.k_min();
        std::size_t a = 0, b = out.size();
        while (a < b && out[a] < kFloor) dropped_ += out[a++];
        while (b > a && out[b - 1] < kFloor) dropped_ += out[--b];
        pmf_.assign(out.begin() + static_cast<std::ptrdiff_t>(a),
                    out.begin() + static_cast<std::ptrdiff_t>(b));
        lo_ = lo + static_cast<long long>(a);
    }

    double pmf_at(long long t) const {
        long long i = t - lo_;
        if (i < 0 || i >= static_cast<long long>(pmf_.size())) return 0.0;
        return pmf_[static_cast<std::size_t>(i)];
    }

    double dropped() const { return dropped_; }

  private:
    const DistributionModel* model_;
    std::vector<double> pmf_;
    long long lo_ = 0;
    double dropped_ = 0.0;
};

}  // namespace

std::vector<double> block_gram(const CorrelationContext& ctx, const std::vector<int>& block_of,
                               int nblocks, const std::vector<double>& coef, int jobs) {
    const long start = ctx.start();
    const long N = ctx.N();
    const std::size_t len = static_cast<std::size_t>(N - start + 1);
    if (block_of.size() != len || coef.size() != len)
        throw InvalidArgument("block_gram: array sizes must match the chain range");

    const ScalarChain& ch = *ctx.chain;
    const KappaSequence& ks = *ctx.kappa;
    // Blocks are nu-ordered and nu is strictly increasing, so every m < n pair
    // lands in the upper triangle: block(m) <= block(n).
    std::vector<double> pairs(static_cast<std::size_t>(nblocks) * nblocks, 0.0);
    std::vector<double> diag_var(static_cast<std::size_t>(nblocks), 0.0);

    long first = -1, last = -1;
    for (long n = start; n <= N; ++n) {
        std::size_t i = static_cast<std::size_t>(n - start);
        int b = block_of[i];
        if (b < 0) continue;
        if (b >= nblocks) throw InvalidArgument("block_gram: block index out of range");
        diag_var[static_cast<std::size_t>(b)] += coef[i] * coef[i] * variance_Y(ctx, n);
        if (first < 0) first = n;
        last = n;
    }

    auto pair_term = [&](long m, long n, double pseg) {
        double ey = ch.sigma_at(m) * ctx.prob(m) * ch.sigma_at(n) * (pseg - ctx.prob(n));
        return coef[static_cast<std::size_t>(m - start)] *
               coef[static_cast<std::size_t>(n - start)] * ey;
    };

    if (first >= 0 && first != last) {
        if (ctx.model->iid) {
            // Segment law depends on the lag only: one rolling prefix chain of
            // the common marginal serves every pair with that lag.
            LatticeDistribution marginal = ctx.model->marginal(start);
            LatticeDistribution seg = marginal;
            for (long d = 1; d <= last - first; ++d) {
                if (d > 1) seg = convolve(seg, marginal);
                for (long m = first; m + d <= last; ++m) {
                    int bm = block_of[static_cast<std::size_t>(m - start)];
                    if (bm < 0) continue;
                    long n = m + d;
                    int bn = block_of[static_cast<std::size_t>(n - start)];
                    if (bn < 0) continue;
                    double pseg = seg.pmf(ks.offset_at(n) - ks.offset_at(m));
                    pairs[static_cast<std::size_t>(bm) * nblocks + bn] += pair_term(m, n, pseg);
                }
            }
        } else {
            // Per-row forward walkers, parallel over m with a deterministic
            // ordered reduction.
            int workers = std::max(1, jobs);
            std::vector<std::vector<double>> row_contrib(len);
            auto run_rows = [&](long m_lo, long m_hi) {
                for (long m = m_lo; m < m_hi; ++m) {
                    int bm = block_of[static_cast<std::size_t>(m - start)];
                    if (bm < 0 || ctx.prob(m) == 0.0) continue;
                    std::vector<double> acc(static_cast<std::size_t>(nblocks), 0.0);
                    SegmentWalker walker(*ctx.model);
                    for (long n = m + 1; n <= last; ++n) {
                        walker.step(n);
                        int bn = block_of[static_cast<std::size_t>(n - start)];
                        if (bn < 0) continue;
                        double pseg = walker.pmf_at(ks.offset_at(n) - ks.offset_at(m));
                        acc[static_cast<std::size_t>(bn)] += pair_term(m, n, pseg);
                    }
                    row_contrib[static_cast<std::size_t>(m - start)] = std::move(acc);
                }
            };
            if (workers == 1) {
                run_rows(first, last + 1);
            } else {
                std::vector<std::thread> pool;
                long span = last + 1 - first;
                long chunk = (span + workers - 1) / workers;
                for (int w = 0; w < workers; ++w) {
                    long lo = first + w * chunk;
                    long hi = std::min(last + 1, lo + chunk);
                    if (lo >= hi) break;
                    pool.emplace_back(run_rows, lo, hi);
                }
                for (auto& t : pool) t.join();
            }
            for (long m = first; m <= last; ++m) {
                const auto& acc = row_contrib[static_cast<std::size_t>(m - start)];
                if (acc.empty()) continue;
                int bm = block_of[static_cast<std::size_t>(m - start)];
                for (int j = 0; j < nblocks; ++j)
                    pairs[static_cast<std::size_t>(bm) * nblocks + j] +=
                        acc[static_cast<std::size_t>(j)];
            }
        }
    }

    // Assemble the symmetric ordered-sum matrix: off-diagonal cells mirror the
    // one-sided pair sums; diagonal blocks count each m<n pair twice plus the
    // variance terms once.
    std::vector<double> gram(pairs.size(), 0.0);
    for (int i = 0; i < nblocks; ++i) {
        for (int j = i; j < nblocks; ++j) {
            std::size_t ij = static_cast<std::size_t>(i) * nblocks + j;
            std::size_t ji = static_cast<std::size_t>(j) * nblocks + i;
            if (i == j) {
                gram[ij] = 2.0 * pairs[ij] + diag_var[static_cast<std::size_t>(i)];
            } else {
                gram[ij] = pairs[ij];
                gram[ji] = pairs[ij];
            }
        }
    }
    return gram;
}

}  // namespace llt
