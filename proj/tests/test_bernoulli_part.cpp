#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "llt/bernoulli_part.hpp"
#include "llt/lattice.hpp"
#include "llt/models.hpp"
#include "llt/prefix.hpp"
#include "llt/rng.hpp"

using namespace llt;

namespace {

LatticeDistribution random_dist(CounterRng& rng, int max_support) {
    int n = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_support - 1));
    std::vector<double> m(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& v : m) {
        v = rng.next_double() + 1e-3;
        total += v;
    }
    for (auto& v : m) v /= total;
    return LatticeDistribution({0.0, 1.0}, 0, std::move(m));
}

// 99.9% chi-square quantile via the Wilson-Hilferty cube approximation.
double chi2_q999(double df) {
    double z = 3.090232;
    double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    return df * t * t * t;
}

}  // namespace

TEST_CASE("decompose, fair coin at theta = 1/2") {
    BernoulliPartDecomposition dec = decompose(make_fair_coin(), 0.5);
    REQUIRE(dec.tau.size() == 2);
    CHECK(dec.tau[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dec.tau[1] == 0.0);
    CHECK(dec.joint_eps1[0] == doctest::Approx(0.5).epsilon(1e-15));   // (0,1)
    CHECK(dec.joint_eps0[0] == doctest::Approx(0.25).epsilon(1e-15));  // (0,0)
    CHECK(dec.joint_eps0[1] == doctest::Approx(0.25).epsilon(1e-15));  // (1,0)
    CHECK(dec.joint_eps1[1] == 0.0);                                   // (1,1)
}

TEST_CASE("decompose, uniform on 3 points at full theta") {
    LatticeDistribution u3 = make_uniform(3);
    double theta_x = theta_characteristic(u3);
    CHECK(theta_x == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    BernoulliPartDecomposition dec = decompose(u3, theta_x);
    CHECK(dec.tau[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(dec.tau[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    // margin laws
    CHECK(dec.margin_v(0) == doctest::Approx(1.0 / 3.0 + 1.0 / 6.0).epsilon(1e-14));
    CHECK(dec.margin_v(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(dec.margin_v(2) == doctest::Approx(1.0 / 3.0 - 1.0 / 6.0).epsilon(1e-14));
    double eps1 = 0.0;
    for (double t : dec.joint_eps1) eps1 += t;
    CHECK(eps1 == doctest::Approx(theta_x).epsilon(1e-14));
    CHECK(tv_distance(reconstruct_law(dec), u3) < 1e-12);
}

TEST_CASE("decompose error paths") {
    CHECK_THROWS_AS(decompose(make_point_mass(0.0), 0.1), DegenerateTheta);
    CHECK_THROWS_AS(decompose(make_fair_coin(), 0.0), ThetaOutOfRange);
    CHECK_THROWS_AS(decompose(make_fair_coin(), 0.5001), ThetaOutOfRange);
}

TEST_CASE("coupling constraints and exactness on randomized laws") {
    CounterRng rng(101);
    int done = 0;
    while (done < 100) {
        LatticeDistribution d = random_dist(rng, 32);
        double theta_x = theta_characteristic(d);
        if (theta_x <= 0.0) continue;
        double theta = theta_x * (0.05 + 0.95 * rng.next_double());
        BernoulliPartDecomposition dec = decompose(d, theta);

        double tau_sum = 0.0, joint_sum = 0.0;
        const auto& f = d.mass();
        for (std::size_t k = 0; k < dec.tau.size(); ++k) {
            double tau_prev = k == 0 ? 0.0 : dec.tau[k - 1];
            CHECK(tau_prev + dec.tau[k] <= 2.0 * f[k] + 1e-15);
            CHECK(dec.joint_eps0[k] >= 0.0);
            CHECK(dec.joint_eps1[k] >= 0.0);
            tau_sum += dec.tau[k];
            joint_sum += dec.joint_eps0[k] + dec.joint_eps1[k];
            // margin law P{V=v_k} = f(k) + (tau_k - tau_{k-1})/2
            CHECK(dec.margin_v(d.k_min() + static_cast<long long>(k)) ==
                  doctest::Approx(f[k] + 0.5 * (dec.tau[k] - tau_prev)).epsilon(1e-12));
        }
        CHECK(tau_sum == doctest::Approx(theta).epsilon(1e-12));
        CHECK(joint_sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(tv_distance(reconstruct_law(dec), d) < 1e-12);
        ++done;
    }
}

TEST_CASE("sample_path determinism and structure") {
    DistributionModel coin = iid_model(make_fair_coin());
    ScalarChain chain = build_scalar_chain(coin, 500);
    KappaSequence kappa = kappa_sequence(chain, 0.0);

    PathRealization empty = sample_path(coin, kappa, 0, 9);
    CHECK(empty.s_off.empty());

    PathRealization a = sample_path(coin, kappa, 500, 12345);
    PathRealization b = sample_path(coin, kappa, 500, 12345);
    CHECK(a.s_off == b.s_off);
    CHECK(a.hits == b.hits);
    PathRealization c = sample_path(coin, kappa, 500, 54321);
    CHECK(a.s_off != c.s_off);

    long long prev_b = 0;
    for (long n = 1; n <= 500; ++n) {
        std::size_t i = a.idx(n);
        CHECK(a.s_off[i] == a.w_off[i] + a.M[i]);  // S = W + D M, offset form
        CHECK(a.B[i] >= prev_b);
        CHECK(a.M[i] <= a.B[i]);
        CHECK(static_cast<bool>(a.hits[i]) == (a.s_off[i] == kappa.offset_at(n)));
        prev_b = a.B[i];
    }
}

TEST_CASE("empirical mean of S_N over replicas") {
    DistributionModel coin = iid_model(make_fair_coin());
    long N = 100000;
    ScalarChain chain = build_scalar_chain(coin, N);
    KappaSequence kappa = kappa_sequence(chain, 0.0);
    int replicas = 200;
    double sum = 0.0;
    for (int r = 0; r < replicas; ++r) {
        PathRealization p =
            sample_path(coin, kappa, N, derive_stream(777, static_cast<std::uint64_t>(r)));
        sum += static_cast<double>(p.s_off.back());
    }
    double mean = sum / replicas;
    double exact = static_cast<double>(N) / 2.0;
    double band = 3.0 * std::sqrt(static_cast<double>(N) / 4.0 / replicas);
    CHECK(std::abs(mean - exact) <= band);
}

TEST_CASE("chernoff bounds") {
    ChernoffBounds b = chernoff_bounds(1.0, 10.0);
    CHECK(b.upper == doctest::Approx(std::exp(-3.75)).epsilon(1e-15));
    CHECK(b.upper == doctest::Approx(0.02352).epsilon(1e-3));
    CHECK(b.lower == doctest::Approx(std::exp(-5.0)).epsilon(1e-15));

    ChernoffBounds tiny = chernoff_bounds(1e-9, 10.0);
    CHECK(tiny.upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tiny.lower == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(chernoff_bounds(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(chernoff_bounds(0.0, 1.0), InvalidArgument);
}

TEST_CASE("empirical lower tail respects the chernoff bound") {
    DistributionModel coin = iid_model(make_fair_coin());
    long N = 200;
    ScalarChain chain = build_scalar_chain(coin, N);
    KappaSequence kappa = kappa_sequence(chain, 0.0);
    double eps = 0.2;
    double nu = chain.nu.back();  // 100
    double bound = chernoff_bounds(eps, nu).lower;
    int replicas = 10000, tail = 0;
    for (int r = 0; r < replicas; ++r) {
        PathRealization p =
            sample_path(coin, kappa, N, derive_stream(31337, static_cast<std::uint64_t>(r)));
        if (static_cast<double>(p.B.back()) <= (1.0 - eps) * nu) ++tail;
    }
    double phat = static_cast<double>(tail) / replicas;
    double se = std::sqrt(bound * (1.0 - bound) / replicas);
    CHECK(phat <= bound + 3.0 * se);
}

TEST_CASE("law of M_n matches a B_n-fold fair-coin sum") {
    // N = 32 i.i.d. fair coin: B ~ Binomial(32, 1/2), M | B=b ~ Binomial(b, 1/2).
    DistributionModel coin = iid_model(make_fair_coin());
    long N = 32;
    ScalarChain chain = build_scalar_chain(coin, N);
    KappaSequence kappa = kappa_sequence(chain, 0.0);

    std::vector<double> expect(static_cast<std::size_t>(N + 1), 0.0);
    for (long b = 0; b <= N; ++b) {
        double pb = std::exp(log_binomial_half_pmf(N, b));
        for (long k = 0; k <= b; ++k)
            expect[static_cast<std::size_t>(k)] += pb * std::exp(log_binomial_half_pmf(b, k));
    }

    int replicas = 100000;
    std::vector<long> counts(static_cast<std::size_t>(N + 1), 0);
    for (int r = 0; r < replicas; ++r) {
        PathRealization p =
            sample_path(coin, kappa, N, derive_stream(2024, static_cast<std::uint64_t>(r)));
        ++counts[static_cast<std::size_t>(p.M.back())];
    }

    // chi-square with cells pooled below expected count 5
    double chi2 = 0.0;
    double pool_obs = 0.0, pool_exp = 0.0;
    int cells = 0;
    for (std::size_t k = 0; k < expect.size(); ++k) {
        double e = expect[k] * replicas;
        double o = static_cast<double>(counts[k]);
        if (e < 5.0) {
            pool_obs += o;
            pool_exp += e;
            continue;
        }
        chi2 += (o - e) * (o - e) / e;
        ++cells;
    }
    if (pool_exp > 0.0) {
        chi2 += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
        ++cells;
    }
    CHECK(chi2 < chi2_q999(static_cast<double>(cells - 1)));
}

TEST_CASE("path CSV export") {
    DistributionModel coin = iid_model(make_fair_coin());
    ScalarChain chain = build_scalar_chain(coin, 4);
    KappaSequence kappa = kappa_sequence(chain, 0.0);
    PathRealization p = sample_path(coin, kappa, 4, 7);
    std::string csv = path_to_csv(p);
    CHECK(csv.rfind("n,S_n,W_n,B_n,M_n,hit\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
}
