#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "llt/lattice.hpp"
#include "llt/models.hpp"
#include "llt/rng.hpp"

using namespace llt;

TEST_CASE("iid model scalars") {
    DistributionModel coin = iid_model(make_fair_coin());
    ScalarChain c = build_scalar_chain(coin, 64);
    for (long n = 1; n <= 64; ++n) {
        CHECK(c.nu_at(n) == doctest::Approx(n / 2.0).epsilon(1e-14));
        CHECK(c.var_at(n) == doctest::Approx(n / 4.0).epsilon(1e-14));
        CHECK(c.a_at(n) == doctest::Approx(n / 2.0).epsilon(1e-14));
    }

    DistributionModel u3 = iid_model(make_uniform(3));
    CHECK(u3.theta(10) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(iid_model(make_point_mass(0.0)), DegenerateTheta);
}

TEST_CASE("block uniform model") {
    DistributionModel fixed =
        block_uniform_model([](long) { return 0ll; }, [](long) { return 4; });
    CHECK(fixed.theta(7) == doctest::Approx(0.75).epsilon(1e-14));
    LatticeDistribution m7 = fixed.marginal(7);
    CHECK(m7.k_min() == 1);
    CHECK(m7.support_size() == 4);

    // b_j = 2 is a shifted fair coin
    DistributionModel b2 = block_uniform_model([](long) { return 5ll; }, [](long) { return 2; });
    LatticeDistribution m = b2.marginal(1);
    CHECK(m.k_min() == 6);
    CHECK(m.pmf(6) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.pmf(7) == doctest::Approx(0.5).epsilon(1e-15));

    // b_j = j: the theta product telescopes to m/n
    DistributionModel grow = block_uniform_model(
        [](long) { return 0ll; }, [](long j) { return static_cast<int>(j); });
    grow.start_index = 2;  // b_j >= 2 from the start
    ScalarChain c = build_scalar_chain(grow, 256);
    for (long m2 = 2; m2 <= 128; m2 *= 2)
        CHECK(c.theta_product(m2, 256) ==
              doctest::Approx(static_cast<double>(m2) / 256.0).epsilon(1e-12));

    CHECK_THROWS_AS(block_uniform_model([](long) { return 0ll; }, [](long) { return 1; })
                        .marginal(1),
                    InvalidBlock);
}

TEST_CASE("log-variance parameter model") {
    ParameterModel lv = log_variance_parameter_model();
    CHECK(lv.D == 2.0);
    CHECK(lv.start_index == 2);
    CHECK(lv.theta(2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    ScalarChain c = build_scalar_chain(lv, 4096);
    for (long n : {7L, 55L, 403L, 4096L}) {
        CHECK(c.nu_at(n) == doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
        CHECK(c.sigma_at(n) / std::sqrt(c.nu_at(n)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cramer model") {
    DistributionModel cm = cramer_model();
    CHECK(cm.start_index == 3);
    for (long j = 3; j <= 40; ++j) {
        double p = 1.0 / std::log(static_cast<double>(j));
        CHECK(cm.theta(j) == doctest::Approx(std::min(p, 1.0 - p)).epsilon(1e-14));
        CHECK(cm.theta(j) == doctest::Approx(theta_characteristic(cm.marginal(j))).epsilon(1e-13));
        if (j >= 8) CHECK(cm.theta(j) == doctest::Approx(p).epsilon(1e-14));
    }
    // sigma_n^2 = sum p_j (1 - p_j) and sigma_n^2 / nu_n -> 1
    ScalarChain c = build_scalar_chain(cm, 100000);
    double var = 0.0;
    for (long j = 3; j <= 100; ++j) {
        double p = 1.0 / std::log(static_cast<double>(j));
        var += p * (1.0 - p);
    }
    CHECK(c.var_at(100) == doctest::Approx(var).epsilon(1e-13));
    double ratio = c.var_at(100000) / c.nu_at(100000);
    CHECK(ratio >= 0.8);
    CHECK(ratio <= 1.0);
}

TEST_CASE("kappa sequences") {
    DistributionModel coin = iid_model(make_fair_coin());
    ScalarChain c = build_scalar_chain(coin, 200);
    KappaSequence k0 = kappa_sequence(c, 0.0);
    for (long n = 1; n <= 200; ++n) {
        // nearest integer to n/2 with ties toward +inf
        long long expect = static_cast<long long>(std::floor(n / 2.0 + 0.5));
        CHECK(k0.offset_at(n) == expect);
    }

    // integer-mean lattice: kappa_n = a_n exactly at kappa = 0
    DistributionModel u3 = iid_model(make_uniform(3));
    ScalarChain cu = build_scalar_chain(u3, 50);
    KappaSequence ku = kappa_sequence(cu, 0.0);
    for (long n = 1; n <= 50; ++n) CHECK(ku.value_at(n) == doctest::Approx(n).epsilon(1e-13));

    // Cramer at kappa = 1: standardized ratio near 1 for n >= 100
    DistributionModel cm = cramer_model();
    ScalarChain cc = build_scalar_chain(cm, 3000);
    KappaSequence kc = kappa_sequence(cc, 1.0);
    for (long n = 100; n <= 3000; n += 37) {
        double ratio = (kc.value_at(n) - cc.a_at(n)) / cc.sigma_at(n);
        CHECK(ratio >= 0.9);
        CHECK(ratio <= 1.1);
        // generic rounding bound
        CHECK(std::abs(ratio - 1.0) <= cc.D / (2.0 * cc.sigma_at(n)) + 1e-12);
    }
}

TEST_CASE("model identifier parsing") {
    CHECK(parse_model("cramer").dist_model.name == "cramer");
    CHECK(parse_model("log-variance").is_parameter);
    CHECK(parse_model("block-uniform:b=4").dist_model.theta(1) ==
          doctest::Approx(0.75).epsilon(1e-14));
    CHECK(parse_model("block-uniform:b=j").dist_model.theta(1) ==
          doctest::Approx(0.5).epsilon(1e-14));

    // iid:<file> round-trips the stored law
    std::string path = "/tmp/lltlab_test_dist.txt";
    {
        std::ofstream out(path);
        out << to_text(make_uniform(3));
    }
    ParsedModel pm = parse_model("iid:" + path);
    CHECK(pm.dist_model.iid);
    CHECK(to_text(pm.dist_model.marginal(1)) == to_text(make_uniform(3)));
    std::remove(path.c_str());

    CHECK_THROWS_AS(parse_model("nope"), ParseError);
    CHECK_THROWS_AS(parse_model("block-uniform:b=1"), InvalidBlock);
}

TEST_CASE("theta stream divergence over the range") {
    DistributionModel cm = cramer_model();
    ScalarChain c = build_scalar_chain(cm, 20000);
    CHECK(c.nu_at(20000) > 2.0 * c.nu_at(5000 / 2));
    for (std::size_t i = 1; i < c.nu.size(); ++i) CHECK(c.nu[i] > c.nu[i - 1]);
}
