#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sgf/errors.hpp"
#include "sgf/laws.hpp"

using namespace sgf;
using Catch::Approx;

TEST_CASE("Amdahl's law") {
    CHECK(amdahl_speedup(AmdahlParams(0.37), 1.0) == 1.0);
    CHECK(amdahl_speedup(AmdahlParams(0.0), 64.0) == 64.0);
    CHECK(amdahl_speedup(AmdahlParams(0.1), 11.0) == Approx(5.5).epsilon(1e-15));
    CHECK_THROWS_AS(AmdahlParams(1.5), InvalidInput);
    CHECK_THROWS_AS(AmdahlParams(-0.1), InvalidInput);
    CHECK_THROWS_AS(amdahl_speedup(AmdahlParams(0.1), 0.5), InvalidInput);
}

TEST_CASE("Amdahl's law is non-decreasing in N") {
    for (double sigma = 0.0; sigma <= 1.0; sigma += 0.05) {
        const AmdahlParams p(sigma);
        double prev = amdahl_speedup(p, 1.0);
        for (double n = 1.5; n <= 500; n += 0.5) {
            const double v = amdahl_speedup(p, n);
            REQUIRE(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("Gustafson's law") {
    CHECK(gustafson_speedup(GustafsonParams(0.0), 37.0) == 37.0);
    CHECK(gustafson_speedup(GustafsonParams(0.8), 1.0) == 1.0);
    CHECK(gustafson_speedup(GustafsonParams(0.5), 10.0) == 5.5);
}

TEST_CASE("Universal Scalability Law") {
    CHECK(usl_speedup(UslParams(0.0, 0.0), 42.0) == 42.0);
    CHECK(usl_speedup(UslParams(0.1, 0.005), 10.0) == Approx(4.25531914893617).epsilon(1e-13));
    // negative contention: superlinear
    CHECK(usl_speedup(UslParams(-0.05, 0.0), 10.0) > 10.0);
    CHECK_THROWS_AS(usl_speedup(UslParams(-0.5, 0.0), 10.0), DomainError);
    CHECK_THROWS_AS(UslParams(0.1, -1.0), InvalidInput);
}

TEST_CASE("USL without coherency delay is Amdahl's law") {
    for (int i = 0; i <= 100; ++i) {
        const double sigma = i / 100.0;
        for (int n = 1; n <= 100; ++n) {
            REQUIRE(usl_speedup(UslParams(sigma, 0.0), n) == amdahl_speedup(AmdahlParams(sigma), n));
        }
    }
}

TEST_CASE("swarm performance function") {
    CHECK(swarm_performance(SwarmParams(1.0, 1.0, -1e-12), 20.0) == Approx(20.0).epsilon(1e-9));
    CHECK(swarm_performance(SwarmParams(2.0, 1.0, -0.1), 10.0) ==
          Approx(7.357588823428846).epsilon(1e-14));
    CHECK_THROWS_AS(SwarmParams(1.0, 1.0, 0.1), InvalidInput);
    CHECK_THROWS_AS(SwarmParams(0.0, 1.0, -0.1), InvalidInput);
}

TEST_CASE("swarm performance peaks at -b/c") {
    for (auto [b, c] : {std::pair{1.0, -0.1}, {2.0, -0.05}, {0.7, -0.02}}) {
        const SwarmParams p(1.3, b, c);
        double best_n = 1.0, best = 0.0;
        for (double n = 1.0; n <= 400.0; n += 1e-3) {
            const double v = swarm_performance(p, n);
            if (v > best) { best = v; best_n = n; }
        }
        CHECK(best_n == Approx(-b / c).margin(2e-3));
    }
}

TEST_CASE("throughput and speedup of a fixed point") {
    FixedPoint fp;
    fp.s_star = 12.5; fp.g_star = 7.5; fp.f_star = 5.0;
    CHECK(throughput(fp, Contribution{1.0, 0.0}) == 12.5);
    CHECK(throughput(fp, Contribution{0.0, 0.0}) == 0.0);
    CHECK(speedup(fp, Contribution{3.0, 0.0}) == 12.5);

    FixedPoint q;
    q.s_star = 2.0; q.g_star = 3.0; q.f_star = 0.0;
    CHECK(throughput(q, Contribution{1.0, 8.0}) == 26.0);
    CHECK(speedup(q, Contribution{1.0, 8.0}) == 26.0);
    CHECK_THROWS_AS(speedup(q, Contribution{0.0, 8.0}), UndefinedSpeedup);
}

TEST_CASE("collaboration pays when c_g exceeds c_s") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::uniform_real_distribution<double> ratio(1.0001, 20.0);
    for (int i = 0; i < 500; ++i) {
        FixedPoint fp;
        fp.s_star = u(rng);
        fp.g_star = 1e-3 + u(rng);
        const double cs = 0.1 + u(rng);
        CHECK(speedup(fp, Contribution{cs, cs * ratio(rng)}) > fp.s_star);
    }
}

TEST_CASE("ideal-concurrency fixed point") {
    CHECK(fp_ideal_concurrency(0.125, 1.0, 1.0).s_star == Approx(0.8284271247461901).epsilon(1e-14));
    const auto fp = fp_ideal_concurrency(0.004, 1.0, 100.0);
    CHECK(fp.g_star == Approx(100.0 - fp.s_star));
    CHECK(fp.f_star == 0.0);
    CHECK(fp.residual < 1e-12);
    // k1 -> 0+
    CHECK(fp_ideal_concurrency(1e-14, 1.0, 50.0).s_star == Approx(50.0).epsilon(1e-9));
    CHECK(fp_ideal_concurrency(0.0, 1.0, 50.0).s_star == 50.0);
    CHECK_THROWS_AS(fp_ideal_concurrency(0.1, 0.0, 5.0), InvalidInput);
}

TEST_CASE("contention-limited fixed point") {
    CHECK(fp_amdahl(0.02, 0.04, 1.0, 25.0).s_star == 12.5);
    CHECK(fp_amdahl(0.004, 0.04, 1.0, 25.0).s_star == Approx(17.274575140626314).epsilon(1e-12));
    // large N limit on the singular branch
    CHECK(fp_amdahl(0.02, 0.04, 1.0, 1e9).s_star == Approx(25.0).epsilon(1e-6));

    // both branches agree across the switch
    const double k1 = 0.02;
    const double inside = fp_amdahl(k1, 2 * k1 * (1 + 1e-11), 1.0, 40.0).s_star;
    const double outside = fp_amdahl(k1, 2 * k1 * (1 + 1e-6), 1.0, 40.0).s_star;
    CHECK(inside == Approx(outside).epsilon(1e-6));
    CHECK(fp_amdahl(0.004, 0.04, 1.0, 25.0).residual < 1e-10);
}

TEST_CASE("diminishing-returns fixed point") {
    const auto fp = fp_diminishing(0.1, 1.0, 2.0);
    CHECK(fp.s_star == Approx(1.337058193188933).epsilon(1e-12));
    CHECK(fp.f_star == Approx(0.1281185295354939).epsilon(1e-10));
    CHECK(fp.g_star == Approx(0.5348232772755732).epsilon(1e-10));

    CHECK(fp_diminishing_solo(0.5, 1.0, 1.0) == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(fp_diminishing(0.5, 1.0, 1.0), SingularFormula);
}

TEST_CASE("diminishing-returns closed form is a root of the reduced system") {
    for (double k1 : {0.05, 0.1, 0.25}) {
        for (double k4 : {1.0, 2.0, 4.0}) {
            for (double n : {1.0, 3.0, 7.0, 33.0, 150.0}) {
                if (std::abs(k4 - 2 * k1 * n) < 1e-6 * k4) continue;
                const auto fp = fp_diminishing(k1, k4, n);
                const auto d = rhs_reduced(fp.s_star, fp.f_star,
                                           SystemConfig{diminishing_rates(k1, k4), {}, n});
                CHECK(std::abs(d.ds) <= 1e-9 * n);
                CHECK(std::abs(d.df) <= 1e-9 * n);
            }
        }
    }
}

TEST_CASE("approximate USL form") {
    CHECK(usl_approx_speedup(0.0, 3.0, 17.0) == 17.0);
    CHECK(usl_approx_speedup(0.1, 1.0, 10.0) == Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(usl_approx_speedup(0.4, 4.0, 10.0) == Approx(10.0 / 3.0).epsilon(1e-15));
}
