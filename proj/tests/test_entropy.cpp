#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cie/entropy.hpp"
#include "cie/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace cie;

TEST_CASE("shannon entropy on pinned distributions") {
    const std::vector<double> uniform4{0.25, 0.25, 0.25, 0.25};
    CHECK(shannon_entropy(uniform4, Unit::bits) == doctest::Approx(2.0).epsilon(1e-12));

    const std::vector<double> degenerate{1.0, 0.0, 0.0};
    CHECK(shannon_entropy(degenerate, Unit::bits) == doctest::Approx(0.0));

    const std::vector<double> coin{0.5, 0.5};
    CHECK(shannon_entropy(coin, Unit::bits) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shannon_entropy(coin, Unit::nats) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-12));
}

TEST_CASE("shannon entropy rejects invalid vectors") {
    CHECK_THROWS_AS(shannon_entropy(std::vector<double>{0.5, -0.1, 0.6}, Unit::bits),
                    std::invalid_argument);
    CHECK_THROWS_AS(shannon_entropy(std::vector<double>{0.5, 0.6}, Unit::bits),
                    std::invalid_argument);
    CHECK_THROWS_AS(shannon_entropy(std::vector<double>{}, Unit::bits),
                    std::invalid_argument);
}

TEST_CASE("uniform maximizes shannon entropy") {
    SplitMix64 rng(7);
    for (int n = 2; n <= 6; ++n) {
        const double h_uniform = shannon_entropy(
            std::vector<double>(static_cast<std::size_t>(n), 1.0 / n), Unit::nats);
        CHECK(h_uniform == doctest::Approx(std::log(n)).epsilon(1e-12));
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> p(static_cast<std::size_t>(n));
            double sum = 0.0;
            for (auto& v : p) sum += (v = rng.next_double() + 1e-6);
            for (auto& v : p) v /= sum;
            bool is_uniform = true;
            for (double v : p) is_uniform = is_uniform && std::abs(v - 1.0 / n) < 1e-3;
            if (is_uniform) continue;
            CHECK(shannon_entropy(p, Unit::nats) < h_uniform);
        }
    }
}

TEST_CASE("shannon entropy is permutation invariant") {
    std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const double h = shannon_entropy(p, Unit::nats);
    std::vector<double> q{0.4, 0.1, 0.3, 0.2};
    CHECK(shannon_entropy(q, Unit::nats) == doctest::Approx(h).epsilon(1e-15));
}

TEST_CASE("bernoulli entropy pinned values") {
    CHECK(bernoulli_entropy(0.5, Unit::bits) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bernoulli_entropy(0.0, Unit::bits) == 0.0);
    CHECK(bernoulli_entropy(1.0, Unit::bits) == 0.0);
    // frozen from direct evaluation of -p log2 p - (1-p) log2 (1-p) at p = 0.11
    CHECK(bernoulli_entropy(0.11, Unit::bits) ==
          doctest::Approx(0.499915958164528).epsilon(1e-12));
    CHECK_THROWS_AS(bernoulli_entropy(-0.01, Unit::bits), std::invalid_argument);
    CHECK_THROWS_AS(bernoulli_entropy(1.01, Unit::bits), std::invalid_argument);
}

TEST_CASE("bernoulli entropy is symmetric around one half") {
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.next_double();
        CHECK(bernoulli_entropy(p, Unit::nats) ==
              doctest::Approx(bernoulli_entropy(1.0 - p, Unit::nats)).epsilon(1e-12));
    }
}

TEST_CASE("state surprisal") {
    CHECK(state_surprisal(1.0) == 0.0);
    const double inv_e = 1.0 / 2.718281828459045235;
    CHECK(state_surprisal(inv_e) == doctest::Approx(inv_e).epsilon(1e-12));
    CHECK(state_surprisal(0.5) == doctest::Approx(0.34657359027997264).epsilon(1e-12));
    CHECK_THROWS_AS(state_surprisal(0.0), std::invalid_argument);
    CHECK_THROWS_AS(state_surprisal(1.5), std::invalid_argument);
}

TEST_CASE("gaussian differential entropy of unit-sigma samples") {
    // sigma exactly 1 by construction: two-point set {-1, +1} about mean 0
    // has unbiased variance 2/(2-1)... use a symmetric set with known sigma
    std::vector<std::vector<double>> samples;
    for (double v : {-1.0, 1.0, -1.0, 1.0}) samples.push_back({v});
    // unbiased variance of {-1,1,-1,1} = 4/3
    const double expected = 0.5 * std::log(2.0 * 3.141592653589793 *
                                           2.718281828459045 * (4.0 / 3.0));
    const DiffEntropy h = differential_entropy_gaussian_fit(samples);
    CHECK_FALSE(h.degenerate);
    CHECK(h.nats == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("scaling samples by 2 adds ln 2 per dimension") {
    SplitMix64 rng(3);
    std::vector<std::vector<double>> samples, doubled;
    for (int i = 0; i < 100; ++i) {
        const auto [a, b] = rng.next_gaussian_pair();
        samples.push_back({a, b});
        doubled.push_back({2.0 * a, 2.0 * b});
    }
    const double h1 = differential_entropy_gaussian_fit(samples).nats;
    const double h2 = differential_entropy_gaussian_fit(doubled).nats;
    CHECK(h2 - h1 == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("translation leaves differential entropy unchanged") {
    SplitMix64 rng(5);
    std::vector<std::vector<double>> samples, shifted;
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = rng.next_gaussian_pair();
        samples.push_back({a});
        shifted.push_back({a + 17.25});
        (void)b;
    }
    const double h1 = differential_entropy_gaussian_fit(samples).nats;
    const double h2 = differential_entropy_gaussian_fit(shifted).nats;
    CHECK(std::abs(h1 - h2) < 1e-9);
}

TEST_CASE("monte carlo unit normal recovers the closed form") {
    // 10,000 seeded draws; 0.5*ln(2*pi*e) = 1.4189385332046727
    SplitMix64 rng(42);
    std::vector<std::vector<double>> samples;
    samples.reserve(10000);
    for (int i = 0; i < 5000; ++i) {
        const auto [a, b] = rng.next_gaussian_pair();
        samples.push_back({a});
        samples.push_back({b});
    }
    const DiffEntropy h = differential_entropy_gaussian_fit(samples);
    CHECK(std::abs(h.nats - 1.4189385332046727) < 0.05);
}

TEST_CASE("degenerate variance yields the -inf sentinel") {
    std::vector<std::vector<double>> samples(10, std::vector<double>{3.5});
    const DiffEntropy h = differential_entropy_gaussian_fit(samples);
    CHECK(h.degenerate);
    CHECK(h.nats == -std::numeric_limits<double>::infinity());
}

TEST_CASE("differential entropy input validation") {
    CHECK_THROWS_AS(differential_entropy_gaussian_fit(
                        std::vector<std::vector<double>>{{1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(differential_entropy_gaussian_fit(
                        std::vector<std::vector<double>>{{1.0}, {1.0, 2.0}}),
                    std::invalid_argument);
}

TEST_CASE("cie total reproduces the 8-node accounting") {
    CieTerms terms;
    terms.unit = Unit::bits;
    terms.object_entropies = {{"A1", 10.0}, {"A2", 10.0}};
    terms.coupling_entropies = {{"B", 16.0}};
    terms.c = {1.0, 1.0};
    terms.d = {1.0};
    CHECK(cie_total(terms) == doctest::Approx(36.0));
}

TEST_CASE("cie total edge cases") {
    CieTerms empty;
    CHECK(cie_total(empty) == 0.0);

    CieTerms weighted;
    weighted.object_entropies = {{"a", 3.0}, {"b", 99.0}};
    weighted.c = {2.0, 0.0};
    CHECK(cie_total(weighted) == doctest::Approx(6.0));

    CieTerms misaligned;
    misaligned.object_entropies = {{"a", 1.0}};
    misaligned.c = {1.0, 2.0};
    CHECK_THROWS_AS(cie_total(misaligned), std::invalid_argument);
}

TEST_CASE("cie total is linear in each coefficient") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        CieTerms terms;
        for (int i = 0; i < 3; ++i) {
            terms.object_entropies.emplace_back("o" + std::to_string(i),
                                                rng.next_double() * 5.0);
            terms.c.push_back(rng.next_double());
        }
        terms.coupling_entropies.emplace_back("p", rng.next_double() * 5.0);
        terms.d.push_back(rng.next_double());

        const double base = cie_total(terms);
        CieTerms doubled = terms;
        doubled.c[1] *= 2.0;
        const double contribution =
            terms.c[1] * terms.object_entropies[1].second;
        CHECK(cie_total(doubled) - base ==
              doctest::Approx(contribution).epsilon(1e-12));
    }
}
