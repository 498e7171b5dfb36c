#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qrtm/error.hpp"
#include "qrtm/numerics/marcum.hpp"
#include "qrtm/numerics/rng.hpp"
#include "qrtm/numerics/stats.hpp"

using namespace qrtm::numerics;

TEST_CASE("marcum q1 matches frozen reference values") {
    // High-precision values of the defining integral.
    CHECK(marcum_q1({1.0, 1.0}) == doctest::Approx(0.7328798037968202).epsilon(1e-13));
    CHECK(marcum_q1({2.0, 3.0}) == doctest::Approx(0.2143620881626495).epsilon(1e-12));
    CHECK(marcum_q1({6.0, 5.0}) == doctest::Approx(0.8625148362300327).epsilon(1e-12));
}

TEST_CASE("marcum q1 large arguments match frozen reference values") {
    // 40-digit quadrature of the defining integral, cross-checked against an
    // independent noncentral chi-square survival function.
    CHECK(std::abs(marcum_q1({120.0, 118.0}) - 0.97747577763909455) < 1e-12);
    CHECK(std::abs(marcum_q1({100.0, 100.0}) - 0.50199473633730237) < 1e-12);
    CHECK(std::abs(marcum_q1({300.0, 305.0}) - 2.8911920182515855e-7) < 1e-12);
    CHECK(std::abs(marcum_q1({101.0, 98.5}) - 0.99387765324937986) < 1e-12);
    // Both sides of the switch between the series and the quadrature form.
    for (double d : {-3.0, 0.0, 2.0}) {
        const double below = marcum_q1({99.99 + d, 99.99}), above = marcum_q1({100.01 + d, 100.01});
        CHECK(std::abs(below - above) < 1e-3);
    }
    CHECK(marcum_q1({500.0, 520.0}) == 0.0);
    CHECK(marcum_q1({520.0, 500.0}) == 1.0);
}

TEST_CASE("marcum q1 agrees with quadrature and the theta integral") {
    for (double a : {0.0, 0.3, 1.7, 4.0, 9.5})
        for (double b : {0.0, 0.5, 2.2, 5.0, 10.0}) {
            const double q = marcum_q1({a, b});
            CHECK(std::abs(q - oracle::marcum_q1_quadrature(a, b)) < 1e-8);
            if (a != b && b > 0.0) CHECK(std::abs(q - oracle::marcum_q1_craig(a, b)) < 1e-10);
        }
}

TEST_CASE("marcum q1 edge cases") {
    CHECK(marcum_q1({3.0, 0.0}) == 1.0);
    CHECK(marcum_q1({0.0, 2.0}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(marcum_q1({40.0, 0.5}) == doctest::Approx(1.0));
    CHECK(marcum_q1({0.5, 40.0}) < 1e-300);
    CHECK_THROWS_AS(marcum_q1({-1.0, 1.0}), qrtm::DomainError);
    CHECK_THROWS_AS(marcum_q1({1.0, NAN}), qrtm::DomainError);
    // Monotone in both arguments.
    CHECK(marcum_q1({2.0, 2.0}) < marcum_q1({2.5, 2.0}));
    CHECK(marcum_q1({2.0, 2.0}) > marcum_q1({2.0, 2.5}));
}

TEST_CASE("scaled bessel values match the standard library") {
    std::vector<double> out(6);
    for (double x : {0.1, 1.0, 7.5, 30.0}) {
        scaled_bessel_i(x, 6, out.data());
        for (int k = 0; k < 6; ++k)
            CHECK(out[k] == doctest::Approx(std::exp(-x) * std::cyl_bessel_i(double(k), x)).epsilon(1e-12));
    }
}

TEST_CASE("cfar threshold inverts the exponential tail") {
    for (double p : {1e-1, 1e-3, 1e-6}) {
        const double g = threshold_from_pfa(2.5, p);
        CHECK(std::exp(-g / 2.5) == doctest::Approx(p).epsilon(1e-12));
        // Zero non-centrality collapses the detection law to the false-alarm law.
        CHECK(marcum_q1({0.0, normalized_threshold(2.5, g)}) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK_THROWS_AS(threshold_from_pfa(1.0, 0.0), qrtm::DomainError);
    CHECK_THROWS_AS(threshold_from_pfa(1.0, 1.0), qrtm::DomainError);
    CHECK_THROWS_AS(threshold_from_pfa(0.0, 0.1), qrtm::DomainError);
    // CA-CFAR scale approaches -ln p as the reference window grows.
    CHECK(ca_cfar_scale(100000, 1e-3) == doctest::Approx(-std::log(1e-3)).epsilon(1e-3));
    CHECK(ca_cfar_scale(16, 1e-3) == doctest::Approx(16.0 * (std::pow(1e-3, -1.0 / 16) - 1.0)));
}

TEST_CASE("rng streams are keyed, reproducible and distinct") {
    RngStream a(7, {1, 2, 3}), b(7, {1, 2, 3}), c(7, {1, 2, 4}), d(8, {1, 2, 3});
    for (int i = 0; i < 10; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
        CHECK(x != d());
    }
    RngStream r = seeded_stream(1, 99);
    double sum = 0.0, power = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto w = r.complex_normal(2.0);
        sum += w.real();
        power += std::norm(w);
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(power / n == doctest::Approx(2.0).epsilon(0.01));
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        const auto k = r.uniform_int(-3, 3);
        CHECK((k >= -3 && k <= 3));
    }
}

TEST_CASE("summary statistics") {
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto ms = mean_stderr(x);
    CHECK(ms.mean == doctest::Approx(5.5));
    CHECK(ms.stderr_ == doctest::Approx(std::sqrt(9.1666666666666667 / 10)));
    CHECK(binomial_stderr(0.5, 100) == doctest::Approx(0.05));
    // At most floor(0.2 * 10) = 2 samples exceed the returned value.
    CHECK(upper_quantile(x, 0.2) == 8.0);
    std::vector<double> n{8, 16, 32, 64}, t;
    for (double v : n) t.push_back(3e-6 * v * v);
    CHECK(loglog_slope(n, t) == doctest::Approx(2.0));
    std::vector<double> hi{5, 6, 7}, lo{1, 2, 3};
    CHECK(empirical_auc(hi, lo) == 1.0);
    CHECK(empirical_auc(lo, hi) == 0.0);
    CHECK(empirical_auc(hi, hi) == 0.5);
}
