#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "trinv/oracle.hpp"
#include "trinv/tridiag.hpp"

using namespace trinv;

namespace {

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.n);
    for (std::int64_t i = 0; i < a.n; ++i)
        for (std::int64_t j = 0; j < a.n; ++j) {
            double acc = 0.0;
            for (std::int64_t k = 0; k < a.n; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

double identity_residual(const DenseMatrix& m) {
    double err = 0.0;
    for (std::int64_t i = 0; i < m.n; ++i)
        for (std::int64_t j = 0; j < m.n; ++j)
            err = std::max(err, std::abs(m(i, j) - (i == j ? 1.0 : 0.0)));
    return err;
}

} // namespace

TEST_CASE("materialize lays out the banded pattern") {
    const DenseMatrix q = oracle::materialize(TridiagSpec::make(4, -1, 3.0, 2.5));
    CHECK(q.n == 4);
    CHECK(q(0, 0) == 2.5);
    CHECK(q(1, 1) == 3.0);
    CHECK(q(2, 2) == 3.0);
    CHECK(q(3, 3) == 2.5);
    for (int i = 0; i < 3; ++i) {
        CHECK(q(i, i + 1) == 1.0); // -b with b = -1
        CHECK(q(i + 1, i) == 1.0);
    }
    CHECK(q(0, 2) == 0.0);
    CHECK(q(3, 0) == 0.0);

    const DenseMatrix q1 = oracle::materialize(TridiagSpec::make(1, 1, 9.0, 4.0));
    CHECK(q1.n == 1);
    CHECK(q1(0, 0) == 4.0);
}

TEST_CASE("dense inversion on small hand cases") {
    DenseMatrix eye(3);
    for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
    const DenseMatrix einv = oracle::invert_dense(eye);
    CHECK(identity_residual(einv) == 0.0);

    DenseMatrix m(2);
    m(0, 0) = 2.0; m(0, 1) = 1.0;
    m(1, 0) = 1.0; m(1, 1) = 2.0;
    const DenseMatrix inv = oracle::invert_dense(m);
    CHECK(inv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(inv(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(inv(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(inv(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    DenseMatrix sing(2);
    sing(0, 0) = 1.0; sing(0, 1) = 1.0;
    sing(1, 0) = 1.0; sing(1, 1) = 1.0;
    CHECK_THROWS_AS(oracle::invert_dense(sing), SingularMatrix);

    CHECK_THROWS_AS(oracle::invert_dense(DenseMatrix(2001)), DomainError);
}

TEST_CASE("dense inversion residual on random specs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> cs(0.0, 8.0);
    std::uniform_real_distribution<double> ds(-4.0, 4.0);
    int done = 0;
    while (done < 20) {
        const std::int64_t n = 1 + std::int64_t(rng() % 80);
        const TridiagSpec s =
            TridiagSpec::make(n, rng() % 2 ? 1 : -1, cs(rng), ds(rng));
        const auto rep = is_invertible(s);
        if (!rep || std::abs(rep.denom) < 1e-6 * rep.scale) continue;
        ++done;
        const DenseMatrix q = oracle::materialize(s);
        const DenseMatrix inv = oracle::invert_dense(q);
        CHECK(identity_residual(multiply(inv, q)) <= 1e-10 * double(n) * std::max(1.0, inv.max_abs()));
    }
}

TEST_CASE("pivot-recurrence inversion matches hand values and the dense route") {
    const DenseMatrix m2 = oracle::invert_meurant(TridiagSpec::make(2, 1, 3.0, 2.0));
    CHECK(m2(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(m2(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(m2(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const DenseMatrix m1 = oracle::invert_meurant(TridiagSpec::make(1, -1, 0.0, 8.0));
    CHECK(m1(0, 0) == 0.125);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> cs(2.05, 9.0);
    std::uniform_real_distribution<double> ds(0.5, 5.0);
    for (int rep = 0; rep < 15; ++rep) {
        const std::int64_t n = 2 + std::int64_t(rng() % 40);
        const TridiagSpec s =
            TridiagSpec::make(n, rng() % 2 ? 1 : -1, cs(rng), ds(rng));
        if (!is_invertible(s)) continue;
        const DenseMatrix a = oracle::invert_meurant(s);
        const DenseMatrix b = oracle::invert_dense(oracle::materialize(s));
        const double scale = std::max(1.0, b.max_abs());
        for (std::size_t k = 0; k < a.a.size(); ++k)
            CHECK(std::abs(a.a[k] - b.a[k]) <= 1e-9 * scale);
    }

    // c = 2, d = 1 puts a zero on the pivot recurrence immediately
    CHECK_THROWS_AS(oracle::invert_meurant(TridiagSpec::make(3, 1, 2.0, 1.0)), SingularMatrix);
}

TEST_CASE("tridiagonal solve") {
    const TridiagSpec s = TridiagSpec::make(5, 1, 3.0, 2.0);
    const DenseMatrix q = oracle::materialize(s);
    std::vector<double> qones(5, 0.0);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) qones[std::size_t(i)] += q(i, j);
    const auto x = oracle::solve_tridiagonal(s, qones);
    for (double xi : x) CHECK(xi == doctest::Approx(1.0).epsilon(1e-13));

    const auto zero = oracle::solve_tridiagonal(s, std::vector<double>(5, 0.0));
    for (double xi : zero) CHECK(xi == 0.0);

    CHECK_THROWS_AS(oracle::solve_tridiagonal(s, std::vector<double>(4, 1.0)),
                    DimensionMismatch);
    CHECK_THROWS_AS(oracle::solve_tridiagonal(TridiagSpec::make(4, 1, 2.0, 1.0),
                                              std::vector<double>(4, 1.0)),
                    SingularMatrix);

    const auto one = oracle::solve_tridiagonal(TridiagSpec::make(1, 1, 5.0, 4.0),
                                               std::vector<double>{2.0});
    CHECK(one == std::vector<double>{0.5});
}

TEST_CASE("solve residual across regimes, including c < 2") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> cs(0.0, 8.0);
    std::uniform_real_distribution<double> ds(-4.0, 4.0);
    std::uniform_real_distribution<double> bs(-2.0, 2.0);
    int done = 0;
    while (done < 25) {
        const std::int64_t n = 1 + std::int64_t(rng() % 200);
        const TridiagSpec s =
            TridiagSpec::make(n, rng() % 2 ? 1 : -1, cs(rng), ds(rng));
        const auto rep = is_invertible(s);
        if (!rep || std::abs(rep.denom) < 1e-6 * rep.scale) continue;
        ++done;
        std::vector<double> rhs(std::size_t(n), 0.0);
        for (auto& r : rhs) r = bs(rng);
        const auto x = oracle::solve_tridiagonal(s, rhs);
        double err = 0.0, xmax = 1.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double diag = (i == 0 || i == n - 1) ? s.d : s.c;
            double acc = diag * x[std::size_t(i)];
            if (i > 0) acc -= double(s.b) * x[std::size_t(i - 1)];
            if (i < n - 1) acc -= double(s.b) * x[std::size_t(i + 1)];
            err = std::max(err, std::abs(acc - rhs[std::size_t(i)]));
            xmax = std::max(xmax, std::abs(x[std::size_t(i)]));
        }
        CHECK(err <= 1e-10 * xmax * std::max(1.0, std::abs(s.c) + std::abs(s.d)));
    }
}

TEST_CASE("solve columns reproduce the dense inverse") {
    const TridiagSpec s = TridiagSpec::make(30, -1, 1.2, 0.7);
    REQUIRE(bool(is_invertible(s)));
    const DenseMatrix inv = oracle::invert_dense(oracle::materialize(s));
    for (std::int64_t j = 0; j < 30; ++j) {
        std::vector<double> e(30, 0.0);
        e[std::size_t(j)] = 1.0;
        const auto col = oracle::solve_tridiagonal(s, e);
        for (std::int64_t i = 0; i < 30; ++i)
            CHECK(col[std::size_t(i)]
                  == doctest::Approx(inv(i, j)).epsilon(1e-9));
    }
}
