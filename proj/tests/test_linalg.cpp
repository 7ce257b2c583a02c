#include "lieforge/linalg.hpp"
#include "lieforge/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

using namespace lieforge;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Matrix<Real> mat(int rows, int cols, std::initializer_list<double> values) {
    Matrix<Real> m(rows, cols);
    auto it = values.begin();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = *it++;
    return m;
}

Matrix<Real> random_real(int n, NormalRng& rng) {
    Matrix<Real> m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = rng.normal();
    return m;
}

} // namespace

TEST_CASE("commutator with identity and with itself vanishes") {
    NormalRng rng(3);
    const auto b = random_real(5, rng);
    const Matrix<Real> id = Matrix<Real>::Identity(5, 5);
    CHECK(max_abs(commutator(id, b)) == 0.0);
    CHECK(max_abs(commutator(b, b)) == 0.0);
}

TEST_CASE("commutator of diag(0,1) and [[0,0],[-1,0]]") {
    const auto a1 = mat(2, 2, {0, 0, 0, 1});
    const auto a2 = mat(2, 2, {0, 0, -1, 0});
    // A1 A2 = [[0,0],[-1,0]], A2 A1 = 0.
    CHECK(commutator(a1, a2) == mat(2, 2, {0, 0, -1, 0}));
}

TEST_CASE("commutator is exactly antisymmetric") {
    NormalRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_real(6, rng);
        const auto b = random_real(6, rng);
        CHECK(commutator(a, b) == Matrix<Real>(-commutator(b, a)));
    }
}

TEST_CASE("commutator rejects mismatched shapes") {
    CHECK_THROWS_AS(commutator<Real>(Matrix<Real>::Zero(2, 2), Matrix<Real>::Zero(3, 3)), ContractViolation);
    CHECK_THROWS_AS(commutator<Real>(Matrix<Real>::Zero(2, 3), Matrix<Real>::Zero(2, 3)), ContractViolation);
}

TEST_CASE("trace") {
    CHECK(trace<Real>(Matrix<Real>::Identity(4, 4)) == 4.0);
    CHECK(trace(mat(2, 2, {0, 0, 0, 1})) == 1.0);
    CHECK(trace(mat(2, 2, {0, 0, -1, 0})) == 0.0);
}

TEST_CASE("rank_and_left_null on hand examples") {
    SUBCASE("[[0,0],[0,1]] -> n = (1,0)") {
        const auto r = rank_and_left_null(mat(2, 2, {0, 0, 0, 1}));
        CHECK(r.rank == 1);
        REQUIRE(r.n);
        CHECK((*r.n)(0) == doctest::Approx(1.0));
        CHECK(std::abs((*r.n)(1)) < 1e-15);
    }
    SUBCASE("[[0,1],[0,0]] -> n = (0,1)") {
        const auto r = rank_and_left_null(mat(2, 2, {0, 1, 0, 0}));
        CHECK(r.rank == 1);
        REQUIRE(r.n);
        CHECK(std::abs((*r.n)(0)) < 1e-15);
        CHECK((*r.n)(1) == doctest::Approx(1.0));
    }
    SUBCASE("zero 3x3 has rank 0 and no null vector") {
        const auto r = rank_and_left_null<Real>(Matrix<Real>::Zero(3, 3));
        CHECK(r.rank == 0);
        CHECK_FALSE(r.n);
    }
    SUBCASE("full rank has no null vector") {
        const auto r = rank_and_left_null<Real>(Matrix<Real>::Identity(3, 3));
        CHECK(r.rank == 3);
        CHECK_FALSE(r.n);
    }
}

TEST_CASE("tol_rank floors the rank threshold") {
    const auto p = mat(3, 3, {0, 1, 0, 0, 0, 1e-6, 0, 0, 0});
    CHECK(rank_and_left_null(p).rank == 2);
    CHECK(rank_and_left_null(p, 1e-3).rank == 1);
}

TEST_CASE("left null vector invariants on random rank N-1 matrices") {
    NormalRng rng(2024);
    for (int n = 2; n <= 12; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            Matrix<Real> p = random_real(n, rng);
            p.col(0).setZero();
            const auto r = rank_and_left_null(p);
            REQUIRE(r.rank == n - 1);
            REQUIRE(r.n);
            const auto& v = *r.n;
            CHECK(std::abs(v.norm() - 1.0) <= 4 * kEps);
            CHECK((v * p).cwiseAbs().maxCoeff() <= null_residual_tolerance(p));
            // First entry with magnitude above the anchor threshold is positive.
            const auto first = std::find_if(v.data(), v.data() + n,
                                            [](double x) { return std::abs(x) > kPhaseAnchorThreshold; });
            REQUIRE(first != v.data() + n);
            CHECK(*first > 0.0);
        }
    }
}

TEST_CASE("complex left null vector has real positive anchor") {
    NormalRng rng(77);
    for (int n = 2; n <= 8; ++n) {
        Matrix<Complex> p(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) p(r, c) = {rng.normal(), rng.normal()};
        p.col(0).setZero();
        const auto r = rank_and_left_null(p);
        REQUIRE(r.rank == n - 1);
        REQUIRE(r.n);
        const auto& v = *r.n;
        CHECK(std::abs(v.norm() - 1.0) <= 4 * kEps);
        CHECK((v * p).cwiseAbs().maxCoeff() <= null_residual_tolerance(p));
        CHECK(v(0).imag() == 0.0);
        CHECK(v(0).real() > 0.0);
    }
}

TEST_CASE("rank is invariant under row and column permutations") {
    NormalRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 6;
        // Rank deficiency of 1 or 2 via a zero column and a duplicated column.
        Matrix<Real> p = random_real(n, rng);
        p.col(0).setZero();
        if (trial % 2) p.col(n - 1) = p.col(1);
        const int rank = rank_and_left_null(p).rank;

        std::vector<int> rows(n), cols(n);
        std::iota(rows.begin(), rows.end(), 0);
        std::iota(cols.begin(), cols.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            std::swap(rows[i], rows[rng.uniform_below(i + 1)]);
            std::swap(cols[i], cols[rng.uniform_below(i + 1)]);
        }
        Matrix<Real> q(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) q(r, c) = p(rows[r], cols[c]);
        CHECK(rank_and_left_null(q).rank == rank);
    }
}

TEST_CASE("rank_and_left_null is deterministic") {
    NormalRng rng(9);
    Matrix<Real> p = random_real(7, rng);
    p.col(0).setZero();
    const auto a = rank_and_left_null(p);
    const auto b = rank_and_left_null(p);
    REQUIRE(a.n);
    REQUIRE(b.n);
    CHECK(std::equal(a.n->data(), a.n->data() + 7, b.n->data()));
}

TEST_CASE("NormalRng is reproducible and roughly standard normal") {
    NormalRng a(42), b(42), c(43);
    double sum = 0, sum2 = 0;
    bool differs = false;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double x = a.normal();
        CHECK_EQ(x, b.normal());
        differs |= x != c.normal();
        sum += x;
        sum2 += x * x;
    }
    CHECK(differs);
    CHECK(std::abs(sum / count) < 0.01);
    CHECK(std::abs(sum2 / count - 1.0) < 0.02);
}

TEST_CASE("uniform_below stays in range") {
    NormalRng rng(1);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_below(7)];
    for (const int h : hits) CHECK(h > 800);
}
