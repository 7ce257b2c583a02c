#include "lieforge/analysis.hpp"
#include "lieforge/jacobi_system.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <tuple>

using namespace lieforge;

namespace {

// Counts unknowns by listing them, independently of the closed form.
std::int64_t brute_force_unknowns(int dim) {
    std::set<std::tuple<int, int, int>> seen;
    for (int i = 1; i < dim; ++i)
        for (int j = 1; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                if (i < j) seen.emplace(i, j, k);
    return static_cast<std::int64_t>(seen.size());
}

} // namespace

TEST_CASE("count_equations") {
    CHECK(count_equations(2) == 0);
    CHECK(count_equations(3) == 3);
    CHECK(count_equations(5) == 30);
    for (int n = 2; n <= 12; ++n) CHECK(count_equations(n) == brute_force_unknowns(n));
    CHECK_THROWS_AS(count_equations(1), ContractViolation);
}

TEST_CASE("linearize and delinearize round trip in lexicographic order") {
    for (int n = 3; n <= 10; ++n) {
        std::int64_t expected = 0;
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const UnknownIndex idx{i, j, k};
                    CHECK(linearize(idx, n) == expected);
                    CHECK(delinearize(expected, n) == idx);
                    ++expected;
                }
        CHECK(expected == count_equations(n));
    }
}

TEST_CASE("N = 3 diagonal algebra solves to zero unknowns") {
    Matrix<Real> a = Matrix<Real>::Zero(3, 3);
    a(1, 1) = 1.0;
    a(2, 2) = 1.0;
    const auto sys = assemble_system(a);
    CHECK(sys.dim_sys == 3);
    CHECK(sys.m.rows() == 3);
    const auto sol = solve_system(sys);
    CHECK(sol.unknowns.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.residual == 0.0);
}

TEST_CASE("assemble_system rejects a nonzero first row") {
    Matrix<Real> a = Matrix<Real>::Zero(3, 3);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(assemble_system(a), ContractViolation);
}

TEST_CASE("singular systems are reported") {
    SUBCASE("zero a-priori slice") {
        CHECK_THROWS_AS(solve_system(assemble_system<Real>(Matrix<Real>::Zero(4, 4))), SingularSystem);
    }
    SUBCASE("nilpotent sample has A_1 = 0") {
        const auto s = generate<Real>(4, Mode::nilpotent, 1);
        CHECK_THROWS_AS(oracle_structure_constants(s), SingularSystem);
    }
}

TEST_CASE("N = 2 gives an empty system") {
    const auto s = generate<Real>(2, Mode::generic, 6);
    const auto r = oracle_structure_constants(s);
    CHECK(r.system.dim_sys == 0);
    CHECK(r.solution.condition == 1.0);
    CHECK(compare_tensors(s.structure, r.structure, 0.0).max_diff == 0.0);
}

TEST_CASE_TEMPLATE("oracle reproduces the closed-form structure constants", S, Real, Complex) {
    for (int n = 3; n <= 7; ++n)
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto s = generate<S>(n, Mode::generic, seed);
            const auto r = oracle_structure_constants(s);
            INFO("n=", n, " seed=", seed, " cond=", r.solution.condition);
            if (r.solution.condition > 1e8) continue;
            const double scale = adjoint_scale(s.adjoint);
            CHECK(compare_tensors(s.structure, r.structure, 1e-8).passed);
            CHECK(compare_tensors(s.structure, r.structure, 0.0).max_diff <= 1e-8 * scale);
        }
}

TEST_CASE("substituting the true constants satisfies the system") {
    for (int n = 3; n <= 8; ++n) {
        const auto s = generate<Real>(n, Mode::generic, 99);
        const auto sys = assemble_system(a_priori_slice(s.structure));
        ColVector<Real> truth(sys.dim_sys);
        for (std::int64_t p = 0; p < sys.dim_sys; ++p) {
            const auto idx = delinearize(p, n);
            truth(p) = s.structure(idx.i, idx.j, idx.k);
        }
        const double scale = adjoint_scale(s.adjoint);
        CHECK((sys.m * truth - sys.rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale * scale);
    }
}

TEST_CASE("scatter_solution completes by antisymmetry") {
    const auto s = generate<Real>(5, Mode::generic, 12);
    const auto a = a_priori_slice(s.structure);
    ColVector<Real> u(count_equations(5));
    for (std::int64_t p = 0; p < u.size(); ++p) {
        const auto idx = delinearize(p, 5);
        u(p) = s.structure(idx.i, idx.j, idx.k);
    }
    const auto f = scatter_solution(a, u);
    CHECK(f.data() == s.structure.data());
}

TEST_CASE("size guard") {
    CHECK(count_equations(21) <= kOracleSizeGuard);
    CHECK(count_equations(22) > kOracleSizeGuard);
    const auto s = generate<Real>(22, Mode::generic, 1);
    CHECK_THROWS_AS(oracle_structure_constants(s), SizeGuard);
}

TEST_CASE("compare_tensors") {
    StructureTensor<Real> a(2), b(2);
    a(0, 1, 1) = 2.0;
    b(0, 1, 1) = 2.0 + 1e-6;
    const auto cmp = compare_tensors(a, b, 1e-6);
    CHECK(cmp.max_diff == doctest::Approx(1e-6));
    CHECK(cmp.location == std::array<int, 3>{0, 1, 1});
    CHECK(cmp.max_abs_reference == 2.0);
    CHECK(cmp.passed);
    CHECK_FALSE(compare_tensors(a, b, 1e-7).passed);
    CHECK_THROWS_AS(compare_tensors(a, StructureTensor<Real>(3), 1.0), ContractViolation);
}
