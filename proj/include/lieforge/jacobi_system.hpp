#pragma once

#include "lieforge/generator.hpp"

#include <array>
#include <cstdint>

namespace lieforge {

// Independent route to the structure constants: fix the first basis element,
// treat f{1,j,k} as known and solve the Jacobi identities with i = 1 as a
// square linear system in the remaining constants. Code indices are
// zero-based, so "1" is index 0 throughout.

/// N (N-1) (N-2) / 2
std::int64_t count_equations(int dim);

/// Unknown f{i,j,k} with 1 <= i < j < N and 0 <= k < N (zero-based).
struct UnknownIndex {
    int i = 0;
    int j = 0;
    int k = 0;

    bool operator==(const UnknownIndex&) const = default;
};

/// Lexicographic position of (i, j, k) over the unknown ranges.
std::int64_t linearize(const UnknownIndex& idx, int dim);
UnknownIndex delinearize(std::int64_t position, int dim);

/// Largest system the oracle will assemble densely.
inline constexpr std::int64_t kOracleSizeGuard = 4000;

template <class S>
struct AssembledSystem {
    int dim = 0;
    std::int64_t dim_sys = 0;
    Matrix<S> m;
    ColVector<S> rhs;
};

/// Rows follow the equation order (j, k, m), 1 <= j < k < N, 0 <= m < N,
/// which coincides with the unknown order. a_priori(j, k) = f{1,j,k}; its
/// first row must be zero.
template <class S>
AssembledSystem<S> assemble_system(const Matrix<S>& a_priori);

template <class S>
struct SystemSolution {
    ColVector<S> unknowns;
    double residual = 0.0;
    /// 1-norm condition number estimate (Hager's method on the LU factors).
    double condition = 1.0;
    double min_pivot = 0.0;
};

/// Dense LU with partial pivoting. Throws SingularSystem when a pivot
/// magnitude is at or below dim_sys * eps * ||M||_inf.
template <class S>
SystemSolution<S> solve_system(const AssembledSystem<S>& sys);

/// f{1,j,k} read off a sample's structure tensor.
template <class S>
Matrix<S> a_priori_slice(const StructureTensor<S>& f);

/// The a-priori slice plus the solved unknowns, completed by antisymmetry.
template <class S>
StructureTensor<S> scatter_solution(const Matrix<S>& a_priori, const ColVector<S>& unknowns);

template <class S>
struct OracleResult {
    StructureTensor<S> structure;
    AssembledSystem<S> system;
    SystemSolution<S> solution;
};

/// Throws SizeGuard when count_equations(N) > kOracleSizeGuard and
/// SingularSystem on pivot breakdown.
template <class S>
OracleResult<S> oracle_structure_constants(const Sample<S>& sample);

struct TensorComparison {
    double max_diff = 0.0;
    std::array<int, 3> location{0, 0, 0};
    double max_abs_reference = 0.0;
    bool passed = true;
};

/// Passes iff max |a - b| <= tol * (1 + max |a|).
template <class S>
TensorComparison compare_tensors(const StructureTensor<S>& a, const StructureTensor<S>& b, double tol);

} // namespace lieforge
