#pragma once

#include "lieforge/types.hpp"

#include <optional>

namespace lieforge {

/// A*B - B*A, computed as two full products and one subtraction.
template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b);

template <class S>
S trace(const Matrix<S>& a);

/// Max absolute row sum.
template <class S>
double inf_norm(const Matrix<S>& a);

template <class S>
double max_abs(const Matrix<S>& a);

/// Row vector e_k of length dim (zero-based k).
template <class S>
RowVector<S> unit_row(std::ptrdiff_t dim, std::ptrdiff_t k);

template <class S>
struct LeftNullResult {
    int rank = 0;
    /// Present iff rank == N-1. Unit 2-norm, phase fixed so the first
    /// component with magnitude above kPhaseAnchorThreshold is real positive.
    std::optional<RowVector<S>> n;
    double largest_sv = 0.0;
    /// Smallest singular value counted in the rank (0 when rank == 0).
    double smallest_retained_sv = 0.0;
    /// Effective rank threshold tau.
    double threshold = 0.0;
    /// ||n*P||_inf, 0 when n is absent.
    double residual = 0.0;
};

inline constexpr double kPhaseAnchorThreshold = 1e-10;

/// Rank and left null vector of a square matrix via SVD. tol_rank = 0 selects
/// tau = N * eps * sigma_max; otherwise tau = max(tol_rank, N * eps * sigma_max).
template <class S>
LeftNullResult<S> rank_and_left_null(const Matrix<S>& p, double tol_rank = 0.0);

/// Residual bound tau' = factor * N * eps * ||P||_inf for a left null vector.
template <class S>
double null_residual_tolerance(const Matrix<S>& p, double factor = 64.0);

} // namespace lieforge
