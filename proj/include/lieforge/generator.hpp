#pragma once

#include "lieforge/rng.hpp"
#include "lieforge/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lieforge {

struct Tolerances {
    /// Rank threshold floor; 0 selects N * eps * sigma_max.
    double rank = 0.0;
    /// Minimum |n{1}| for c = 1/n{1} to exist (generic mode requires it).
    double null_first = 1e-10;
    /// Multiplier k in the null residual bound k * N * eps * ||P||_inf.
    double null_residual_factor = 64.0;
    /// Relative tolerance for identity checks.
    double verify = 1e-9;

    bool operator==(const Tolerances&) const = default;
};

inline constexpr int kDefaultMaxAttempts = 16;

/// The a-priori matrix P. First column is zero; nilpotent mode keeps it
/// strictly upper-triangular.
template <class S>
struct ParameterMatrix {
    Mode mode = Mode::generic;
    Matrix<S> p;

    int dim() const { return static_cast<int>(p.rows()); }
};

template <class S>
struct NullData {
    RowVector<S> n;
    /// 1 / n{1}; absent when |n{1}| < Tolerances::null_first.
    std::optional<S> c;
    double smallest_retained_sv = 0.0;
    double residual = 0.0;
};

/// A_1..A_N with A_k{i,j} = f{k,j,i} (zero-based in code).
template <class S>
struct AdjointRep {
    std::vector<Matrix<S>> matrices;

    int dim() const { return static_cast<int>(matrices.size()); }
    const Matrix<S>& operator[](std::size_t k) const { return matrices[k]; }
    Matrix<S>& operator[](std::size_t k) { return matrices[k]; }
};

/// Dense f{i,j,k}: [g_i, g_j] = sum_k f{i,j,k} g_k.
template <class S>
class StructureTensor {
public:
    StructureTensor() = default;
    explicit StructureTensor(int dim)
        : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim, S{0}) {}

    int dim() const { return dim_; }

    S& operator()(int i, int j, int k) { return data_[offset(i, j, k)]; }
    const S& operator()(int i, int j, int k) const { return data_[offset(i, j, k)]; }

    const std::vector<S>& data() const { return data_; }

private:
    std::size_t offset(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
    }

    int dim_ = 0;
    std::vector<S> data_;
};

template <class S>
struct Sample {
    Mode mode = Mode::generic;
    std::uint64_t seed = 0;
    std::string rng_id;
    int attempts = 0;
    Tolerances tolerances;
    ParameterMatrix<S> parameters;
    NullData<S> null;
    AdjointRep<S> adjoint;
    StructureTensor<S> structure;
    /// One line per rejected draw, naming the failed precondition.
    std::vector<std::string> rejections;

    int dim() const { return parameters.dim(); }
    static constexpr Field field() { return field_of_v<S>; }
};

using AnySample = std::variant<Sample<Real>, Sample<Complex>>;

/// Draws P. Filled positions are visited row-major; for the complex field
/// each position takes its real part then its imaginary part.
template <class S>
ParameterMatrix<S> sample_parameter_matrix(int dim, Mode mode, NormalRng& rng);

/// Throws DegenerateParameters or NullFirstComponent on a rejected draw.
template <class S>
NullData<S> validate_parameter_matrix(const ParameterMatrix<S>& params, const Tolerances& tol = {});

/// A_k = n{k} P - p_k (x) n, the expanded form of P * T_k.
template <class S>
AdjointRep<S> build_adjoint(const ParameterMatrix<S>& params, const NullData<S>& null);

template <class S>
StructureTensor<S> adjoint_to_structure(const AdjointRep<S>& adj);

template <class S>
AdjointRep<S> structure_to_adjoint(const StructureTensor<S>& f);

/// Materialized T_k = n{k} 1 - e_k^T n.
template <class S>
Matrix<S> transfer_matrix(const RowVector<S>& n, int k);

template <class S>
Sample<S> generate(int dim, Mode mode, std::uint64_t seed, int max_attempts = kDefaultMaxAttempts,
                   const Tolerances& tol = {});

AnySample generate_any(int dim, Field field, Mode mode, std::uint64_t seed,
                       int max_attempts = kDefaultMaxAttempts, const Tolerances& tol = {});

} // namespace lieforge
