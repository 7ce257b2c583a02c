#pragma once

#include "lieforge/generator.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lieforge {

// Residual checks for the identities a generated algebra must satisfy. All
// indices are zero-based. Matrix norms are max-row-sum (infinity) norms.

struct JacobiReport {
    double max_residual = 0.0;
    /// (i, j, k, m) of the worst Jacobi sum; ties go to the lexicographically smallest.
    std::array<int, 4> worst_indices{0, 0, 0, 0};
    std::uint64_t checked_count = 0;
    bool sampled = false;
};

struct JacobiMode {
    bool sampled = false;
    std::uint64_t count = 0;
    std::uint64_t seed = 0;

    static JacobiMode full() { return {}; }
    static JacobiMode sampled_with(std::uint64_t count, std::uint64_t seed) { return {true, count, seed}; }
};

/// Sampling policy for the per-pair checks. limit: largest N checked
/// exhaustively; above it `samples` seeded draws are used instead.
struct PairSampling {
    int limit = 30;
    std::uint64_t samples = 256;
    std::uint64_t seed = 0x5eed;
};

template <class S>
struct KillingReport {
    /// K{i,j} = Tr(A_i A_j); empty when the check ran in sampled mode.
    Matrix<S> killing;
    double max_cartan_residual = 0.0;
    /// max |K{i,j} - K{j,i}|
    double asymmetry = 0.0;
    bool sampled = false;
};

enum class SeriesKind { derived, lower_central };

struct SeriesReport {
    SeriesKind kind = SeriesKind::lower_central;
    int depth_tested = 0;
    bool terminated = false;
    /// First level whose max norm is within the zero threshold; -1 if none.
    int termination_level = -1;
    std::vector<double> max_norm_per_level;
    /// Per-level max |nested - closed form|.
    std::vector<double> discrepancy_per_level;
    double zero_threshold = 0.0;
    /// Paths evaluated: outer indices (level order), then (j, k).
    std::vector<std::vector<int>> paths;
};

/// The bracket [A_i, A_j] in factored form P^2 m_{j,i}^T n.
template <class S>
struct BracketFactorization {
    int i = 0;
    int j = 0;
    /// n{j} e_i^T - n{i} e_j^T
    ColVector<S> m_vector;
    Matrix<S> value;
};

/// max_k ||A_k||_inf
template <class S>
double adjoint_scale(const AdjointRep<S>& adj);

template <class S>
JacobiReport jacobi_residual(const StructureTensor<S>& f, const JacobiMode& mode = JacobiMode::full());

/// max |f{i,j,k} + f{j,i,k}| over all indices, including the diagonal i == j.
template <class S>
double antisymmetry_residual(const StructureTensor<S>& f);

/// max_{i<j} || [A_i, A_j] - sum_k A_i{k,j} A_k ||
template <class S>
double closure_residual(const AdjointRep<S>& adj, const PairSampling& sampling = {});

/// max || [[A_i, A_j], [A_k, A_l]] || over pairs of pairs.
template <class S>
double derived_abelian_residual(const AdjointRep<S>& adj, const PairSampling& sampling = {12, 4096, 0x5eed});

template <class S>
KillingReport<S> cartan_residual(const AdjointRep<S>& adj, const PairSampling& sampling = {});

template <class S>
BracketFactorization<S> factor_bracket(const ParameterMatrix<S>& params, const NullData<S>& null, int i, int j);

/// Nested brackets [A_iL, ... [A_i1, [A_j, A_k]]] along a fixed path (all
/// outer indices 0; (j, k) = (1, 2), or (0, 1) when N = 2) and a seeded random
/// path, levels 0..l_max, cross-checked against n{iL}..n{i1} P^{L+2} m_{k,j}^T n.
template <class S>
SeriesReport lower_central_series(const AdjointRep<S>& adj, const ParameterMatrix<S>& params,
                                  const NullData<S>& null, int l_max, double tol = 1e-9,
                                  std::uint64_t path_seed = 0x5eed);

/// ||P^N||_inf (by repeated squaring).
template <class S>
double nilpotency_residual(const ParameterMatrix<S>& params);

/// ||P^N||_inf <= tol * ||P||_inf^N
template <class S>
bool nilpotency_check(const ParameterMatrix<S>& params, double tol = 1e-9);

/// max over j, k of ||T_j T_k - n{j} T_k|| and ||A_j T_k - n{j} A_k||.
template <class S>
double t_product_residual(const ParameterMatrix<S>& params, const NullData<S>& null,
                          const AdjointRep<S>& adj, const PairSampling& sampling = {});

/// max_k || n A_k ||
template <class S>
double null_space_residual(const NullData<S>& null, const AdjointRep<S>& adj);

/// max_k || A_k - (n{k} P - p_k n) ||. The identities above are intrinsic to
/// the algebra; this one ties it to the document's own P and n. Without it a
/// perturbation that yields another valid algebra (e.g. adding a central
/// component in nilpotent mode) would go unnoticed.
template <class S>
double construction_residual(const ParameterMatrix<S>& params, const NullData<S>& null,
                             const AdjointRep<S>& adj);

struct VerifyConfig {
    double tol = 1e-9;
    int jacobi_full_limit = 30;
    std::uint64_t jacobi_samples = 1'000'000;
    PairSampling pairs{30, 256, 0x5eed};
    PairSampling derived{12, 4096, 0x5eed};
    /// 0 selects N.
    int series_depth = 0;
    /// Upper bound on the series depth; 0 means none.
    int series_depth_cap = 0;
    std::uint64_t seed = 0x5eed;
    /// Empty runs every check.
    std::vector<std::string> checks;

    /// Reduced sampling used by the benchmark harness.
    static VerifyConfig quick();
};

/// Names accepted by VerifyConfig::checks, in report order.
const std::vector<std::string>& check_names();

struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    std::string detail;
};

struct VerificationReport {
    int dim = 0;
    Field field = Field::real;
    Mode mode = Mode::generic;
    double scale = 0.0;
    std::vector<CheckResult> checks;

    bool passed() const;
};

template <class S>
VerificationReport verify_all(const Sample<S>& sample, const VerifyConfig& config = {});

VerificationReport verify_all(const AnySample& sample, const VerifyConfig& config = {});

} // namespace lieforge
