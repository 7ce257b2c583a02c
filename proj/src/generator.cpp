#include "lieforge/generator.hpp"

#include "lieforge/linalg.hpp"

#include <cmath>
#include <sstream>

namespace lieforge {

namespace {

template <class S>
S draw(NormalRng& rng) {
    if constexpr (is_complex_v<S>) {
        const double re = rng.normal();
        const double im = rng.normal();
        return {re, im};
    } else {
        return rng.normal();
    }
}

// x + 0.0 maps -0.0 to +0.0 and leaves every other value unchanged, so
// zero entries serialize and reconstruct identically.
inline Real canonical_zero(Real x) { return x + 0.0; }
inline Complex canonical_zero(Complex x) { return {x.real() + 0.0, x.imag() + 0.0}; }

} // namespace

template <class S>
ParameterMatrix<S> sample_parameter_matrix(int dim, Mode mode, NormalRng& rng) {
    if (dim < 2) throw UnsupportedDimension("dimension must be >= 2, got " + std::to_string(dim));
    ParameterMatrix<S> out;
    out.mode = mode;
    out.p = Matrix<S>::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const int first = mode == Mode::generic ? 1 : i + 1;
        for (int j = first; j < dim; ++j) out.p(i, j) = draw<S>(rng);
    }
    return out;
}

template <class S>
NullData<S> validate_parameter_matrix(const ParameterMatrix<S>& params, const Tolerances& tol) {
    const auto& p = params.p;
    const int dim = params.dim();
    auto result = rank_and_left_null(p, tol.rank);
    if (result.rank != dim - 1 || !result.n) {
        std::ostringstream msg;
        msg << "degenerate parameters: rank " << result.rank << ", expected " << dim - 1;
        throw DegenerateParameters(msg.str());
    }
    const double bound = null_residual_tolerance(p, tol.null_residual_factor);
    if (result.residual > bound) {
        std::ostringstream msg;
        msg << "degenerate parameters: null residual " << result.residual << " exceeds " << bound;
        throw DegenerateParameters(msg.str());
    }

    NullData<S> out;
    out.n = std::move(*result.n);
    out.smallest_retained_sv = result.smallest_retained_sv;
    out.residual = result.residual;
    const double first = std::abs(out.n(0));
    if (first >= tol.null_first) {
        out.c = S{1} / out.n(0);
    } else if (params.mode == Mode::generic) {
        std::ostringstream msg;
        msg << "null-first-component: |n{1}| = " << first << " below " << tol.null_first;
        throw NullFirstComponent(msg.str());
    }
    return out;
}

template <class S>
AdjointRep<S> build_adjoint(const ParameterMatrix<S>& params, const NullData<S>& null) {
    const auto& p = params.p;
    const auto& n = null.n;
    const int dim = params.dim();
    if (n.size() != dim) throw ContractViolation("build_adjoint: null vector length mismatch");

    AdjointRep<S> adj;
    adj.matrices.reserve(dim);
    for (int k = 0; k < dim; ++k) {
        Matrix<S> a(dim, dim);
        const S nk = n(k);
        for (int i = 0; i < dim; ++i) {
            const S pik = p(i, k);
            for (int j = 0; j < dim; ++j) a(i, j) = canonical_zero(nk * p(i, j) - pik * n(j));
        }
        adj.matrices.push_back(std::move(a));
    }
    return adj;
}

template <class S>
StructureTensor<S> adjoint_to_structure(const AdjointRep<S>& adj) {
    const int dim = adj.dim();
    StructureTensor<S> f(dim);
    for (int k = 0; k < dim; ++k) {
        const auto& a = adj[k];
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) f(k, j, i) = a(i, j);
    }
    return f;
}

template <class S>
AdjointRep<S> structure_to_adjoint(const StructureTensor<S>& f) {
    const int dim = f.dim();
    AdjointRep<S> adj;
    adj.matrices.assign(dim, Matrix<S>(dim, dim));
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) adj[k](i, j) = f(k, j, i);
    return adj;
}

template <class S>
Matrix<S> transfer_matrix(const RowVector<S>& n, int k) {
    const auto dim = n.size();
    if (k < 0 || k >= dim) throw ContractViolation("transfer_matrix: index out of range");
    Matrix<S> t = n(k) * Matrix<S>::Identity(dim, dim);
    t.row(k) -= n;
    return t;
}

template <class S>
Sample<S> generate(int dim, Mode mode, std::uint64_t seed, int max_attempts, const Tolerances& tol) {
    if (dim < 2) throw UnsupportedDimension("dimension must be >= 2, got " + std::to_string(dim));
    if (max_attempts < 1) throw ContractViolation("max_attempts must be >= 1");

    NormalRng rng(seed);
    Sample<S> sample;
    sample.mode = mode;
    sample.seed = seed;
    sample.rng_id = std::string(NormalRng::kId);
    sample.tolerances = tol;

    std::string last_failure;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        auto params = sample_parameter_matrix<S>(dim, mode, rng);
        try {
            sample.null = validate_parameter_matrix(params, tol);
        } catch (const DegenerateParameters& e) {
            last_failure = e.what();
            sample.rejections.push_back("attempt " + std::to_string(attempt) + ": " + last_failure);
            continue;
        } catch (const NullFirstComponent& e) {
            last_failure = e.what();
            sample.rejections.push_back("attempt " + std::to_string(attempt) + ": " + last_failure);
            continue;
        }
        sample.attempts = attempt;
        sample.parameters = std::move(params);
        sample.adjoint = build_adjoint(sample.parameters, sample.null);
        sample.structure = adjoint_to_structure(sample.adjoint);
        return sample;
    }
    throw GenerationFailed("generation failed after " + std::to_string(max_attempts) +
                               " attempts; last failure: " + last_failure,
                           last_failure);
}

AnySample generate_any(int dim, Field field, Mode mode, std::uint64_t seed, int max_attempts,
                       const Tolerances& tol) {
    if (field == Field::complex) return generate<Complex>(dim, mode, seed, max_attempts, tol);
    return generate<Real>(dim, mode, seed, max_attempts, tol);
}

#define LIEFORGE_INSTANTIATE(S)                                                                  \
    template ParameterMatrix<S> sample_parameter_matrix<S>(int, Mode, NormalRng&);               \
    template NullData<S> validate_parameter_matrix<S>(const ParameterMatrix<S>&,                 \
                                                      const Tolerances&);                        \
    template AdjointRep<S> build_adjoint<S>(const ParameterMatrix<S>&, const NullData<S>&);      \
    template StructureTensor<S> adjoint_to_structure<S>(const AdjointRep<S>&);                   \
    template AdjointRep<S> structure_to_adjoint<S>(const StructureTensor<S>&);                   \
    template Matrix<S> transfer_matrix<S>(const RowVector<S>&, int);                             \
    template Sample<S> generate<S>(int, Mode, std::uint64_t, int, const Tolerances&);

LIEFORGE_INSTANTIATE(Real)
LIEFORGE_INSTANTIATE(Complex)

#undef LIEFORGE_INSTANTIATE

} // namespace lieforge
