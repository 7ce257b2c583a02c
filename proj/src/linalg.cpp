#include "lieforge/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lieforge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class S>
void require_square(const Matrix<S>& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ContractViolation(std::string(what) + ": matrix must be square and non-empty");
}

} // namespace

std::string_view to_string(Field field) {
    return field == Field::real ? "real" : "complex";
}

std::string_view to_string(Mode mode) {
    return mode == Mode::generic ? "generic" : "nilpotent";
}

Field parse_field(std::string_view text) {
    if (text == "real") return Field::real;
    if (text == "complex") return Field::complex;
    throw ContractViolation("unknown field '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text) {
    if (text == "generic") return Mode::generic;
    if (text == "nilpotent") return Mode::nilpotent;
    throw ContractViolation("unknown mode '" + std::string(text) + "'");
}

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
    require_square(a, "commutator");
    require_square(b, "commutator");
    if (a.rows() != b.rows()) throw ContractViolation("commutator: dimension mismatch");
    Matrix<S> ab = a * b;
    Matrix<S> ba = b * a;
    return ab - ba;
}

template <class S>
S trace(const Matrix<S>& a) {
    require_square(a, "trace");
    S sum{0};
    for (Eigen::Index i = 0; i < a.rows(); ++i) sum += a(i, i);
    return sum;
}

template <class S>
double inf_norm(const Matrix<S>& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <class S>
double max_abs(const Matrix<S>& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

template <class S>
RowVector<S> unit_row(std::ptrdiff_t dim, std::ptrdiff_t k) {
    if (dim <= 0 || k < 0 || k >= dim) throw ContractViolation("unit_row: index out of range");
    RowVector<S> e = RowVector<S>::Zero(dim);
    e(k) = S{1};
    return e;
}

template <class S>
double null_residual_tolerance(const Matrix<S>& p, double factor) {
    return factor * static_cast<double>(p.rows()) * kEps * inf_norm(p);
}

template <class S>
LeftNullResult<S> rank_and_left_null(const Matrix<S>& p, double tol_rank) {
    require_square(p, "rank_and_left_null");
    if (!(tol_rank >= 0.0)) throw ContractViolation("rank_and_left_null: tol_rank must be >= 0");
    const Eigen::Index n_dim = p.rows();

    using ColMajor = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
    const ColMajor pc = p;
    Eigen::BDCSVD<ColMajor> svd(pc, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();

    LeftNullResult<S> out;
    out.largest_sv = sv.size() > 0 ? sv(0) : 0.0;
    out.threshold = std::max(tol_rank, static_cast<double>(n_dim) * kEps * out.largest_sv);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > out.threshold) ++rank;
    out.rank = rank;
    out.smallest_retained_sv = rank > 0 ? sv(rank - 1) : 0.0;
    if (rank != n_dim - 1) return out;

    // u^H P = sigma_N v^H, so the left null vector is the conjugated last
    // left singular vector.
    RowVector<S> n = svd.matrixU().col(n_dim - 1).adjoint();
    n /= n.norm();
    for (Eigen::Index i = 0; i < n_dim; ++i) {
        const double mag = std::abs(n(i));
        if (mag > kPhaseAnchorThreshold) {
            if constexpr (is_complex_v<S>) {
                n *= std::conj(n(i)) / mag;
                n(i) = S{mag};
            } else if (n(i) < 0.0) {
                n = -n;
            }
            break;
        }
    }
    out.residual = n_dim > 0 ? (n * p).cwiseAbs().maxCoeff() : 0.0;
    out.n = std::move(n);
    return out;
}

#define LIEFORGE_INSTANTIATE(S)                                                        \
    template Matrix<S> commutator<S>(const Matrix<S>&, const Matrix<S>&);              \
    template S trace<S>(const Matrix<S>&);                                             \
    template double inf_norm<S>(const Matrix<S>&);                                     \
    template double max_abs<S>(const Matrix<S>&);                                      \
    template RowVector<S> unit_row<S>(std::ptrdiff_t, std::ptrdiff_t);                 \
    template double null_residual_tolerance<S>(const Matrix<S>&, double);                 \
    template LeftNullResult<S> rank_and_left_null<S>(const Matrix<S>&, double);

LIEFORGE_INSTANTIATE(Real)
LIEFORGE_INSTANTIATE(Complex)

#undef LIEFORGE_INSTANTIATE

} // namespace lieforge
