#include "lieforge/jacobi_system.hpp"

#include "lieforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace lieforge {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::int64_t pair_offset(int i, int dim) {
    // Number of pairs (a, b), 1 <= a < b < dim, with a < i.
    const std::int64_t before = i - 1;
    return before * (dim - 1) - before * i / 2;
}

std::int64_t pair_index(int i, int j, int dim) {
    return pair_offset(i, dim) + (j - i - 1);
}

template <class S>
struct LuFactors {
    Matrix<S> lu;
    std::vector<Eigen::Index> perm;  // row perm[r] of M sits at row r of LU
    double min_pivot = 0.0;
};

template <class S>
LuFactors<S> lu_factor(const Matrix<S>& m, double pivot_tol) {
    const Eigen::Index n = m.rows();
    LuFactors<S> f{m, std::vector<Eigen::Index>(n), std::numeric_limits<double>::infinity()};
    for (Eigen::Index r = 0; r < n; ++r) f.perm[r] = r;
    auto& a = f.lu;
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index piv = col;
        double best = std::abs(a(col, col));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        f.min_pivot = std::min(f.min_pivot, best);
        if (best <= pivot_tol) {
            std::ostringstream msg;
            msg << "singular system: pivot " << best << " at column " << col << " is at or below " << pivot_tol;
            throw SingularSystem(msg.str());
        }
        if (piv != col) {
            a.row(piv).swap(a.row(col));
            std::swap(f.perm[piv], f.perm[col]);
        }
        const S pivot = a(col, col);
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const S factor = a(r, col) / pivot;
            a(r, col) = factor;
            if (factor != S{0}) a.row(r).tail(n - col - 1) -= factor * a.row(col).tail(n - col - 1);
        }
    }
    if (n == 0) f.min_pivot = 0.0;
    return f;
}

template <class S>
ColVector<S> lu_solve(const LuFactors<S>& f, const ColVector<S>& b) {
    const auto& a = f.lu;
    const Eigen::Index n = a.rows();
    ColVector<S> x(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        S sum = b(f.perm[r]);
        for (Eigen::Index c = 0; c < r; ++c) sum -= a(r, c) * x(c);
        x(r) = sum;
    }
    for (Eigen::Index r = n - 1; r >= 0; --r) {
        S sum = x(r);
        for (Eigen::Index c = r + 1; c < n; ++c) sum -= a(r, c) * x(c);
        x(r) = sum / a(r, r);
    }
    return x;
}

template <class S>
S conj_if(const S& v) {
    if constexpr (is_complex_v<S>)
        return std::conj(v);
    else
        return v;
}

/// Solves M^H z = c given P M = L U, i.e. M^H = U^H L^H P.
template <class S>
ColVector<S> lu_solve_adjoint(const LuFactors<S>& f, const ColVector<S>& c) {
    const auto& a = f.lu;
    const Eigen::Index n = a.rows();
    ColVector<S> w(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        S sum = c(r);
        for (Eigen::Index k = 0; k < r; ++k) sum -= conj_if(a(k, r)) * w(k);
        w(r) = sum / conj_if(a(r, r));
    }
    for (Eigen::Index r = n - 1; r >= 0; --r) {
        S sum = w(r);
        for (Eigen::Index k = r + 1; k < n; ++k) sum -= conj_if(a(k, r)) * w(k);
        w(r) = sum;
    }
    ColVector<S> z(n);
    for (Eigen::Index r = 0; r < n; ++r) z(f.perm[r]) = w(r);
    return z;
}

template <class S>
double one_norm(const Matrix<S>& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// Hager's estimate of ||M^-1||_1 with Higham's alternate test vector.
template <class S>
double inverse_one_norm_estimate(const LuFactors<S>& f) {
    const Eigen::Index n = f.lu.rows();
    if (n == 0) return 0.0;
    ColVector<S> x = ColVector<S>::Constant(n, S{1.0 / static_cast<double>(n)});
    double estimate = 0.0;
    Eigen::Index last = -1;
    for (int iter = 0; iter < 5; ++iter) {
        const ColVector<S> y = lu_solve(f, x);
        estimate = std::max(estimate, y.cwiseAbs().sum());
        ColVector<S> xi(n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const double mag = std::abs(y(r));
            xi(r) = mag > 0.0 ? y(r) / mag : S{1};
        }
        const ColVector<S> z = lu_solve_adjoint(f, xi);
        Eigen::Index arg = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&arg);
        const double ztx = std::real(z.dot(x));
        if (zmax <= ztx || arg == last) break;
        x = ColVector<S>::Zero(n);
        x(arg) = S{1};
        last = arg;
    }
    ColVector<S> alt(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        alt(r) = S{sign * (1.0 + (n > 1 ? static_cast<double>(r) / static_cast<double>(n - 1) : 0.0))};
    }
    const double alt_est = 2.0 * lu_solve(f, alt).cwiseAbs().sum() / (3.0 * static_cast<double>(n));
    return std::max(estimate, alt_est);
}

} // namespace

std::int64_t count_equations(int dim) {
    if (dim < 2) throw ContractViolation("count_equations: dimension must be >= 2");
    const std::int64_t n = dim;
    return n * (n - 1) * (n - 2) / 2;
}

std::int64_t linearize(const UnknownIndex& idx, int dim) {
    if (!(1 <= idx.i && idx.i < idx.j && idx.j < dim && 0 <= idx.k && idx.k < dim))
        throw ContractViolation("linearize: index outside the unknown range");
    return pair_index(idx.i, idx.j, dim) * dim + idx.k;
}

UnknownIndex delinearize(std::int64_t position, int dim) {
    if (dim < 3 || position < 0 || position >= count_equations(dim))
        throw ContractViolation("delinearize: position out of range");
    const std::int64_t pair = position / dim;
    UnknownIndex idx;
    idx.k = static_cast<int>(position % dim);
    idx.i = 1;
    while (pair_offset(idx.i + 1, dim) <= pair) ++idx.i;
    idx.j = static_cast<int>(pair - pair_offset(idx.i, dim)) + idx.i + 1;
    return idx;
}

template <class S>
AssembledSystem<S> assemble_system(const Matrix<S>& a_priori) {
    const auto dim = static_cast<int>(a_priori.rows());
    if (dim < 2 || a_priori.cols() != dim) throw ContractViolation("assemble_system: a-priori slice must be N x N, N >= 2");
    for (int k = 0; k < dim; ++k)
        if (a_priori(0, k) != S{0}) throw ContractViolation("assemble_system: f{1,1,k} must be zero");

    AssembledSystem<S> sys;
    sys.dim = dim;
    sys.dim_sys = count_equations(dim);
    sys.m = Matrix<S>::Zero(sys.dim_sys, sys.dim_sys);
    sys.rhs = ColVector<S>::Zero(sys.dim_sys);

    // Adds coef * f{p,q,r} to equation `row`: known factors go to the
    // right-hand side, unknowns are canonicalized to p < q.
    auto add_term = [&](std::int64_t row, const S& coef, int p, int q, int r) {
        if (coef == S{0} || p == q) return;
        if (p == 0) {
            sys.rhs(row) -= coef * a_priori(q, r);
        } else if (q == 0) {
            sys.rhs(row) += coef * a_priori(p, r);
        } else if (p < q) {
            sys.m(row, linearize({p, q, r}, dim)) += coef;
        } else {
            sys.m(row, linearize({q, p, r}, dim)) -= coef;
        }
    };

    for (int j = 1; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            for (int m = 0; m < dim; ++m) {
                const std::int64_t row = linearize({j, k, m}, dim);
                // sum_l f{1,j,l} f{k,l,m} - f{1,k,l} f{j,l,m} + f{1,l,m} f{j,k,l} = 0
                for (int l = 0; l < dim; ++l) {
                    add_term(row, a_priori(j, l), k, l, m);
                    add_term(row, -a_priori(k, l), j, l, m);
                    add_term(row, a_priori(l, m), j, k, l);
                }
            }
        }
    }
    return sys;
}

template <class S>
SystemSolution<S> solve_system(const AssembledSystem<S>& sys) {
    SystemSolution<S> out;
    const auto n = static_cast<Eigen::Index>(sys.dim_sys);
    if (n == 0) {
        out.unknowns = ColVector<S>(0);
        return out;
    }
    const double pivot_tol = static_cast<double>(n) * kEps * inf_norm(sys.m);
    const auto factors = lu_factor(sys.m, pivot_tol);
    out.unknowns = lu_solve(factors, sys.rhs);
    out.min_pivot = factors.min_pivot;
    out.residual = (sys.m * out.unknowns - sys.rhs).cwiseAbs().maxCoeff();
    out.condition = one_norm(sys.m) * inverse_one_norm_estimate(factors);
    return out;
}

template <class S>
Matrix<S> a_priori_slice(const StructureTensor<S>& f) {
    const int dim = f.dim();
    Matrix<S> a(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) a(j, k) = f(0, j, k);
    return a;
}

template <class S>
StructureTensor<S> scatter_solution(const Matrix<S>& a_priori, const ColVector<S>& unknowns) {
    const auto dim = static_cast<int>(a_priori.rows());
    if (unknowns.size() != count_equations(dim)) throw ContractViolation("scatter_solution: size mismatch");
    StructureTensor<S> f(dim);
    for (int j = 1; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
            f(0, j, k) = a_priori(j, k);
            f(j, 0, k) = -a_priori(j, k);
        }
    for (std::int64_t pos = 0; pos < unknowns.size(); ++pos) {
        const auto idx = delinearize(pos, dim);
        f(idx.i, idx.j, idx.k) = unknowns(pos);
        f(idx.j, idx.i, idx.k) = -unknowns(pos);
    }
    return f;
}

template <class S>
OracleResult<S> oracle_structure_constants(const Sample<S>& sample) {
    const int dim = sample.dim();
    const auto dim_sys = count_equations(dim);
    if (dim_sys > kOracleSizeGuard) {
        std::ostringstream msg;
        msg << "oracle size guard: N = " << dim << " gives " << dim_sys << " unknowns, limit " << kOracleSizeGuard;
        throw SizeGuard(msg.str());
    }
    OracleResult<S> out;
    const Matrix<S> a_priori = a_priori_slice(sample.structure);
    out.system = assemble_system(a_priori);
    out.solution = solve_system(out.system);
    out.structure = scatter_solution(a_priori, out.solution.unknowns);
    return out;
}

template <class S>
TensorComparison compare_tensors(const StructureTensor<S>& a, const StructureTensor<S>& b, double tol) {
    if (a.dim() != b.dim()) throw ContractViolation("compare_tensors: dimension mismatch");
    const int dim = a.dim();
    TensorComparison out;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) {
                out.max_abs_reference = std::max(out.max_abs_reference, std::abs(a(i, j, k)));
                const double d = std::abs(a(i, j, k) - b(i, j, k));
                if (d > out.max_diff) {
                    out.max_diff = d;
                    out.location = {i, j, k};
                }
            }
    out.passed = out.max_diff <= tol * (1.0 + out.max_abs_reference);
    return out;
}

#define LIEFORGE_INSTANTIATE(S)                                                                        \
    template AssembledSystem<S> assemble_system<S>(const Matrix<S>&);                                  \
    template SystemSolution<S> solve_system<S>(const AssembledSystem<S>&);                             \
    template Matrix<S> a_priori_slice<S>(const StructureTensor<S>&);                                   \
    template StructureTensor<S> scatter_solution<S>(const Matrix<S>&, const ColVector<S>&);            \
    template OracleResult<S> oracle_structure_constants<S>(const Sample<S>&);                          \
    template TensorComparison compare_tensors<S>(const StructureTensor<S>&, const StructureTensor<S>&, \
                                                 double);

LIEFORGE_INSTANTIATE(Real)
LIEFORGE_INSTANTIATE(Complex)

#undef LIEFORGE_INSTANTIATE

} // namespace lieforge
