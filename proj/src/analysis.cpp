#include "lieforge/analysis.hpp"

#include "lieforge/linalg.hpp"
#include "lieforge/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

namespace lieforge {

namespace {

using Pair = std::pair<int, int>;

template <class S>
S jacobi_sum(const StructureTensor<S>& f, int i, int j, int k, int m) {
    const int dim = f.dim();
    S a{0}, b{0}, c{0};
    for (int l = 0; l < dim; ++l) {
        a += f(i, j, l) * f(k, l, m);
        b += f(k, i, l) * f(j, l, m);
        c += f(j, k, l) * f(i, l, m);
    }
    return a + b + c;
}

std::vector<Pair> all_pairs(int dim) {
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(dim) * (dim - 1) / 2);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) pairs.emplace_back(i, j);
    return pairs;
}

Pair draw_pair(NormalRng& rng, int dim) {
    const auto d = static_cast<std::uint64_t>(dim);
    int i = static_cast<int>(rng.uniform_below(d));
    int j = static_cast<int>(rng.uniform_below(d - 1));
    if (j >= i) ++j;
    return {std::min(i, j), std::max(i, j)};
}

/// Exhaustive pairs below the limit, seeded draws above it.
std::vector<Pair> pairs_for(int dim, const PairSampling& sampling) {
    if (dim < 2) return {};
    if (dim <= sampling.limit) return all_pairs(dim);
    NormalRng rng(sampling.seed);
    std::vector<Pair> pairs;
    pairs.reserve(sampling.samples);
    for (std::uint64_t s = 0; s < sampling.samples; ++s) pairs.push_back(draw_pair(rng, dim));
    return pairs;
}

template <class S>
double trace_of_product(const Matrix<S>& a, const Matrix<S>& b, S* value = nullptr) {
    // Tr(A B) = sum_{r,c} A{r,c} B{c,r}
    const S t = a.cwiseProduct(b.transpose()).sum();
    if (value) *value = t;
    return std::abs(t);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

template <class S>
double adjoint_scale(const AdjointRep<S>& adj) {
    double scale = 0.0;
    for (const auto& a : adj.matrices) scale = std::max(scale, inf_norm(a));
    return scale;
}

template <class S>
JacobiReport jacobi_residual(const StructureTensor<S>& f, const JacobiMode& mode) {
    JacobiReport report;
    report.sampled = mode.sampled;
    const int dim = f.dim();
    if (dim < 3) return report;

    auto consider = [&](int i, int j, int k, int m) {
        const double r = std::abs(jacobi_sum(f, i, j, k, m));
        const std::array<int, 4> idx{i, j, k, m};
        ++report.checked_count;
        if (r > report.max_residual || (r == report.max_residual && idx < report.worst_indices)) {
            report.max_residual = r;
            report.worst_indices = idx;
        }
    };

    if (!mode.sampled) {
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                for (int k = j + 1; k < dim; ++k)
                    for (int m = 0; m < dim; ++m) consider(i, j, k, m);
        return report;
    }

    NormalRng rng(mode.seed);
    const auto d = static_cast<std::uint64_t>(dim);
    for (std::uint64_t s = 0; s < mode.count; ++s) {
        std::array<int, 3> t{};
        do {
            for (auto& x : t) x = static_cast<int>(rng.uniform_below(d));
        } while (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]);
        std::sort(t.begin(), t.end());
        const int m = static_cast<int>(rng.uniform_below(d));
        consider(t[0], t[1], t[2], m);
    }
    return report;
}

template <class S>
double antisymmetry_residual(const StructureTensor<S>& f) {
    const int dim = f.dim();
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            for (int k = 0; k < dim; ++k) worst = std::max(worst, std::abs(f(i, j, k) + f(j, i, k)));
    return worst;
}

template <class S>
double closure_residual(const AdjointRep<S>& adj, const PairSampling& sampling) {
    const int dim = adj.dim();
    double worst = 0.0;
    for (const auto& [i, j] : pairs_for(dim, sampling)) {
        Matrix<S> diff = commutator(adj[i], adj[j]);
        for (int k = 0; k < dim; ++k) {
            const S coef = adj[i](k, j);
            if (coef != S{0}) diff -= coef * adj[k];
        }
        worst = std::max(worst, inf_norm(diff));
    }
    return worst;
}

template <class S>
double derived_abelian_residual(const AdjointRep<S>& adj, const PairSampling& sampling) {
    const int dim = adj.dim();
    if (dim < 2) return 0.0;
    double worst = 0.0;
    if (dim <= sampling.limit) {
        const auto pairs = all_pairs(dim);
        std::vector<Matrix<S>> brackets;
        brackets.reserve(pairs.size());
        for (const auto& [i, j] : pairs) brackets.push_back(commutator(adj[i], adj[j]));
        for (std::size_t p = 0; p < brackets.size(); ++p)
            for (std::size_t q = p + 1; q < brackets.size(); ++q)
                worst = std::max(worst, inf_norm(commutator(brackets[p], brackets[q])));
        return worst;
    }
    NormalRng rng(sampling.seed);
    for (std::uint64_t s = 0; s < sampling.samples; ++s) {
        const auto [i, j] = draw_pair(rng, dim);
        const auto [k, l] = draw_pair(rng, dim);
        worst = std::max(worst,
                         inf_norm(commutator(commutator(adj[i], adj[j]), commutator(adj[k], adj[l]))));
    }
    return worst;
}

template <class S>
KillingReport<S> cartan_residual(const AdjointRep<S>& adj, const PairSampling& sampling) {
    const int dim = adj.dim();
    KillingReport<S> report;
    if (dim <= sampling.limit) {
        report.killing = Matrix<S>::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) trace_of_product(adj[i], adj[j], &report.killing(i, j));
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                report.asymmetry =
                    std::max(report.asymmetry, std::abs(report.killing(i, j) - report.killing(j, i)));
        for (const auto& [j, k] : all_pairs(dim)) {
            const Matrix<S> bracket = commutator(adj[j], adj[k]);
            for (int i = 0; i < dim; ++i)
                report.max_cartan_residual =
                    std::max(report.max_cartan_residual, trace_of_product(adj[i], bracket));
        }
        return report;
    }
    report.sampled = true;
    NormalRng rng(sampling.seed);
    for (std::uint64_t s = 0; s < sampling.samples; ++s) {
        const int i = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(dim)));
        const auto [j, k] = draw_pair(rng, dim);
        S kij{}, kji{};
        trace_of_product(adj[i], adj[j], &kij);
        trace_of_product(adj[j], adj[i], &kji);
        report.asymmetry = std::max(report.asymmetry, std::abs(kij - kji));
        report.max_cartan_residual =
            std::max(report.max_cartan_residual, trace_of_product(adj[i], commutator(adj[j], adj[k])));
    }
    return report;
}

template <class S>
BracketFactorization<S> factor_bracket(const ParameterMatrix<S>& params, const NullData<S>& null, int i,
                                       int j) {
    const int dim = params.dim();
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw ContractViolation("factor_bracket: index out of range");
    BracketFactorization<S> out;
    out.i = i;
    out.j = j;
    out.m_vector = ColVector<S>::Zero(dim);
    out.m_vector(i) += null.n(j);
    out.m_vector(j) -= null.n(i);
    const ColVector<S> p2m = params.p * (params.p * out.m_vector);
    out.value = p2m * null.n;
    return out;
}

template <class S>
SeriesReport lower_central_series(const AdjointRep<S>& adj, const ParameterMatrix<S>& params,
                                  const NullData<S>& null, int l_max, double tol, std::uint64_t path_seed) {
    const int dim = adj.dim();
    if (dim < 2) throw ContractViolation("lower_central_series: dimension must be >= 2");
    if (params.dim() != dim || null.n.size() != dim)
        throw ContractViolation("lower_central_series: inconsistent inputs");
    l_max = std::max(l_max, 0);

    SeriesReport report;
    report.kind = SeriesKind::lower_central;
    report.depth_tested = l_max;
    report.zero_threshold = tol * adjoint_scale(adj);
    report.max_norm_per_level.assign(l_max + 1, 0.0);
    report.discrepancy_per_level.assign(l_max + 1, 0.0);

    std::vector<int> canonical(l_max, 0);
    if (dim >= 3) {
        canonical.push_back(1);
        canonical.push_back(2);
    } else {
        canonical.push_back(0);
        canonical.push_back(1);
    }
    NormalRng rng(path_seed);
    std::vector<int> random_path(l_max);
    for (auto& idx : random_path) idx = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(dim)));
    const auto [rj, rk] = draw_pair(rng, dim);
    random_path.push_back(rj);
    random_path.push_back(rk);
    report.paths = {canonical, random_path};

    for (const auto& path : report.paths) {
        const int j = path[l_max];
        const int k = path[l_max + 1];
        Matrix<S> nested = commutator(adj[j], adj[k]);
        // m_{k,j}^T = n{k} e_j^T - n{j} e_k^T; [A_j, A_k] = P^2 m_{k,j}^T n.
        ColVector<S> w = ColVector<S>::Zero(dim);
        w(j) += null.n(k);
        w(k) -= null.n(j);
        w = params.p * (params.p * w);
        S coef{1};
        for (int level = 0; level <= l_max; ++level) {
            if (level > 0) {
                const int outer = path[level - 1];
                nested = commutator(adj[outer], nested);
                w = params.p * w;
                coef *= null.n(outer);
            }
            const Matrix<S> closed = (coef * w) * null.n;
            report.max_norm_per_level[level] = std::max(report.max_norm_per_level[level], inf_norm(nested));
            report.discrepancy_per_level[level] =
                std::max(report.discrepancy_per_level[level], inf_norm(Matrix<S>(nested - closed)));
        }
    }
    for (int level = 0; level <= l_max; ++level) {
        if (report.max_norm_per_level[level] <= report.zero_threshold) {
            report.terminated = true;
            report.termination_level = level;
            break;
        }
    }
    return report;
}

template <class S>
double nilpotency_residual(const ParameterMatrix<S>& params) {
    const int dim = params.dim();
    Matrix<S> result = Matrix<S>::Identity(dim, dim);
    Matrix<S> base = params.p;
    for (int e = dim; e > 0; e >>= 1) {
        if (e & 1) result = result * base;
        if (e > 1) base = base * base;
    }
    return inf_norm(result);
}

template <class S>
bool nilpotency_check(const ParameterMatrix<S>& params, double tol) {
    const double bound = tol * std::pow(inf_norm(params.p), params.dim());
    return nilpotency_residual(params) <= bound;
}

template <class S>
double t_product_residual(const ParameterMatrix<S>& params, const NullData<S>& null, const AdjointRep<S>& adj,
                          const PairSampling& sampling) {
    const int dim = adj.dim();
    if (params.dim() != dim || null.n.size() != dim)
        throw ContractViolation("t_product_residual: inconsistent inputs");
    std::vector<Matrix<S>> t;
    t.reserve(dim);
    for (int k = 0; k < dim; ++k) t.push_back(transfer_matrix(null.n, k));

    double worst = 0.0;
    auto check = [&](int j, int k) {
        const Matrix<S> tt = t[j] * t[k] - null.n(j) * t[k];
        const Matrix<S> at = adj[j] * t[k] - null.n(j) * adj[k];
        worst = std::max({worst, inf_norm(tt), inf_norm(at)});
    };
    if (dim <= sampling.limit) {
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) check(j, k);
        return worst;
    }
    NormalRng rng(sampling.seed);
    const auto d = static_cast<std::uint64_t>(dim);
    for (std::uint64_t s = 0; s < sampling.samples; ++s) {
        const int j = static_cast<int>(rng.uniform_below(d));
        const int k = static_cast<int>(rng.uniform_below(d));
        check(j, k);
    }
    return worst;
}

template <class S>
double null_space_residual(const NullData<S>& null, const AdjointRep<S>& adj) {
    double worst = 0.0;
    for (const auto& a : adj.matrices) {
        const RowVector<S> r = null.n * a;
        if (r.size() > 0) worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

template <class S>
double construction_residual(const ParameterMatrix<S>& params, const NullData<S>& null, const AdjointRep<S>& adj) {
    const int dim = adj.dim();
    if (params.dim() != dim || null.n.size() != dim)
        throw ContractViolation("construction_residual: inconsistent inputs");
    const auto& p = params.p;
    const auto& n = null.n;
    double worst = 0.0;
    for (int k = 0; k < dim; ++k) {
        const auto& a = adj[k];
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                worst = std::max(worst, std::abs(a(i, j) - (n(k) * p(i, j) - p(i, k) * n(j))));
    }
    return worst;
}

VerifyConfig VerifyConfig::quick() {
    VerifyConfig config;
    config.jacobi_samples = 100'000;
    config.pairs.samples = 4;
    config.derived.samples = 4;
    config.series_depth_cap = 8;
    return config;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"antisymmetry", "jacobi",     "closure",  "derived",  "killing",
                                                "series",       "nilpotency", "tproduct", "nullspace",
                                                "construction"};
    return names;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

template <class S>
VerificationReport verify_all(const Sample<S>& sample, const VerifyConfig& config) {
    for (const auto& name : config.checks)
        if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
            throw ContractViolation("unknown check '" + name + "'");

    const int dim = sample.dim();
    const double tol = config.tol;
    const double scale = adjoint_scale(sample.adjoint);
    const double scale2 = scale * scale;
    const double unit_scale = std::max(scale, 1.0);

    VerificationReport report;
    report.dim = dim;
    report.field = Sample<S>::field();
    report.mode = sample.mode;
    report.scale = scale;

    auto selected = [&](const std::string& name) {
        return config.checks.empty() ||
               std::find(config.checks.begin(), config.checks.end(), name) != config.checks.end();
    };
    auto run = [&](const std::string& name, const std::function<void(CheckResult&)>& body) {
        if (!selected(name)) return;
        CheckResult result;
        result.name = name;
        const auto start = std::chrono::steady_clock::now();
        body(result);
        result.seconds = seconds_since(start);
        report.checks.push_back(std::move(result));
    };
    auto sampling_note = [](int n, const PairSampling& s) {
        std::ostringstream out;
        if (n <= s.limit)
            out << "all pairs";
        else
            out << "sampled " << s.samples << " (seed " << s.seed << ")";
        return out.str();
    };

    run("antisymmetry", [&](CheckResult& r) {
        r.residual = antisymmetry_residual(sample.structure);
        r.tolerance = tol * scale;
        r.passed = r.residual <= r.tolerance;
        r.detail = "f{i,j,k} + f{j,i,k}";
    });
    run("jacobi", [&](CheckResult& r) {
        const bool full = dim <= config.jacobi_full_limit;
        const auto mode = full ? JacobiMode::full() : JacobiMode::sampled_with(config.jacobi_samples, config.seed);
        const auto jr = jacobi_residual(sample.structure, mode);
        r.residual = jr.max_residual;
        r.tolerance = tol * scale2;
        r.passed = r.residual <= r.tolerance;
        std::ostringstream d;
        d << (full ? "full" : "sampled") << ", " << jr.checked_count << " sums, worst (" << jr.worst_indices[0]
          << "," << jr.worst_indices[1] << "," << jr.worst_indices[2] << "," << jr.worst_indices[3] << ")";
        r.detail = d.str();
    });
    run("closure", [&](CheckResult& r) {
        r.residual = closure_residual(sample.adjoint, config.pairs);
        r.tolerance = tol * scale2;
        r.passed = r.residual <= r.tolerance;
        r.detail = sampling_note(dim, config.pairs);
    });
    run("derived", [&](CheckResult& r) {
        r.residual = derived_abelian_residual(sample.adjoint, config.derived);
        r.tolerance = tol * scale2;
        r.passed = r.residual <= r.tolerance;
        r.detail = sampling_note(dim, config.derived) + " of brackets";
    });
    run("killing", [&](CheckResult& r) {
        const auto kr = cartan_residual(sample.adjoint, config.pairs);
        r.residual = std::max(kr.max_cartan_residual, kr.asymmetry);
        r.tolerance = tol * scale2;
        r.passed = r.residual <= r.tolerance;
        std::ostringstream d;
        d << "Tr(A_i [A_j,A_k]) " << kr.max_cartan_residual << ", K asymmetry " << kr.asymmetry
          << (kr.sampled ? ", sampled" : "");
        r.detail = d.str();
    });
    run("series", [&](CheckResult& r) {
        int depth = config.series_depth > 0 ? config.series_depth : dim;
        if (config.series_depth_cap > 0) depth = std::min(depth, config.series_depth_cap);
        const auto sr = lower_central_series(sample.adjoint, sample.parameters, sample.null, depth, tol, config.seed);
        double worst = 0.0;
        for (int level = 0; level <= depth; ++level) {
            const double d = sr.discrepancy_per_level[level];
            const double bound = std::pow(scale, level + 2);
            worst = std::max(worst, bound > 0.0 ? d / bound : (d > 0.0 ? HUGE_VAL : 0.0));
        }
        // ||P^N|| <= tol ||P||^N is too loose a nilpotency test for large N, so
        // termination is required by declared mode only.
        const bool must_terminate = sample.mode == Mode::nilpotent;
        r.residual = worst;
        r.tolerance = tol;
        r.passed = worst <= tol && (!must_terminate || sr.terminated);
        std::ostringstream d;
        d << "depth " << depth << ", ";
        if (sr.terminated)
            d << "terminated at level " << sr.termination_level;
        else
            d << "non-terminating through level " << depth;
        d << "; residual is max |nested - closed form| / scale^(L+2)";
        r.detail = d.str();
    });
    run("nilpotency", [&](CheckResult& r) {
        r.residual = nilpotency_residual(sample.parameters);
        r.tolerance = tol * std::pow(inf_norm(sample.parameters.p), dim);
        const bool nilpotent = r.residual <= r.tolerance;
        r.passed = sample.mode != Mode::nilpotent || nilpotent;
        r.detail = nilpotent ? "||P^N|| within tolerance" : "P^N != 0";
        if (sample.mode != Mode::nilpotent) r.detail += " (required only in nilpotent mode)";
    });
    run("tproduct", [&](CheckResult& r) {
        r.residual = t_product_residual(sample.parameters, sample.null, sample.adjoint, config.pairs);
        r.tolerance = tol * unit_scale * unit_scale;
        r.passed = r.residual <= r.tolerance;
        r.detail = "T_j T_k = n{j} T_k, A_j T_k = n{j} A_k; " + sampling_note(dim, config.pairs);
    });
    run("nullspace", [&](CheckResult& r) {
        r.residual = null_space_residual(sample.null, sample.adjoint);
        r.tolerance = tol * scale;
        r.passed = r.residual <= r.tolerance;
        r.detail = "n A_k = 0";
    });
    run("construction", [&](CheckResult& r) {
        r.residual = construction_residual(sample.parameters, sample.null, sample.adjoint);
        r.tolerance = tol * scale;
        r.passed = r.residual <= r.tolerance;
        r.detail = "A_k = n{k} P - p_k n against the stored P and n";
    });
    return report;
}

VerificationReport verify_all(const AnySample& sample, const VerifyConfig& config) {
    return std::visit([&](const auto& s) { return verify_all(s, config); }, sample);
}

#define LIEFORGE_INSTANTIATE(S)                                                                           \
    template double adjoint_scale<S>(const AdjointRep<S>&);                                               \
    template JacobiReport jacobi_residual<S>(const StructureTensor<S>&, const JacobiMode&);               \
    template double antisymmetry_residual<S>(const StructureTensor<S>&);                                  \
    template double closure_residual<S>(const AdjointRep<S>&, const PairSampling&);                       \
    template double derived_abelian_residual<S>(const AdjointRep<S>&, const PairSampling&);               \
    template KillingReport<S> cartan_residual<S>(const AdjointRep<S>&, const PairSampling&);              \
    template BracketFactorization<S> factor_bracket<S>(const ParameterMatrix<S>&, const NullData<S>&, int, \
                                                       int);                                              \
    template SeriesReport lower_central_series<S>(const AdjointRep<S>&, const ParameterMatrix<S>&,        \
                                                  const NullData<S>&, int, double, std::uint64_t);        \
    template double nilpotency_residual<S>(const ParameterMatrix<S>&);                                    \
    template bool nilpotency_check<S>(const ParameterMatrix<S>&, double);                                 \
    template double t_product_residual<S>(const ParameterMatrix<S>&, const NullData<S>&,                  \
                                          const AdjointRep<S>&, const PairSampling&);                     \
    template double null_space_residual<S>(const NullData<S>&, const AdjointRep<S>&);                     \
    template double construction_residual<S>(const ParameterMatrix<S>&, const NullData<S>&,               \
                                             const AdjointRep<S>&);                                       \
    template VerificationReport verify_all<S>(const Sample<S>&, const VerifyConfig&);

LIEFORGE_INSTANTIATE(Real)
LIEFORGE_INSTANTIATE(Complex)

#undef LIEFORGE_INSTANTIATE

} // namespace lieforge
