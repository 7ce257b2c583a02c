// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.

#include "cli.hpp"

#include "lieforge/analysis.hpp"
#include "lieforge/jacobi_system.hpp"
#include "lieforge/linalg.hpp"
#include "lieforge/serialization.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace lieforge;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> details;

    void fail(const std::string& why) {
        passed = false;
        details.push_back("failure: " + why);
    }
    void note(const std::string& line) { details.push_back(line); }
};

template <class... Args>
std::string format(const Args&... args) {
    std::ostringstream out;
    out << std::setprecision(4);
    (out << ... << args);
    return out.str();
}

// 1. Closed form against the Jacobi linear system.
Outcome oracle_equivalence() {
    Outcome o;
    int runs = 0, skips = 0;
    double worst_ratio = 0.0;
    for (int n = 3; n <= 6; ++n)
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ++runs;
            const auto s = generate<Real>(n, Mode::generic, seed);
            const auto r = oracle_structure_constants(s);
            if (r.solution.condition > 1e8) {
                ++skips;
                o.note(format("skip N=", n, " seed=", seed, ": condition estimate ", r.solution.condition));
                continue;
            }
            const double scale = adjoint_scale(s.adjoint);
            const double diff = compare_tensors(s.structure, r.structure, 0.0).max_diff;
            worst_ratio = std::max(worst_ratio, diff / scale);
            if (diff > 1e-8 * scale) o.fail(format("N=", n, " seed=", seed, ": max diff ", diff, " > 1e-8 * ", scale));
        }
    if (5 * skips > runs) o.fail(format(skips, " of ", runs, " runs skipped (> 20%)"));
    o.note(format(runs, " runs, ", skips, " skipped, worst max diff / scale = ", worst_ratio));
    return o;
}

// 2. Exact identities on the full grid.
template <class S>
void identity_suite_field(Outcome& o, double& worst, int& count) {
    for (const Mode mode : {Mode::generic, Mode::nilpotent})
        for (int n = 2; n <= 20; ++n)
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const auto s = generate<S>(n, mode, seed);
                const double scale = adjoint_scale(s.adjoint);
                const double tau = 1e-9 * scale * scale;
                const auto kr = cartan_residual(s.adjoint);
                const std::pair<const char*, double> residuals[] = {
                    {"jacobi", jacobi_residual(s.structure, JacobiMode::full()).max_residual},
                    {"closure", closure_residual(s.adjoint)},
                    {"derived", derived_abelian_residual(s.adjoint)},
                    {"killing", std::max(kr.max_cartan_residual, kr.asymmetry)},
                    {"tproduct", t_product_residual(s.parameters, s.null, s.adjoint)},
                };
                ++count;
                for (const auto& [name, value] : residuals) {
                    if (scale > 0.0) worst = std::max(worst, value / (scale * scale));
                    if (value > tau)
                        o.fail(format(name, " N=", n, " seed=", seed, " ", to_string(Sample<S>::field()), " ",
                                      to_string(mode), ": ", value, " > ", tau));
                }
            }
}

Outcome identity_suite() {
    Outcome o;
    double worst = 0.0;
    int count = 0;
    identity_suite_field<Real>(o, worst, count);
    identity_suite_field<Complex>(o, worst, count);
    o.note(format(count, " samples, worst residual / scale^2 = ", worst));
    return o;
}

// 3. Lower central series and nilpotency.
Outcome series_behaviour() {
    Outcome o;
    double worst = 0.0;
    double smallest_level_norm = HUGE_VAL;
    for (int n = 3; n <= 10; ++n)
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto g = generate<Real>(n, Mode::generic, seed);
            const double scale = adjoint_scale(g.adjoint);
            const auto r = lower_central_series(g.adjoint, g.parameters, g.null, n);
            if (r.terminated)
                o.fail(format("generic N=", n, " seed=", seed, " terminated at level ", r.termination_level));
            for (int level = 0; level <= n; ++level) {
                const double bound = std::pow(scale, level + 2);
                worst = std::max(worst, r.discrepancy_per_level[level] / bound);
                smallest_level_norm = std::min(smallest_level_norm, r.max_norm_per_level[level] / r.zero_threshold);
                if (r.discrepancy_per_level[level] > 1e-9 * bound)
                    o.fail(format("generic N=", n, " seed=", seed, " level ", level, " discrepancy ",
                                  r.discrepancy_per_level[level]));
            }

            const auto z = generate<Real>(n, Mode::nilpotent, seed);
            const auto rz = lower_central_series(z.adjoint, z.parameters, z.null, n);
            if (!rz.terminated || rz.termination_level > n)
                o.fail(format("nilpotent N=", n, " seed=", seed, " did not terminate by level ", n));
            const double pn = nilpotency_residual(z.parameters);
            if (pn > 1e-9 * std::pow(inf_norm(z.parameters.p), n))
                o.fail(format("nilpotent N=", n, " seed=", seed, ": ||P^N|| = ", pn));
        }
    o.note(format("worst discrepancy / scale^(L+2) = ", worst,
                  "; smallest generic level norm / zero threshold = ", smallest_level_norm));
    return o;
}

// 4. Equation count against enumeration.
Outcome equation_count() {
    Outcome o;
    for (int n = 2; n <= 12; ++n) {
        std::int64_t unknowns = 0, equations = 0;
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = 0; k < n; ++k) ++unknowns;
        for (int j = 1; j < n; ++j)
            for (int k = 1; k < n; ++k)
                for (int m = 0; m < n; ++m)
                    if (j < k) ++equations;
        if (count_equations(n) != unknowns || unknowns != equations ||
            unknowns != static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 2)
            o.fail(format("N=", n, ": count_equations ", count_equations(n), ", enumerated ", unknowns, "/",
                          equations));
    }
    o.note("N = 2..12 enumerated");
    return o;
}

// 5. Generation time against the published baselines.
Outcome performance() {
    Outcome o;
    for (const int n : {100, 500}) {
        const auto rec = cli::run_bench({n}, Mode::generic, Field::real, 3, 1, false).front();
        const double baseline = cli::baseline_seconds(n);
        o.note(format("N=", n, ": median generate ", rec.median_generate_seconds, " s over ", rec.repeats,
                      " runs, baseline ", baseline, " s, margin ",
                      baseline / std::max(rec.median_generate_seconds, 1e-12), "x"));
        if (rec.median_generate_seconds > baseline)
            o.fail(format("N=", n, " exceeds baseline"));
    }
    o.note("hardware: " + cli::hardware_note());
    return o;
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    if (out) *out = o.str();
    return code;
}

// 6. Determinism and round trip through the CLI and the reader.
Outcome determinism() {
    Outcome o;
    NormalRng pick(6);
    const char* emits[] = {"structure", "adjoint", "both", "none"};
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(pick.uniform_below(14));
        const std::string seed = std::to_string(pick.next_u64());
        const std::string field = pick.uniform_below(2) ? "complex" : "real";
        const std::string mode = pick.uniform_below(2) ? "nilpotent" : "generic";
        const std::string emit = emits[pick.uniform_below(4)];
        const std::vector<std::string> args{"generate", "--dim",  std::to_string(dim), "--seed", seed,
                                            "--field",  field,    "--mode",            mode,     "--emit",
                                            emit};
        std::string first, second;
        if (run_cli(args, &first) != 0 || run_cli(args, &second) != 0) {
            o.fail("generate failed for trial " + std::to_string(trial));
            continue;
        }
        if (first != second) o.fail(format("trial ", trial, ": two runs differ"));
        const WriteOptions options{emit == "adjoint" || emit == "both", emit == "structure" || emit == "both"};
        if (write_sample(read_sample(first), options) != first)
            o.fail(format("trial ", trial, ": write->read->write differs"));
    }
    o.note("100 configurations over dim 2..15, both fields, both modes, all emit options");
    return o;
}

// 7. A corrupted structure constant is caught by verify.
Outcome mutation() {
    Outcome o;
    NormalRng pick(7);
    const auto path = std::filesystem::temp_directory_path() / "lieforge_acceptance_mutation.json";
    int caught = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 3 + static_cast<int>(pick.uniform_below(10));
        const Field field = pick.uniform_below(2) ? Field::complex : Field::real;
        const Mode mode = pick.uniform_below(2) ? Mode::nilpotent : Mode::generic;
        AnySample sample = generate_any(dim, field, mode, pick.next_u64());
        const int i = static_cast<int>(pick.uniform_below(dim - 1));
        const int j = i + 1 + static_cast<int>(pick.uniform_below(dim - i - 1));
        const int k = static_cast<int>(pick.uniform_below(dim));
        std::visit(
            [&](auto& s) {
                s.structure(i, j, k) += 1.0;
                s.structure(j, i, k) -= 1.0;
                s.adjoint = structure_to_adjoint(s.structure);
            },
            sample);
        std::ofstream(path, std::ios::binary) << write_sample(sample);
        const int code = run_cli({"verify", path.string()});
        if (code == 0)
            o.fail(format("trial ", trial, " (N=", dim, ", f{", i, ",", j, ",", k, "}) passed verification"));
        else
            ++caught;
    }
    std::filesystem::remove(path);
    o.note(format(caught, " of 20 corrupted samples rejected"));
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 oracle equivalence (N 3..6, 5 seeds, <= 1e-8 scale)", oracle_equivalence},
        {"2 exact identities (N 2..20, 10 seeds, both fields and modes, <= 1e-9 scale^2)", identity_suite},
        {"3 series: generic non-terminating, nilpotent terminating", series_behaviour},
        {"4 equation count matches enumeration (N 2..12)", equation_count},
        {"5 generation time within baselines (N 100, 500)", performance},
        {"6 determinism and byte-identical round trip (100 configs)", determinism},
        {"7 mutation sensitivity (20 samples)", mutation},
    };
    int failures = 0;
    for (const auto& [name, body] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = body();
        } catch (const std::exception& e) {
            outcome.fail(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (outcome.passed ? "PASS " : "FAIL ") << name << " [" << std::fixed << std::setprecision(1)
                  << seconds << " s]" << std::defaultfloat << "\n";
        for (const auto& line : outcome.details) std::cout << "    " << line << "\n";
        std::cout.flush();
        failures += !outcome.passed;
    }
    std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: " + std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
