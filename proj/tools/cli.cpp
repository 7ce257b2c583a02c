#include "cli.hpp"

#include "lieforge/analysis.hpp"
#include "lieforge/generator.hpp"
#include "lieforge/jacobi_system.hpp"
#include "lieforge/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace lieforge::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << s << "\n";
    return s;
}

void require_dim(int dim) {
    if (dim < 2) throw UsageError("--dim must be >= 2, got " + std::to_string(dim));
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
    int dim = 0;
    std::optional<std::uint64_t> seed;
    std::string field = "real";
    std::string mode = "generic";
    std::string emit = "structure";
    std::string out_path;
    int max_attempts = kDefaultMaxAttempts;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    require_dim(a.dim);
    if (a.max_attempts < 1) throw UsageError("--max-attempts must be >= 1");
    const std::uint64_t seed = resolve_seed(a.seed, err);
    WriteOptions options;
    options.include_adjoint = a.emit == "adjoint" || a.emit == "both";
    options.include_structure = a.emit == "structure" || a.emit == "both";

    AnySample sample;
    try {
        sample = generate_any(a.dim, parse_field(a.field), parse_mode(a.mode), seed, a.max_attempts);
    } catch (const GenerationFailed& e) {
        err << "generation failed: " << e.last_failure() << "\n";
        return kGenerationFailed;
    }
    std::visit(
        [&](const auto& s) {
            for (const auto& line : s.rejections) err << "rejected " << line << "\n";
        },
        sample);

    const std::string doc = write_sample(sample, options);
    if (a.out_path.empty()) {
        out << doc;
    } else {
        std::ofstream file(a.out_path, std::ios::binary);
        file << doc;
        if (!file) {
            err << "cannot write " << a.out_path << "\n";
            return kUsage;
        }
    }
    return kSuccess;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string path;
    std::string checks;
    double tol = 1e-9;
    std::string format = "text";
};

void print_report_text(std::ostream& out, const std::string& path, const VerificationReport& report) {
    out << "lieforge verify " << path << "\n";
    out << "dim " << report.dim << ", field " << to_string(report.field) << ", mode " << to_string(report.mode)
        << ", scale " << std::setprecision(6) << report.scale << "\n";
    out << std::left << std::setw(13) << "check" << std::setw(6) << "ok" << std::setw(14) << "residual"
        << std::setw(14) << "tolerance" << std::setw(11) << "seconds"
        << "detail\n";
    for (const auto& c : report.checks) {
        out << std::left << std::setw(13) << c.name << std::setw(6) << (c.passed ? "pass" : "FAIL")
            << std::setw(14) << std::setprecision(4) << std::scientific << c.residual << std::setw(14)
            << c.tolerance << std::setw(11) << std::fixed << std::setprecision(4) << c.seconds
            << std::defaultfloat << c.detail << "\n";
    }
    out << "result: " << (report.passed() ? "PASS" : "FAIL") << "\n";
}

void print_report_json(std::ostream& out, const std::string& path, const VerificationReport& report) {
    nlohmann::ordered_json doc;
    doc["file"] = path;
    doc["dim"] = report.dim;
    doc["field"] = to_string(report.field);
    doc["mode"] = to_string(report.mode);
    doc["scale"] = report.scale;
    doc["passed"] = report.passed();
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["residual"] = c.residual;
        e["tolerance"] = c.tolerance;
        e["seconds"] = c.seconds;
        e["detail"] = c.detail;
        checks.push_back(std::move(e));
    }
    doc["checks"] = std::move(checks);
    out << doc.dump() << "\n";
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    VerifyConfig config;
    config.tol = a.tol;
    config.checks = split_csv(a.checks);
    if (config.checks.size() == 1 && config.checks[0] == "all") config.checks.clear();
    for (const auto& name : config.checks)
        if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
            throw UsageError("unknown check '" + name + "'");
    if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");

    std::ifstream file(a.path, std::ios::binary);
    if (!file) {
        err << "cannot read " << a.path << "\n";
        return kInputIntegrity;
    }
    AnySample sample;
    try {
        sample = read_sample(file);
    } catch (const VersionError& e) {
        err << e.what() << "\n";
        return kInputIntegrity;
    } catch (const IntegrityError& e) {
        err << e.what() << "\n";
        return kInputIntegrity;
    }
    const auto report = verify_all(sample, config);
    if (a.format == "json")
        print_report_json(out, a.path, report);
    else
        print_report_text(out, a.path, report);
    return report.passed() ? kSuccess : kVerificationFailed;
}

// --- oracle -----------------------------------------------------------------

struct OracleArgs {
    int dim = 0;
    std::optional<std::uint64_t> seed;
    std::string field = "real";
    double tol = 1e-8;
    int max_attempts = kDefaultMaxAttempts;
};

template <class S>
int run_oracle(const Sample<S>& sample, double tol, std::ostream& out, std::ostream& err) {
    const int dim = sample.dim();
    const double scale = adjoint_scale(sample.adjoint);
    out << "oracle dim " << dim << ", seed " << sample.seed << ", field " << to_string(Sample<S>::field())
        << "\n";
    out << "unknowns " << count_equations(dim) << (count_equations(dim) == 0 ? " (empty system)" : "") << "\n";
    OracleResult<S> result;
    try {
        result = oracle_structure_constants(sample);
    } catch (const SingularSystem& e) {
        err << e.what() << "\n";
        out << "result: SINGULAR\n";
        return kOracleSingular;
    }
    const auto cmp = compare_tensors(sample.structure, result.structure, tol);
    const double bound = tol * scale;
    const bool passed = cmp.max_diff <= bound;
    out << std::setprecision(6);
    out << "condition estimate " << result.solution.condition << "\n";
    out << "solve residual " << result.solution.residual << "\n";
    out << "scale " << scale << "\n";
    out << "max diff " << cmp.max_diff << " at (" << cmp.location[0] << "," << cmp.location[1] << ","
        << cmp.location[2] << "), bound " << bound << "\n";
    out << "result: " << (passed ? "PASS" : "FAIL") << "\n";
    return passed ? kSuccess : kVerificationFailed;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
    require_dim(a.dim);
    if (count_equations(a.dim) > kOracleSizeGuard)
        throw UsageError("oracle size guard: N = " + std::to_string(a.dim) + " gives " +
                         std::to_string(count_equations(a.dim)) + " unknowns, limit " +
                         std::to_string(kOracleSizeGuard));
    const std::uint64_t seed = resolve_seed(a.seed, err);
    try {
        if (parse_field(a.field) == Field::complex)
            return run_oracle(generate<Complex>(a.dim, Mode::generic, seed, a.max_attempts), a.tol, out, err);
        return run_oracle(generate<Real>(a.dim, Mode::generic, seed, a.max_attempts), a.tol, out, err);
    } catch (const GenerationFailed& e) {
        err << "generation failed: " << e.last_failure() << "\n";
        return kGenerationFailed;
    }
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
    std::string dims;
    int repeat = 3;
    std::string csv_path;
    std::string mode = "generic";
    std::string field = "real";
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<int> dims;
    for (const auto& item : split_csv(a.dims)) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            require_dim(n);
            dims.push_back(n);
        } catch (const std::logic_error&) {
            throw UsageError("--dims entry '" + item + "' is not an integer");
        }
    }
    if (dims.empty()) throw UsageError("--dims requires at least one dimension");
    if (a.repeat < 3) throw UsageError("--repeat must be >= 3");

    const auto records = run_bench(dims, parse_mode(a.mode), parse_field(a.field), a.repeat, a.seed);

    std::ostream* report = &err;
    if (!a.csv_path.empty()) {
        std::ofstream csv(a.csv_path);
        write_bench_csv(csv, records);
        if (!csv) {
            err << "cannot write " << a.csv_path << "\n";
            return kUsage;
        }
        report = &out;
    } else {
        write_bench_csv(out, records);
    }
    *report << "hardware: " << hardware_note() << "\n";
    for (const auto& r : records) {
        *report << "N=" << r.n << " " << to_string(r.mode) << " " << to_string(r.field) << ": median generate "
                << std::setprecision(4) << r.median_generate_seconds << " s, median verify "
                << r.median_verify_seconds << " s over " << r.repeats << " runs";
        const double baseline = baseline_seconds(r.n);
        if (baseline > 0.0) {
            *report << "; Octave baseline " << baseline << " s ("
                    << (r.median_generate_seconds <= baseline ? "within" : "EXCEEDS") << ", "
                    << std::setprecision(3) << baseline / std::max(r.median_generate_seconds, 1e-12)
                    << "x margin)";
        }
        *report << "\n";
    }
    return kSuccess;
}

} // namespace

double baseline_seconds(int n) {
    if (n == 100) return 0.3;
    if (n == 500) return 40.0;
    return 0.0;
}

std::string hardware_note() {
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) return line.substr(colon + 2);
        }
    }
    return "unknown";
}

std::vector<BenchRecord> run_bench(const std::vector<int>& dims, Mode mode, Field field, int repeats,
                                   std::uint64_t seed, bool with_verify) {
    std::vector<BenchRecord> records;
    const std::string hardware = hardware_note();
    for (const int n : dims) {
        std::vector<double> gen_times, verify_times;
        for (int r = 0; r < repeats; ++r) {
            auto start = std::chrono::steady_clock::now();
            AnySample sample = generate_any(n, field, mode, seed + static_cast<std::uint64_t>(r));
            gen_times.push_back(seconds_since(start));
            if (with_verify) {
                start = std::chrono::steady_clock::now();
                const auto report = verify_all(sample, VerifyConfig::quick());
                verify_times.push_back(seconds_since(start));
                if (!report.passed())
                    throw Error("bench: verification failed for N = " + std::to_string(n));
            }
        }
        BenchRecord rec;
        rec.n = n;
        rec.mode = mode;
        rec.field = field;
        rec.repeats = repeats;
        rec.median_generate_seconds = median(gen_times);
        rec.median_verify_seconds = median(verify_times);
        rec.rng_id = std::string(NormalRng::kId);
        rec.hardware = hardware;
        records.push_back(std::move(rec));
    }
    return records;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "n,mode,repeats,median_generate_s,median_verify_s,rng_id\n";
    for (const auto& r : records) {
        out << r.n << "," << to_string(r.mode) << "," << r.repeats << "," << std::setprecision(9)
            << r.median_generate_seconds << "," << r.median_verify_seconds << "," << r.rng_id << "\n";
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lieforge: random solvable Lie algebras from a single parameter matrix"};
    app.name("lieforge");
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Generate a sample and write a lieforge/1 document");
    g->add_option("--dim", gen.dim, "Algebra dimension N (>= 2)")->required();
    g->add_option("--seed", gen.seed, "RNG seed (default: OS entropy, echoed on stderr)");
    g->add_option("--field", gen.field, "real|complex")->check(CLI::IsMember({"real", "complex"}));
    g->add_option("--mode", gen.mode, "generic|nilpotent")->check(CLI::IsMember({"generic", "nilpotent"}));
    g->add_option("--emit", gen.emit, "adjoint|structure|both|none")
        ->check(CLI::IsMember({"adjoint", "structure", "both", "none"}));
    g->add_option("--out", gen.out_path, "Output path (default: stdout)");
    g->add_option("--max-attempts", gen.max_attempts, "Resampling budget");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check every identity on a sample document");
    v->add_option("file", ver.path, "lieforge/1 document")->required();
    v->add_option("--checks", ver.checks, "Comma-separated checks (default: all)");
    v->add_option("--tol", ver.tol, "Relative verification tolerance");
    v->add_option("--format", ver.format, "text|json")->check(CLI::IsMember({"text", "json"}));

    OracleArgs ora;
    auto* o = app.add_subcommand("oracle", "Compare the closed form against the Jacobi linear system");
    o->add_option("--dim", ora.dim, "Algebra dimension N")->required();
    o->add_option("--seed", ora.seed, "RNG seed (default: OS entropy, echoed on stderr)");
    o->add_option("--field", ora.field, "real|complex")->check(CLI::IsMember({"real", "complex"}));
    o->add_option("--tol", ora.tol, "Pass iff max difference <= tol * scale");
    o->add_option("--max-attempts", ora.max_attempts, "Resampling budget");

    BenchArgs ben;
    auto* b = app.add_subcommand("bench", "Time generation and verification");
    b->add_option("--dims", ben.dims, "Comma-separated dimensions")->required();
    b->add_option("--repeat", ben.repeat, "Timed runs per dimension (>= 3)");
    b->add_option("--csv", ben.csv_path, "CSV output path (default: stdout)");
    b->add_option("--mode", ben.mode, "generic|nilpotent")->check(CLI::IsMember({"generic", "nilpotent"}));
    b->add_option("--field", ben.field, "real|complex")->check(CLI::IsMember({"real", "complex"}));
    b->add_option("--seed", ben.seed, "First seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (g->parsed()) return cmd_generate(gen, out, err);
        if (v->parsed()) return cmd_verify(ver, out, err);
        if (o->parsed()) return cmd_oracle(ora, out, err);
        if (b->parsed()) return cmd_bench(ben, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnsupportedDimension& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const GenerationFailed& e) {
        err << "generation failed: " << e.last_failure() << "\n";
        return kGenerationFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kVerificationFailed;
    }
    return kUsage;
}

} // namespace lieforge::cli
