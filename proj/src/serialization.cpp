#include "lieforge/serialization.hpp"

#include "lieforge/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <tuple>

namespace lieforge {

namespace {

using Json = nlohmann::ordered_json;

template <class S>
Json encode(const S& v) {
    if constexpr (is_complex_v<S>)
        return Json::array({v.real(), v.imag()});
    else
        return v;
}

template <class S, class Derived>
Json encode_flat(const Eigen::DenseBase<Derived>& m) {
    Json arr = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(encode<S>(m(r, c)));
    return arr;
}

template <class S>
Json encode_sample(const Sample<S>& s, const WriteOptions& options) {
    const int dim = s.dim();
    Json doc;
    doc["format"] = kFormatVersion;
    doc["dim"] = dim;
    doc["field"] = to_string(Sample<S>::field());
    doc["mode"] = to_string(s.mode);
    doc["seed"] = s.seed;
    doc["rng_id"] = s.rng_id;
    doc["attempts"] = s.attempts;
    Json tol;
    tol["rank"] = s.tolerances.rank;
    tol["null_first"] = s.tolerances.null_first;
    tol["null_residual_factor"] = s.tolerances.null_residual_factor;
    tol["verify"] = s.tolerances.verify;
    doc["tolerances"] = tol;
    doc["p_matrix"] = encode_flat<S>(s.parameters.p);
    doc["null_vector"] = encode_flat<S>(s.null.n);
    doc["c"] = s.null.c ? encode<S>(*s.null.c) : Json(nullptr);
    if (options.include_adjoint) {
        Json adj = Json::array();
        for (const auto& a : s.adjoint.matrices) adj.push_back(encode_flat<S>(a));
        doc["adjoint"] = std::move(adj);
    }
    if (options.include_structure) {
        Json entries = Json::array();
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    const S v = s.structure(i, j, k);
                    if (v == S{0}) continue;
                    Json e = Json::array({i, j, k});
                    e.push_back(encode<S>(v));
                    entries.push_back(std::move(e));
                }
        doc["structure_constants"] = std::move(entries);
    }
    return doc;
}

[[noreturn]] void integrity(const std::string& what) {
    throw IntegrityError("integrity error: " + what);
}

const Json& require(const Json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end()) integrity(std::string("missing field '") + key + "'");
    return *it;
}

double decode_real(const Json& v, const char* what) {
    if (!v.is_number()) integrity(std::string(what) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) integrity(std::string(what) + ": non-finite value");
    return x;
}

template <class S>
S decode(const Json& v, const char* what) {
    if constexpr (is_complex_v<S>) {
        if (!v.is_array() || v.size() != 2) integrity(std::string(what) + ": expected [re, im]");
        return {decode_real(v[0], what), decode_real(v[1], what)};
    } else {
        return decode_real(v, what);
    }
}

template <class S>
Matrix<S> decode_matrix(const Json& v, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows * cols)
        integrity(std::string(what) + ": expected " + std::to_string(rows * cols) + " entries");
    Matrix<S> m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = decode<S>(v[idx++], what);
    return m;
}

template <class S>
bool bitwise_equal(const S& a, const S& b) {
    if constexpr (is_complex_v<S>)
        return bitwise_equal(a.real(), b.real()) && bitwise_equal(a.imag(), b.imag());
    else
        return std::signbit(a) == std::signbit(b) && (a == b || (std::isnan(a) && std::isnan(b)));
}

template <class S>
Sample<S> decode_sample(const Json& doc, int dim, Mode mode) {
    Sample<S> s;
    s.mode = mode;
    const auto& seed = require(doc, "seed");
    if (!seed.is_number_unsigned()) integrity("seed must be an unsigned integer");
    s.seed = seed.get<std::uint64_t>();
    const auto& rng_id = require(doc, "rng_id");
    if (!rng_id.is_string()) integrity("rng_id must be a string");
    s.rng_id = rng_id.get<std::string>();
    const auto& attempts = require(doc, "attempts");
    if (!attempts.is_number_integer() || attempts.get<std::int64_t>() < 1) integrity("attempts must be >= 1");
    s.attempts = attempts.get<int>();

    const auto& tol = require(doc, "tolerances");
    if (!tol.is_object()) integrity("tolerances must be an object");
    s.tolerances.rank = decode_real(require(tol, "rank"), "tolerances.rank");
    s.tolerances.null_first = decode_real(require(tol, "null_first"), "tolerances.null_first");
    s.tolerances.null_residual_factor =
        decode_real(require(tol, "null_residual_factor"), "tolerances.null_residual_factor");
    s.tolerances.verify = decode_real(require(tol, "verify"), "tolerances.verify");

    s.parameters.mode = mode;
    s.parameters.p = decode_matrix<S>(require(doc, "p_matrix"), dim, dim, "p_matrix");
    for (int i = 0; i < dim; ++i) {
        if (s.parameters.p(i, 0) != S{0}) integrity("p_matrix first column must be zero");
        if (mode == Mode::nilpotent)
            for (int j = 0; j <= i; ++j)
                if (s.parameters.p(i, j) != S{0}) integrity("nilpotent p_matrix must be strictly upper-triangular");
    }

    s.null.n = decode_matrix<S>(require(doc, "null_vector"), 1, dim, "null_vector");
    if (std::abs(s.null.n.norm() - 1.0) > 1e-12) integrity("null_vector is not unit length");
    s.null.residual = (s.null.n * s.parameters.p).cwiseAbs().maxCoeff();
    if (s.null.residual > null_residual_tolerance(s.parameters.p, s.tolerances.null_residual_factor))
        integrity("null_vector is not a left null vector of p_matrix within tolerance");

    const auto& c = require(doc, "c");
    const bool expect_c = std::abs(s.null.n(0)) >= s.tolerances.null_first;
    if (c.is_null()) {
        if (expect_c) integrity("c missing although |n{1}| is above threshold");
    } else {
        if (!expect_c) integrity("c present although |n{1}| is below threshold");
        const S value = decode<S>(c, "c");
        if (!bitwise_equal(value, S{1} / s.null.n(0))) integrity("c differs from 1 / n{1}");
        s.null.c = value;
    }
    if (mode == Mode::generic && !s.null.c) integrity("generic sample requires c");

    const auto adj_it = doc.find("adjoint");
    const auto sc_it = doc.find("structure_constants");
    const bool has_adj = adj_it != doc.end();
    const bool has_sc = sc_it != doc.end();

    if (has_adj) {
        if (!adj_it->is_array() || static_cast<int>(adj_it->size()) != dim)
            integrity("adjoint must hold N matrices");
        s.adjoint.matrices.reserve(dim);
        for (const auto& m : *adj_it) s.adjoint.matrices.push_back(decode_matrix<S>(m, dim, dim, "adjoint"));
    }
    if (has_sc) {
        if (!sc_it->is_array()) integrity("structure_constants must be an array");
        StructureTensor<S> f(dim);
        std::map<std::tuple<int, int, int>, bool> seen;
        for (const auto& e : *sc_it) {
            if (!e.is_array() || e.size() != 4) integrity("structure entry must be [i, j, k, value]");
            for (int t = 0; t < 3; ++t)
                if (!e[t].is_number_integer()) integrity("structure indices must be integers");
            const auto i = e[0].get<std::int64_t>(), j = e[1].get<std::int64_t>(), k = e[2].get<std::int64_t>();
            if (i < 0 || j >= dim || k < 0 || k >= dim || !(i < j)) integrity("structure index out of range or i >= j");
            const S v = decode<S>(e[3], "structure value");
            if (v == S{0}) integrity("structure entries must be nonzero");
            if (!seen.emplace(std::make_tuple(int(i), int(j), int(k)), true).second)
                integrity("duplicate structure entry");
            f(int(i), int(j), int(k)) = v;
            f(int(j), int(i), int(k)) = -v;
        }
        s.structure = std::move(f);
    }

    if (has_adj && has_sc) {
        const auto from_adj = adjoint_to_structure(s.adjoint);
        for (std::size_t t = 0; t < from_adj.data().size(); ++t)
            if (!(from_adj.data()[t] == s.structure.data()[t]))
                integrity("adjoint and structure_constants disagree");
    } else if (has_adj) {
        s.structure = adjoint_to_structure(s.adjoint);
    } else if (has_sc) {
        s.adjoint = structure_to_adjoint(s.structure);
    } else {
        s.adjoint = build_adjoint(s.parameters, s.null);
        s.structure = adjoint_to_structure(s.adjoint);
    }
    return s;
}

AnySample decode_document(const Json& doc) {
    if (!doc.is_object()) throw VersionError("not a lieforge document");
    const auto fmt = doc.find("format");
    if (fmt == doc.end() || !fmt->is_string()) throw VersionError("missing format version");
    if (fmt->get<std::string>() != kFormatVersion)
        throw VersionError("unsupported format version '" + fmt->get<std::string>() + "'");

    const auto& dim_json = require(doc, "dim");
    if (!dim_json.is_number_integer()) integrity("dim must be an integer");
    const auto dim64 = dim_json.get<std::int64_t>();
    if (dim64 < 2 || dim64 > 100000) integrity("dim out of range");
    const int dim = static_cast<int>(dim64);

    const auto& field_json = require(doc, "field");
    const auto& mode_json = require(doc, "mode");
    if (!field_json.is_string() || !mode_json.is_string()) integrity("field and mode must be strings");
    Field field{};
    Mode mode{};
    try {
        field = parse_field(field_json.get<std::string>());
        mode = parse_mode(mode_json.get<std::string>());
    } catch (const ContractViolation& e) {
        integrity(e.what());
    }
    if (field == Field::complex) return decode_sample<Complex>(doc, dim, mode);
    return decode_sample<Real>(doc, dim, mode);
}

} // namespace

std::string write_sample(const AnySample& sample, const WriteOptions& options) {
    const Json doc = std::visit([&](const auto& s) { return encode_sample(s, options); }, sample);
    return doc.dump() + "\n";
}

void write_sample(std::ostream& out, const AnySample& sample, const WriteOptions& options) {
    out << write_sample(sample, options);
    if (!out) throw Error("failed to write sample document");
}

AnySample read_sample(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        integrity(std::string("malformed JSON: ") + e.what());
    }
    try {
        return decode_document(doc);
    } catch (const Json::exception& e) {
        integrity(e.what());
    }
}

AnySample read_sample(std::istream& in) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_sample(std::string_view(text));
}

} // namespace lieforge
