#pragma once

#include "lieforge/generator.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace lieforge {

// "lieforge/1" documents: one line of UTF-8 JSON with a fixed key order
//
//   format, dim, field, mode, seed, rng_id, attempts, tolerances,
//   p_matrix, null_vector, c, adjoint?, structure_constants?
//
// Matrices are flattened row-major. Complex values are [re, im]. Indices in
// structure_constants are zero-based [i, j, k, value] entries with i < j and
// nonzero value. Numbers use the shortest decimal that round-trips.

inline constexpr std::string_view kFormatVersion = "lieforge/1";

struct WriteOptions {
    bool include_adjoint = false;
    bool include_structure = true;
};

std::string write_sample(const AnySample& sample, const WriteOptions& options = {});
void write_sample(std::ostream& out, const AnySample& sample, const WriteOptions& options = {});

/// Throws VersionError for an unknown format and IntegrityError for any
/// malformed or inconsistent content.
AnySample read_sample(std::string_view text);
AnySample read_sample(std::istream& in);

} // namespace lieforge
