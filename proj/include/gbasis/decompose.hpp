#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbasis/nat.hpp"
#include "gbasis/partition.hpp"

namespace gbasis {

/// One dispatch/recursion record. `target` is the value being decomposed at
/// this step; the scalar fields hold whichever of the construction's
/// bookkeeping values the step computed, so every recorded inequality can be
/// re-checked from the trace alone.
struct TraceStep {
    std::string label;
    Nat target;
    std::optional<std::uint64_t> k, i, u, v, s, q, l;
    std::vector<std::uint64_t> f;                    // chosen exponents, descending
    std::vector<std::vector<std::uint64_t>> groups;  // single-cell support groups
    std::optional<Nat> subtracted;                   // recursion amount
    std::vector<Nat> b, b_prime;                     // digit-split values (case 2.1)
    std::vector<std::uint64_t> r;                    // stripped digits (case 2.1)
    std::vector<Nat> c;                              // recursion parts (case 2.2)

    nlohmann::json to_json() const;
};

struct DecompositionTrace {
    std::string case_label;
    std::vector<TraceStep> steps;

    nlohmann::json to_json() const;
};

struct DecompositionCertificate {
    Nat n;
    std::uint64_t g = 2;
    unsigned h = 0;
    std::vector<Nat> parts;  // display order
    std::vector<unsigned> part_cells;
    std::optional<Nat> forbidden;
    DecompositionTrace trace;

    std::vector<Nat> sorted_parts() const;
    nlohmann::json to_json() const;
};

// Splits `exponents` (all in cells >= 1 of `cells`) into exactly
// `parts_needed` nonempty groups, each within a single cell. Deterministic:
// singletons merged within the lowest-indexed cell, lowest exponents first.
// Throws InvariantViolation when no such grouping exists.
std::vector<std::vector<std::uint64_t>> split_groups(
    const std::vector<std::uint64_t>& exponents, const PartitionSpec& cells,
    unsigned parts_needed);

struct VerifyResult {
    bool ok = false;
    std::string first_violation;  // names the first violated clause

    explicit operator bool() const { return ok; }
};

// Independent checker: uses only expand/is_member, partition lookups and
// bignum addition. Never throws on bad certificates; reports the clause.
VerifyResult verify_certificate(const DecompositionCertificate& cert,
                                const PartitionSpec& spec, std::uint64_t g);

// ---------------------------------------------------------------------------
// Gapped-block construction (order h, forbidden element g^2).

class Thm1Decomposer {
public:
    explicit Thm1Decomposer(const Thm1Params& params);

    const Thm1Params& params() const { return params_; }
    const PartitionSpec& partition() const { return partition_; }

    // Case/subcase label decompose() will take for n. Throws OutOfRangeError
    // for n <= m_2.
    std::string classify(const Nat& n) const;

    DecompositionCertificate decompose(const Nat& n) const;

    // n > m_2 with classify(n) == label, support within [0, max_exponent].
    // Throws ParamError when the label is unreachable for these parameters.
    Nat sample_for_case(const std::string& label, std::mt19937_64& rng,
                        std::uint64_t max_exponent) const;

    bool reachable(const std::string& label) const;

    static const std::vector<std::string>& case_labels();

private:
    Thm1Params params_;
    PartitionSpec partition_;
    Nat forbidden_;  // g^2
};

// ---------------------------------------------------------------------------
// Period-m construction (every n >= h decomposes over cell 0).

class Thm2Decomposer {
public:
    explicit Thm2Decomposer(const Thm2Params& params);

    const Thm2Params& params() const { return params_; }
    const PartitionSpec& partition() const { return partition_; }

    DecompositionCertificate decompose(const Nat& n) const;

private:
    Thm2Params params_;
    PartitionSpec partition_;
};

// Spec-level entry points (one-shot; construct the decomposer internally).
DecompositionCertificate decompose_thm1(const Nat& n, const Thm1Params& p);
DecompositionCertificate decompose_thm2(const Nat& n, const Thm2Params& p);
std::string classify_case(const Nat& n, const Thm1Params& p);

}  // namespace gbasis
