#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbasis/gadic.hpp"
#include "gbasis/nat.hpp"

namespace gbasis {

struct IntervalCell {
    std::uint64_t lo;
    std::uint64_t hi;  // inclusive
    unsigned cell;

    bool operator==(const IntervalCell&) const = default;
};

/// Eventually periodic partition of the nonnegative integers into cells
/// W_0..W_{h-1}: an explicit preperiod tiling [0, preperiod_len) followed by
/// a repeating pattern of length P. Immutable after construction; membership
/// queries accept arbitrary bignum positions.
class PartitionSpec {
public:
    PartitionSpec(unsigned h, std::vector<IntervalCell> preperiod,
                  std::vector<unsigned> pattern);

    unsigned cell_count() const { return h_; }
    std::uint64_t preperiod_len() const { return preperiod_len_; }
    std::uint64_t period() const { return pattern_.size(); }
    const std::vector<IntervalCell>& preperiod() const { return preperiod_; }
    const std::vector<unsigned>& pattern() const { return pattern_; }

    unsigned cell_at(std::uint64_t w) const;
    unsigned cell_at(const Nat& w) const;

    // Cell of every position in the expansion's support, if they all agree.
    std::optional<unsigned> uniform_cell(const GadicExpansion& e) const;

    // Predicate view of a single cell, pluggable into the gadic operations.
    PositionSet cell_set(unsigned cell) const;

    nlohmann::json to_json() const;
    static PartitionSpec from_json(const nlohmann::json& j);

private:
    unsigned h_;
    std::vector<IntervalCell> preperiod_;  // sorted, tiles [0, preperiod_len_)
    std::uint64_t preperiod_len_;
    std::vector<unsigned> pattern_;
};

struct Thm1Params {
    std::uint64_t g = 2;
    unsigned h = 4;
    std::uint64_t t = 2;
    std::uint64_t m1 = 65;   // first block start m_1
    std::uint64_t gap = 65;  // d, so m_i = m_1 + (i-1) d

    Nat m2() const { return Nat(m1) + gap; }
    void validate() const;  // throws ParamError naming the violated inequality
};

struct Thm2Params {
    std::uint64_t g = 2;
    unsigned h = 5;
    std::uint64_t t = 2;
    std::uint64_t m = 7;

    void validate() const;
};

// Cells by residue: cell(w) = w mod h.
PartitionSpec residue_partition(unsigned h);

// Gapped-block construction: W_0 = [0, m1] plus the gaps between blocks;
// W_j = the t-position blocks [m_i+1, m_i+t] with i = j (mod h-1).
// Periodic with period gap*(h-1) after the preperiod [0, m1].
PartitionSpec thm1_partition(const Thm1Params& p);

// Period-m construction: positions mk..mk+m-t-1 lie in W_0, the top t
// positions of each block go to cell 1 + ((k-1) mod (h-1)).
PartitionSpec thm2_partition(const Thm2Params& p);

// User-supplied tiling: preperiod intervals plus one period's intervals
// (the period length is the total span of `period_intervals`).
PartitionSpec interval_partition(const std::vector<IntervalCell>& preperiod_intervals,
                                 const std::vector<IntervalCell>& period_intervals);

struct CellHypotheses {
    unsigned cell;
    bool infinite;             // appears in the periodic pattern
    std::uint64_t longest_run; // within the scan window
    bool has_run_of_t;
};

struct HypothesesReport {
    std::vector<CellHypotheses> cells;
    bool all_infinite;
    bool all_have_run_of_t;
    bool thm1_regime;  // g^t <= h; otherwise the t > log h / log g regime
    std::string regime;
};

HypothesesReport check_hypotheses(const PartitionSpec& spec, std::uint64_t g,
                                  std::uint64_t t);

}  // namespace gbasis
