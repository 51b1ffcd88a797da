#include "gbasis/partition.hpp"

#include <algorithm>

#include "gbasis/errors.hpp"

namespace gbasis {

PartitionSpec::PartitionSpec(unsigned h, std::vector<IntervalCell> preperiod,
                             std::vector<unsigned> pattern)
    : h_(h), preperiod_(std::move(preperiod)), pattern_(std::move(pattern)) {
    if (h_ < 2) throw ParamError("h >= 2 violated (h=" + std::to_string(h_) + ")");
    if (pattern_.empty()) throw ParamError("period P >= 1 violated (empty pattern)");

    std::sort(preperiod_.begin(), preperiod_.end(),
              [](const IntervalCell& a, const IntervalCell& b) { return a.lo < b.lo; });
    std::uint64_t next = 0;
    for (const auto& iv : preperiod_) {
        if (iv.lo > iv.hi)
            throw ParamError("empty interval [" + std::to_string(iv.lo) + "," +
                             std::to_string(iv.hi) + "]");
        if (iv.lo < next)
            throw ParamError("position " + std::to_string(iv.lo) +
                             " covered twice in preperiod");
        if (iv.lo > next)
            throw ParamError("position " + std::to_string(next) +
                             " not covered by preperiod");
        if (iv.cell >= h_)
            throw ParamError("cell index " + std::to_string(iv.cell) + " out of [0, " +
                             std::to_string(h_ - 1) + "]");
        next = iv.hi + 1;
    }
    preperiod_len_ = next;

    for (unsigned c : pattern_)
        if (c >= h_)
            throw ParamError("cell index " + std::to_string(c) + " out of [0, " +
                             std::to_string(h_ - 1) + "]");

    // Each cell must occur somewhere in preperiod + one period.
    std::vector<bool> seen(h_, false);
    for (const auto& iv : preperiod_) seen[iv.cell] = true;
    for (unsigned c : pattern_) seen[c] = true;
    for (unsigned c = 0; c < h_; ++c)
        if (!seen[c])
            throw ParamError("cell " + std::to_string(c) +
                             " empty within preperiod and period");
}

unsigned PartitionSpec::cell_at(std::uint64_t w) const {
    if (w < preperiod_len_) {
        auto it = std::upper_bound(
            preperiod_.begin(), preperiod_.end(), w,
            [](std::uint64_t x, const IntervalCell& iv) { return x < iv.lo; });
        --it;
        return it->cell;
    }
    return pattern_[(w - preperiod_len_) % period()];
}

unsigned PartitionSpec::cell_at(const Nat& w) const {
    if (w < preperiod_len_) return cell_at(w.get_ui());
    const Nat off = w - preperiod_len_;
    const Nat idx = off % Nat(static_cast<unsigned long>(period()));
    return pattern_[idx.get_ui()];
}

std::optional<unsigned> PartitionSpec::uniform_cell(const GadicExpansion& e) const {
    if (e.is_zero()) return std::nullopt;
    std::optional<unsigned> cell;
    for (const auto& t : e.terms()) {
        const unsigned c = cell_at(t.exponent);
        if (cell && *cell != c) return std::nullopt;
        cell = c;
    }
    return cell;
}

PositionSet PartitionSpec::cell_set(unsigned cell) const {
    if (cell >= h_) throw ParamError("cell index out of range");
    return [spec = *this, cell](std::uint64_t w) { return spec.cell_at(w) == cell; };
}

nlohmann::json PartitionSpec::to_json() const {
    nlohmann::json pre = nlohmann::json::array();
    for (const auto& iv : preperiod_) pre.push_back({iv.lo, iv.hi, iv.cell});
    return {{"h", h_}, {"preperiod", pre}, {"period", period()}, {"pattern", pattern_}};
}

PartitionSpec PartitionSpec::from_json(const nlohmann::json& j) {
    std::vector<IntervalCell> pre;
    for (const auto& e : j.at("preperiod"))
        pre.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>(),
                       e.at(2).get<unsigned>()});
    auto pattern = j.at("pattern").get<std::vector<unsigned>>();
    if (j.at("period").get<std::uint64_t>() != pattern.size())
        throw ParamError("period field does not match pattern length");
    return PartitionSpec(j.at("h").get<unsigned>(), std::move(pre), std::move(pattern));
}

void Thm1Params::validate() const {
    if (g < 2) throw ParamError("g >= 2 violated (g=" + std::to_string(g) + ")");
    if (h < 2) throw ParamError("h >= 2 violated (h=" + std::to_string(h) + ")");
    if (t < 2) throw ParamError("t >= 2 violated (t=" + std::to_string(t) + ")");
    if (nat_pow(g, t) > h)
        throw ParamError("g^t <= h violated (g^t=" + to_decimal(nat_pow(g, t)) +
                         ", h=" + std::to_string(h) + ")");
    const Nat bound = nat_pow(g, h + 2);
    if (m1 <= bound)
        throw ParamError("m_1 > g^(h+2) violated (m1=" + std::to_string(m1) +
                         ", g^(h+2)=" + to_decimal(bound) + ")");
    if (gap <= bound)
        throw ParamError("m_{i+1} - m_i > g^(h+2) violated (gap=" + std::to_string(gap) +
                         ", g^(h+2)=" + to_decimal(bound) + ")");
    if (t >= gap) throw ParamError("t < gap violated (blocks must fit between m_i)");
}

void Thm2Params::validate() const {
    if (g < 2) throw ParamError("g >= 2 violated (g=" + std::to_string(g) + ")");
    if (h < 2) throw ParamError("h >= 2 violated (h=" + std::to_string(h) + ")");
    if (t < 1) throw ParamError("t >= 1 violated (t=" + std::to_string(t) + ")");
    const Nat lower = nat_pow(g, t) * (g - 1);
    if (h <= lower)
        throw ParamError("h > g^t(g-1) violated (h=" + std::to_string(h) +
                         ", g^t(g-1)=" + to_decimal(lower) + ")");
    if (nat_pow(g, m) <= nat_pow(g, t + 2) * h)
        throw ParamError("g^m > g^(t+2) h violated (g^m=" + to_decimal(nat_pow(g, m)) +
                         ", g^(t+2) h=" + to_decimal(nat_pow(g, t + 2) * h) + ")");
}

PartitionSpec residue_partition(unsigned h) {
    if (h < 2) throw ParamError("h >= 2 violated (h=" + std::to_string(h) + ")");
    std::vector<unsigned> pattern(h);
    for (unsigned i = 0; i < h; ++i) pattern[i] = i;
    return PartitionSpec(h, {}, std::move(pattern));
}

PartitionSpec thm1_partition(const Thm1Params& p) {
    p.validate();
    // Preperiod [0, m1] -> cell 0. One period = (h-1) consecutive blocks of
    // length gap starting at m1+1: offsets [ (i-1)*gap, i*gap ) belong to
    // block i, whose first t offsets are the cell-(i mod h-1) interval.
    std::vector<IntervalCell> pre{{0, p.m1, 0}};
    std::vector<unsigned> pattern;
    pattern.reserve((p.h - 1) * p.gap);
    for (unsigned i = 1; i <= p.h - 1; ++i) {
        const unsigned cell = (i - 1) % (p.h - 1) + 1;
        for (std::uint64_t r = 0; r < p.gap; ++r)
            pattern.push_back(r < p.t ? cell : 0);
    }
    return PartitionSpec(p.h, std::move(pre), std::move(pattern));
}

PartitionSpec thm2_partition(const Thm2Params& p) {
    p.validate();
    // Pure periodic with period m(h-1): block k (k = 0..h-2 within a period)
    // has its first m-t positions in cell 0 and its last t positions in the
    // cell given by k mod (h-1), with residue 0 mapping to cell h-1.
    std::vector<unsigned> pattern;
    pattern.reserve(p.m * (p.h - 1));
    for (unsigned k = 0; k <= p.h - 2; ++k) {
        const unsigned res = k % (p.h - 1);
        const unsigned cell = res == 0 ? p.h - 1 : res;
        for (std::uint64_t r = 0; r < p.m; ++r)
            pattern.push_back(r <= p.m - p.t - 1 ? 0 : cell);
    }
    return PartitionSpec(p.h, {}, std::move(pattern));
}

PartitionSpec interval_partition(const std::vector<IntervalCell>& preperiod_intervals,
                                 const std::vector<IntervalCell>& period_intervals) {
    if (period_intervals.empty())
        throw ParamError("period intervals must be nonempty");

    unsigned h = 0;
    for (const auto& iv : preperiod_intervals) h = std::max(h, iv.cell + 1);
    for (const auto& iv : period_intervals) h = std::max(h, iv.cell + 1);
    if (h < 2) throw ParamError("h >= 2 violated (highest cell index is 0)");

    // Preperiod tiling is validated by the PartitionSpec constructor; here we
    // validate the period intervals tile a contiguous range and flatten them.
    auto period = period_intervals;
    std::sort(period.begin(), period.end(),
              [](const IntervalCell& a, const IntervalCell& b) { return a.lo < b.lo; });
    std::uint64_t pre_len = 0;
    for (const auto& iv : preperiod_intervals) pre_len = std::max(pre_len, iv.hi + 1);
    if (period.front().lo != pre_len)
        throw ParamError("period intervals must start at position " +
                         std::to_string(pre_len) + ", got " +
                         std::to_string(period.front().lo));
    std::vector<unsigned> pattern;
    std::uint64_t next = period.front().lo;
    for (const auto& iv : period) {
        if (iv.lo > iv.hi)
            throw ParamError("empty interval [" + std::to_string(iv.lo) + "," +
                             std::to_string(iv.hi) + "]");
        if (iv.lo < next)
            throw ParamError("position " + std::to_string(iv.lo) +
                             " covered twice in period");
        if (iv.lo > next)
            throw ParamError("position " + std::to_string(next) +
                             " not covered by period");
        for (std::uint64_t w = iv.lo; w <= iv.hi; ++w) pattern.push_back(iv.cell);
        next = iv.hi + 1;
    }
    return PartitionSpec(h, preperiod_intervals, std::move(pattern));
}

HypothesesReport check_hypotheses(const PartitionSpec& spec, std::uint64_t g,
                                  std::uint64_t t) {
    if (g < 2) throw ParamError("g >= 2 violated (g=" + std::to_string(g) + ")");
    const unsigned h = spec.cell_count();

    std::vector<bool> infinite(h, false);
    for (unsigned c : spec.pattern()) infinite[c] = true;

    // Longest run per cell over the preperiod plus three periods; runs in the
    // periodic part cannot exceed one period unless the cell owns everything,
    // so the window is wide enough for any finite run length.
    const std::uint64_t window = spec.preperiod_len() + 3 * spec.period();
    std::vector<std::uint64_t> longest(h, 0), current(h, 0);
    unsigned prev_cell = spec.cell_at(std::uint64_t(0));
    for (std::uint64_t w = 0; w < window; ++w) {
        const unsigned c = spec.cell_at(w);
        if (w > 0 && c != prev_cell) current[prev_cell] = 0;
        current[c] += 1;
        longest[c] = std::max(longest[c], current[c]);
        prev_cell = c;
    }

    HypothesesReport rep;
    rep.all_infinite = true;
    rep.all_have_run_of_t = true;
    for (unsigned c = 0; c < h; ++c) {
        const bool run_ok = longest[c] >= t;
        rep.cells.push_back({c, static_cast<bool>(infinite[c]), longest[c], run_ok});
        rep.all_infinite = rep.all_infinite && infinite[c];
        rep.all_have_run_of_t = rep.all_have_run_of_t && run_ok;
    }
    rep.thm1_regime = nat_pow(g, t) <= h;
    rep.regime = rep.thm1_regime ? "g^t <= h (non-minimal construction range)"
                                 : "g^t > h (minimality criterion range)";
    return rep;
}

}  // namespace gbasis
