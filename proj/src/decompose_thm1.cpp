#include <algorithm>
#include <set>

#include "gbasis/decompose.hpp"
#include "gbasis/errors.hpp"
#include "gbasis/gadic.hpp"

namespace gbasis {

namespace {

// A part under construction: canonical digits, descending exponents.
using Terms = std::vector<GadicTerm>;

struct PartsBuilder {
    std::uint64_t g;
    const PartitionSpec& spec;
    std::vector<Terms> parts;

    void emit(Terms t) { parts.push_back(std::move(t)); }
    void emit_single(std::uint64_t exponent, std::uint64_t digit) {
        emit(Terms{{exponent, digit}});
    }
};

// a * g^fe split into exactly `count` parts: the whole term for count == 1,
// otherwise (a-1) g^fe [when a > 1] followed by a telescoped run
// (g-1) g^{fe-1}, ..., (g-1) g^{fe-M}, g^{fe-M}.
void expand_top(PartsBuilder& pb, std::uint64_t fe, std::uint64_t a, std::uint64_t count) {
    check_invariant(count >= 1, "expand_top: count >= 1");
    if (count == 1) {
        pb.emit_single(fe, a);
        return;
    }
    std::uint64_t m = count - 1;
    if (a > 1) {
        pb.emit_single(fe, a - 1);
        m = count - 2;
        if (m == 0) {
            pb.emit_single(fe, 1);
            return;
        }
    }
    check_invariant(fe >= m + 3, "telescoped exponent f0-" + std::to_string(m) +
                                     " would reach the removed element's position");
    for (std::uint64_t j = 1; j <= m; ++j) pb.emit_single(fe - j, pb.g - 1);
    pb.emit_single(fe - m, 1);
}

}  // namespace

Thm1Decomposer::Thm1Decomposer(const Thm1Params& params)
    : params_(params), partition_(thm1_partition(params)), forbidden_(nat_pow(params.g, 2)) {}

namespace {

std::string classify_split(unsigned h, const std::vector<GadicTerm>& all,
                           const std::vector<GadicTerm>& in_w0,
                           const std::vector<GadicTerm>& in_pos) {
    if (in_w0.empty()) return all.size() >= h ? "1.1" : "1.2";

    if (in_w0.size() == 1 && in_w0[0].exponent == 2) {
        const std::uint64_t a2 = in_w0[0].digit;
        const std::size_t l = in_pos.size();
        if (a2 > 1) return l >= h - 1 ? "3.1" : "3.2";
        return l >= std::size_t(h) - 2 ? "3.3" : "3.4";
    }

    if (in_pos.empty()) {
        const std::size_t k = in_w0.size();
        if (k == 1) return "2.3-k1";
        if (k == 2) {
            const auto& f1 = in_w0[1];  // smaller exponent
            return (f1.exponent == 2 && f1.digit == 1) ? "2.3-k2-f1eq2" : "2.3-k2";
        }
        return "2.3-k3";
    }
    return in_pos.size() >= std::size_t(h) - 1 ? "2.1" : "2.2";
}

}  // namespace

std::string Thm1Decomposer::classify(const Nat& n) const {
    if (n <= params_.m2())
        throw OutOfRangeError("n = " + to_decimal(n) + " <= m_2 = " + to_decimal(params_.m2()) +
                              ": below the proven range");
    const auto e = expand(n, params_.g);
    std::vector<GadicTerm> in_w0, in_pos;
    for (const auto& t : e.terms())
        (partition_.cell_at(t.exponent) == 0 ? in_w0 : in_pos).push_back(t);
    return classify_split(params_.h, e.terms(), in_w0, in_pos);
}

DecompositionCertificate Thm1Decomposer::decompose(const Nat& n) const {
    if (n <= params_.m2())
        throw OutOfRangeError("n = " + to_decimal(n) + " <= m_2 = " + to_decimal(params_.m2()) +
                              ": below the proven range");
    const std::uint64_t g = params_.g;
    const unsigned h = params_.h;
    const auto e = expand(n, g);

    std::vector<GadicTerm> in_w0, in_pos;
    for (const auto& t : e.terms())
        (partition_.cell_at(t.exponent) == 0 ? in_w0 : in_pos).push_back(t);
    const std::string label = classify_split(h, e.terms(), in_w0, in_pos);

    TraceStep step;
    step.label = label;
    step.target = n;

    PartsBuilder pb{g, partition_, {}};

    auto singles_then_top = [&](const std::vector<GadicTerm>& terms,
                                std::uint64_t top_count) {
        // terms descending; terms[0] is f_0, the rest become singleton parts.
        for (std::size_t j = 1; j < terms.size(); ++j)
            pb.emit_single(terms[j].exponent, terms[j].digit);
        expand_top(pb, terms[0].exponent, terms[0].digit, top_count);
    };
    auto record_f = [&](const std::vector<GadicTerm>& terms) {
        for (const auto& t : terms) step.f.push_back(t.exponent);
        step.l = terms.size();
    };
    auto emit_groups = [&](const std::vector<GadicTerm>& terms, unsigned count) {
        std::vector<std::uint64_t> exps;
        for (const auto& t : terms) exps.push_back(t.exponent);
        auto groups = split_groups(exps, partition_, count);
        step.groups.insert(step.groups.end(), groups.begin(), groups.end());
        for (const auto& grp : groups) {
            Terms part;
            for (auto it = grp.rbegin(); it != grp.rend(); ++it) {
                auto term = std::find_if(terms.begin(), terms.end(),
                                         [&](const GadicTerm& t) { return t.exponent == *it; });
                part.push_back(*term);
            }
            pb.emit(std::move(part));
        }
    };

    if (label == "1.1") {
        emit_groups(e.terms(), h);
    } else if (label == "1.2") {
        record_f(e.terms());
        const std::uint64_t l = e.terms().size();
        const std::uint64_t f0 = e.terms()[0].exponent;
        check_invariant(f0 > params_.m1, "f_0 > m_1 required in case 1.2");
        if (e.terms()[0].digit == 1)
            check_invariant(f0 - (h - l) > l + 2, "f_0-(h-l) > l+2 violated in case 1.2");
        else
            check_invariant(f0 - (h - l - 1) > l + 3,
                            "f_0-(h-l-1) > l+3 violated in case 1.2");
        singles_then_top(e.terms(), h - l + 1);
    } else if (label == "2.1") {
        Terms w0_part(in_w0.begin(), in_w0.end());
        step.groups.push_back({});
        for (const auto& t : in_w0) step.groups.back().push_back(t.exponent);
        pb.emit(std::move(w0_part));
        emit_groups(in_pos, h - 1);
    } else if (label == "2.2") {
        record_f(in_pos);
        const std::uint64_t l = in_pos.size();
        const std::uint64_t f0 = in_pos[0].exponent;
        if (in_pos[0].digit == 1)
            check_invariant(f0 - (h - l - 1) > l + 3,
                            "f_0-(h-l-1) > l+3 violated in case 2.2");
        else
            check_invariant(f0 - (h - l - 2) > l + 4,
                            "f_0-(h-l-2) > l+4 violated in case 2.2");
        pb.emit(Terms(in_w0.begin(), in_w0.end()));
        singles_then_top(in_pos, h - l);
    } else if (label == "2.3-k1") {
        record_f(in_w0);
        const std::uint64_t f0 = in_w0[0].exponent;
        step.k = 1;
        check_invariant(f0 >= h + 2, "f_0 >= h+2 violated in case 2.3");
        expand_top(pb, f0, in_w0[0].digit, h);
    } else if (label == "2.3-k2") {
        record_f(in_w0);
        step.k = 2;
        check_invariant(in_w0[0].exponent >= h + 2, "f_0 >= h+2 violated in case 2.3");
        singles_then_top(in_w0, h - 1);
    } else if (label == "2.3-k2-f1eq2") {
        record_f(in_w0);
        step.k = 2;
        check_invariant(in_w0[0].exponent >= h + 2, "f_0 >= h+2 violated in case 2.3");
        // a_{f_1} g^{f_1} = g^2 rewritten as (g-1)g + g.
        pb.emit_single(1, g - 1);
        pb.emit_single(1, 1);
        expand_top(pb, in_w0[0].exponent, in_w0[0].digit, h - 2);
    } else if (label == "2.3-k3") {
        record_f(in_w0);
        const std::uint64_t k = in_w0.size();
        step.k = k;
        const std::uint64_t f0 = in_w0[0].exponent;
        check_invariant(f0 >= h + 2, "f_0 >= h+2 violated in case 2.3");
        const bool hazard = std::any_of(in_w0.begin(), in_w0.end(), [](const GadicTerm& t) {
            return t.exponent == 2 && t.digit == 1;
        });
        if (!hazard && k <= h) {
            singles_then_top(in_w0, h - k + 1);
        } else if (hazard && k + 1 <= h) {
            // g^2 rewritten as (g-1)g + g; the top telescopes one step less.
            for (std::size_t j = 1; j < in_w0.size(); ++j) {
                if (in_w0[j].exponent == 2) {
                    pb.emit_single(1, g - 1);
                    pb.emit_single(1, 1);
                } else {
                    pb.emit_single(in_w0[j].exponent, in_w0[j].digit);
                }
            }
            expand_top(pb, f0, in_w0[0].digit, h - k);
        } else {
            // k >= h (or k = h with the g^2 digit): merge the smallest
            // trailing exponents into one W_0 group so the part count fits;
            // the group that absorbs position 2 is multi-digit, hence != g^2.
            std::vector<GadicTerm> tail(in_w0.begin() + 1, in_w0.end());
            std::sort(tail.begin(), tail.end(),
                      [](const GadicTerm& a, const GadicTerm& b) { return a.exponent < b.exponent; });
            std::size_t merge_count = k - h + 1;  // >= 1
            if (hazard) {
                // keep position 2 inside the merged group, with company
                auto two = std::find_if(tail.begin(), tail.end(),
                                        [](const GadicTerm& t) { return t.exponent == 2; });
                std::rotate(tail.begin(), two, two + 1);
                merge_count = std::max<std::size_t>(merge_count, 2);
            }
            const std::uint64_t top_count = h - (k - merge_count);
            Terms merged(tail.begin(), tail.begin() + merge_count);
            std::sort(merged.begin(), merged.end(),
                      [](const GadicTerm& a, const GadicTerm& b) { return a.exponent > b.exponent; });
            std::vector<GadicTerm> singles(tail.begin() + merge_count, tail.end());
            std::sort(singles.begin(), singles.end(),
                      [](const GadicTerm& a, const GadicTerm& b) { return a.exponent > b.exponent; });
            for (const auto& t : singles) pb.emit_single(t.exponent, t.digit);
            step.groups.push_back({});
            for (const auto& t : merged) step.groups.back().push_back(t.exponent);
            pb.emit(std::move(merged));
            expand_top(pb, f0, in_w0[0].digit, top_count);
        }
    } else {  // Case 3: W_0 support is exactly {2}
        const std::uint64_t a2 = in_w0[0].digit;
        check_invariant(!in_pos.empty(), "case 3 requires an exponent above m_1");
        const std::uint64_t l = in_pos.size();
        if (label == "3.1") {
            pb.emit_single(2, a2);
            emit_groups(in_pos, h - 1);
        } else if (label == "3.2") {
            record_f(in_pos);
            const std::uint64_t f0 = in_pos[0].exponent;
            if (in_pos[0].digit == 1)
                check_invariant(f0 - (h - l - 1) > l + 3,
                                "f_0-(h-l-1) > l+3 violated in case 3.2");
            else
                check_invariant(f0 - (h - l - 2) > l + 4,
                                "f_0-(h-l-2) > l+4 violated in case 3.2");
            pb.emit_single(2, a2);
            singles_then_top(in_pos, h - l);
        } else if (label == "3.3") {
            std::set<unsigned> cells;
            for (const auto& t : in_pos) cells.insert(partition_.cell_at(t.exponent));
            check_invariant(
                cells.size() <= std::size_t(h) - 2,
                "case 3.3 grouping infeasible: exponents span " + std::to_string(cells.size()) +
                    " distinct cells, construction needs at most " + std::to_string(h - 2) +
                    " (outside the written construction's reach)");
            pb.emit_single(1, g - 1);
            pb.emit_single(1, 1);
            emit_groups(in_pos, h - 2);
        } else {  // 3.4
            record_f(in_pos);
            const std::uint64_t f0 = in_pos[0].exponent;
            check_invariant(l <= std::uint64_t(h) - 3, "l <= h-3 violated in case 3.4");
            if (in_pos[0].digit == 1)
                check_invariant(f0 - (h - l - 2) > l + 4,
                                "f_0-(h-l-2) > l+4 violated in case 3.4");
            else
                check_invariant(f0 - (h - l - 3) > l + 5,
                                "f_0-(h-l-3) > l+5 violated in case 3.4");
            pb.emit_single(1, g - 1);
            pb.emit_single(1, 1);
            singles_then_top(in_pos, h - l - 1);
        }
    }

    // Assemble and self-check; the independent checker re-verifies from the
    // raw values.
    DecompositionCertificate cert;
    cert.n = n;
    cert.g = g;
    cert.h = h;
    cert.forbidden = forbidden_;
    cert.trace.case_label = label;

    check_invariant(pb.parts.size() == h, "display produced " + std::to_string(pb.parts.size()) +
                                              " parts, expected h = " + std::to_string(h));
    Nat sum(0);
    for (auto& terms : pb.parts) {
        GadicExpansion part(g, terms);
        const Nat value = evaluate(part);
        const auto cell = partition_.uniform_cell(part);
        check_invariant(cell.has_value(), "emitted part crosses cells");
        check_invariant(value != forbidden_, "emitted part equals the removed element");
        check_invariant(value >= 1, "emitted empty part");
        sum += value;
        cert.parts.push_back(value);
        cert.part_cells.push_back(*cell);
    }
    check_invariant(sum == n, "parts sum to " + to_decimal(sum) + ", expected " + to_decimal(n));

    cert.trace.steps.push_back(std::move(step));
    return cert;
}

const std::vector<std::string>& Thm1Decomposer::case_labels() {
    static const std::vector<std::string> labels{
        "1.1", "1.2", "2.1", "2.2", "2.3-k1", "2.3-k2", "2.3-k2-f1eq2", "2.3-k3",
        "3.1", "3.2", "3.3", "3.4"};
    return labels;
}

bool Thm1Decomposer::reachable(const std::string& label) const {
    if (label == "3.1" || label == "3.2") return params_.g >= 3;
    return std::find(case_labels().begin(), case_labels().end(), label) !=
           case_labels().end();
}

namespace {

// Support/digit picks for the sampler. Positions are drawn analytically from
// the construction's layout rather than by scanning, since the g=3 blocks sit
// beyond position 3^11.
struct SampleCtx {
    const Thm1Params& p;
    std::mt19937_64& rng;
    std::uint64_t max_exp;
    std::uint64_t blocks;   // usable blocks above m_1
    std::uint64_t e_min;    // least e with g^e > m_2

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        return lo + rng() % (hi - lo + 1);
    }
    std::uint64_t digit() { return uniform(1, p.g - 1); }

    // random position inside block i (cells >= 1)
    std::uint64_t block_pos(std::uint64_t i) {
        return p.m1 + (i - 1) * p.gap + 1 + uniform(0, p.t - 1);
    }

    // `count` distinct positions in cells >= 1, optionally restricted to the
    // given cell residues. Draws lean on the lowest usable blocks: the g=3
    // parameterizations put block 1 at position 3^11, so every extra block
    // multiplies the sampled magnitudes by g^gap.
    std::vector<std::uint64_t> cell_positions(std::size_t count,
                                              const std::vector<unsigned>* cells) {
        std::vector<std::uint64_t> allowed_blocks;
        for (std::uint64_t i = 1; i <= blocks; ++i) {
            const unsigned cell = (i - 1) % (p.h - 1) + 1;
            if (!cells || std::find(cells->begin(), cells->end(), cell) != cells->end())
                allowed_blocks.push_back(i);
        }
        if (allowed_blocks.size() * p.t < count)
            throw ParamError("sample_for_case: max_exponent " + std::to_string(max_exp) +
                             " leaves too few block positions for the requested label");
        const std::size_t keep = std::max<std::size_t>((count + p.t - 1) / p.t + 1, 2);
        if (allowed_blocks.size() > keep) allowed_blocks.resize(keep);
        std::set<std::uint64_t> out;
        while (out.size() < count)
            out.insert(block_pos(allowed_blocks[rng() % allowed_blocks.size()]));
        return {out.begin(), out.end()};
    }
};

Nat terms_value(std::uint64_t g, const std::map<std::uint64_t, std::uint64_t>& digits) {
    Nat n(0);
    for (const auto& [e, d] : digits) n += d * nat_pow(g, e);
    return n;
}

}  // namespace

Nat Thm1Decomposer::sample_for_case(const std::string& label, std::mt19937_64& rng,
                                    std::uint64_t max_exponent) const {
    if (std::find(case_labels().begin(), case_labels().end(), label) == case_labels().end())
        throw ParamError("unknown case label: " + label);
    if (!reachable(label))
        throw ParamError("label " + label + " unreachable: the position-2 digit is always 1 for g=" +
                         std::to_string(params_.g));

    const std::uint64_t g = params_.g;
    const unsigned h = params_.h;

    std::uint64_t e_min = 0;
    {
        Nat pw(1);
        while (pw <= params_.m2()) {
            pw *= g;
            ++e_min;
        }
    }
    std::uint64_t blocks = 0;
    if (max_exponent >= params_.m1 + 1 + params_.t)
        blocks = (max_exponent - params_.m1 - params_.t) / params_.gap + 1;
    SampleCtx ctx{params_, rng, max_exponent, blocks, e_min};
    check_invariant(e_min + 2 <= params_.m1, "m_1 unexpectedly close to log_g(m_2)");

    std::map<std::uint64_t, std::uint64_t> digits;
    auto add_cell_positions = [&](std::size_t count, const std::vector<unsigned>* cells) {
        for (std::uint64_t pos : ctx.cell_positions(count, cells)) digits[pos] = ctx.digit();
    };
    // distinct W_0 positions in [lo, m1]
    auto add_low_positions = [&](std::size_t count, std::uint64_t lo) {
        while (digits.size() < count)
            digits.emplace(ctx.uniform(lo, params_.m1), 0);
        for (auto& [e, d] : digits)
            if (d == 0) d = ctx.digit();
    };

    if (label == "1.1") {
        add_cell_positions(h + ctx.rng() % 3, nullptr);
    } else if (label == "1.2") {
        add_cell_positions(1 + ctx.rng() % (h - 1), nullptr);
    } else if (label == "2.1" || label == "2.2") {
        const std::size_t l =
            label == "2.1" ? (h - 1) + ctx.rng() % 2 : 1 + ctx.rng() % (h - 2);
        add_cell_positions(l, nullptr);
        // nonempty W_0 side, never exactly {2}
        const std::size_t w0_count = 1 + ctx.rng() % 2;
        std::set<std::uint64_t> w0;
        while (w0.size() < w0_count) w0.insert(ctx.uniform(2, params_.m1));
        if (w0.size() == 1 && *w0.begin() == 2) w0.insert(ctx.uniform(3, params_.m1));
        for (std::uint64_t pos : w0) digits[pos] = ctx.digit();
    } else if (label == "2.3-k1") {
        digits[ctx.uniform(ctx.e_min, params_.m1)] = ctx.digit();
    } else if (label == "2.3-k2" || label == "2.3-k2-f1eq2") {
        const std::uint64_t f0 = ctx.uniform(ctx.e_min, params_.m1);
        digits[f0] = ctx.digit();
        if (label == "2.3-k2-f1eq2") {
            digits[2] = 1;
        } else {
            std::uint64_t f1 = ctx.uniform(0, f0 - 1);
            std::uint64_t d1 = ctx.digit();
            while (f1 == 2 && d1 == 1) {  // that pair is the f1=2 variant
                f1 = ctx.uniform(0, f0 - 1);
                d1 = ctx.digit();
            }
            digits[f1] = d1;
        }
    } else if (label == "2.3-k3") {
        const std::size_t k = 3 + ctx.rng() % h;  // reaches the k > h rewrites
        digits[ctx.uniform(ctx.e_min, params_.m1)] = ctx.digit();
        add_low_positions(k, 0);
    } else if (label == "3.1" || label == "3.2") {
        digits[2] = ctx.uniform(2, g - 1);
        add_cell_positions(label == "3.1" ? (h - 1) + ctx.rng() % 2 : 1 + ctx.rng() % (h - 2),
                           nullptr);
    } else if (label == "3.3") {
        digits[2] = 1;
        // keep the spread within h-2 distinct cells; the written construction
        // does not cover supports touching all h-1 of them
        const std::size_t count = (h - 2) + ctx.rng() % 3;
        const std::size_t avail = std::min<std::uint64_t>(h - 2, ctx.blocks);
        const std::size_t need = (count + params_.t - 1) / params_.t;
        if (need > avail)
            throw ParamError("sample_for_case: max_exponent too small for label 3.3");
        const std::size_t cell_count = need + (avail > need ? ctx.rng() % (avail - need + 1) : 0);
        std::vector<unsigned> cells;
        while (cells.size() < cell_count) {
            const unsigned c = 1 + ctx.rng() % avail;  // cells 1..avail own the low blocks
            if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
        }
        add_cell_positions(count, &cells);
    } else {  // 3.4
        digits[2] = 1;
        add_cell_positions(1 + (h >= 5 ? ctx.rng() % (h - 3) : 0), nullptr);
    }

    const Nat n = terms_value(g, digits);
    const std::string got = classify(n);
    check_invariant(got == label, "sampler produced case " + got + " for requested " + label);
    return n;
}

DecompositionCertificate decompose_thm1(const Nat& n, const Thm1Params& p) {
    return Thm1Decomposer(p).decompose(n);
}

std::string classify_case(const Nat& n, const Thm1Params& p) {
    return Thm1Decomposer(p).classify(n);
}

}  // namespace gbasis
