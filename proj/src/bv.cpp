#include "pfl/bv.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pfl {

namespace {

struct BlockHists {
    std::vector<std::uint64_t> counts; // concatenated per-q histograms
    std::uint64_t global = 0;
    std::uint64_t boundary = 0;
};

} // namespace

DiscrepancyReport bv_discrepancy(std::uint64_t x, std::uint64_t q_max,
                                 const std::optional<FracWindow>& window,
                                 const SieveOptions& opt, std::uint64_t residue_budget) {
    if (!(3 <= q_max && q_max <= x))
        throw std::invalid_argument("bv_discrepancy: requires 3 <= Q <= x");
    DiscrepancyReport report;
    report.x = x;
    report.q_max = q_max;
    report.window = window;

    ArithTables tables = arith_tables(q_max);

    // moduli are processed in blocks small enough for the residue budget
    std::uint64_t q_block_lo = 3;
    bool first_block = true;
    while (q_block_lo <= q_max) {
        if (q_block_lo > residue_budget)
            throw std::invalid_argument("bv_discrepancy: Q exceeds the residue histogram budget");
        std::uint64_t q_block_hi = q_block_lo; // inclusive
        std::uint64_t counters = q_block_lo;
        while (q_block_hi < q_max && counters + (q_block_hi + 1) <= residue_budget) {
            ++q_block_hi;
            counters += q_block_hi;
        }
        std::vector<std::uint64_t> offset(q_block_hi + 1, 0);
        {
            std::uint64_t off = 0;
            for (std::uint64_t q = q_block_lo; q <= q_block_hi; ++q) {
                offset[q] = off;
                off += q;
            }
            counters = off;
        }

        BlockHists totals;
        totals.counts.assign(counters, 0);
        BlockHists merged = segment_sweep<BlockHists>(
            x, 2 * x, opt, std::move(totals),
            [&](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
                BlockHists local;
                local.counts.assign(counters, 0);
                seg.for_each_prime(
                    [&](std::uint64_t p) {
                        if (window) {
                            switch (in_window(p, *window)) {
                                case Membership::Boundary: ++local.boundary; return;
                                case Membership::Out: return;
                                case Membership::In: break;
                            }
                        }
                        ++local.global;
                        for (std::uint64_t q = q_block_lo; q <= q_block_hi; ++q)
                            ++local.counts[offset[q] + p % q];
                    },
                    clo, chi);
                return local;
            },
            [](BlockHists& acc, const BlockHists& v) {
                acc.global += v.global;
                acc.boundary += v.boundary;
                for (std::size_t i = 0; i < acc.counts.size(); ++i)
                    acc.counts[i] += v.counts[i];
            });

        if (first_block) {
            report.global_count = merged.global;
            report.boundary_total = merged.boundary;
            first_block = false;
        }
        for (std::uint64_t q = q_block_lo; q <= q_block_hi; ++q) {
            DiscrepancyRow row;
            row.q = q;
            row.expected = static_cast<double>(merged.global) / static_cast<double>(tables.phi[q]);
            double best = -1.0;
            for (std::uint64_t a = 1; a < q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                std::uint64_t n = merged.counts[offset[q] + a];
                double dev = std::fabs(static_cast<double>(n) - row.expected);
                if (dev > best) {
                    best = dev;
                    row.worst_a = a;
                    row.local = n;
                }
            }
            row.discrepancy = best;
            report.rows.push_back(row);
        }
        q_block_lo = q_block_hi + 1;
    }

    double total = 0.0;
    for (const auto& row : report.rows) total += row.discrepancy;
    report.total = total;
    return report;
}

std::vector<ScalingRow> scaling_report(const std::vector<std::uint64_t>& x_grid,
                                       double theta, double eps, const FracWindow& window,
                                       const SieveOptions& opt) {
    if (x_grid.empty()) throw std::invalid_argument("scaling_report: empty grid");
    if (!(theta - eps > 0.0)) throw std::invalid_argument("scaling_report: requires theta - eps > 0");
    std::vector<ScalingRow> rows;
    rows.reserve(x_grid.size());
    for (std::uint64_t x : x_grid) {
        if (x < 100) throw std::invalid_argument("scaling_report: grid entries must be >= 100");
        std::uint64_t q_max = static_cast<std::uint64_t>(
            std::pow(static_cast<double>(x), theta - eps));
        if (q_max < 3) q_max = 3;
        DiscrepancyReport rep = bv_discrepancy(x, q_max, window, opt);
        ScalingRow row;
        row.x = x;
        row.q_max = q_max;
        row.total = rep.total;
        double lx = std::log(static_cast<double>(x));
        row.ratio = rep.total / static_cast<double>(x);
        row.norm_log1 = row.ratio * lx;
        row.norm_log2 = row.ratio * lx * lx;
        row.norm_log3 = row.ratio * lx * lx * lx;
        rows.push_back(row);
    }
    return rows;
}

} // namespace pfl
