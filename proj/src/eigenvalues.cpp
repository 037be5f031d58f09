#include "aperiodic/eigenvalues.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aperiodic/errors.hpp"
#include "aperiodic/format.hpp"

namespace aperiodic {

double discrepancy_over_pairs(const std::vector<MatchingPair>& pairs, double k) {
    double worst = 0.0;
    for (const auto& p : pairs) {
        // |e^{ik d} - 1| = 2 |sin(k d / 2)|
        const double d = 2.0 * std::abs(std::sin(0.5 * k * p.separation));
        worst = std::max(worst, d);
    }
    return worst;
}

DiscrepancySample eigenvalue_discrepancy(const DecoratedPointSet& ps, double k,
                                         double R, std::size_t max_pairs) {
    const auto pairs = matching_pairs(ps, R, max_pairs);
    return DiscrepancySample{R, discrepancy_over_pairs(pairs, k), pairs.size()};
}

EigenvalueReport eigenvalue_verdict(const DecoratedPointSet& ps, double k,
                                    const EigenvalueTestOptions& opts) {
    if (opts.radii.size() < 3)
        throw InputError("eigenvalue_verdict: at least 3 radii required");
    for (std::size_t i = 1; i < opts.radii.size(); ++i)
        if (!(opts.radii[i] > opts.radii[i - 1]))
            throw InputError("eigenvalue_verdict: radius schedule must be strictly increasing");
    const double largest = opts.radii.back();
    if (2.0 * largest >= ps.window_hi - ps.window_lo)
        throw WindowError("eigenvalue_verdict: window too small for the largest radius");

    EigenvalueReport report;
    report.k = k;
    bool any_empty = false;
    for (double R : opts.radii) {
        const auto s = eigenvalue_discrepancy(ps, k, R, opts.max_pairs);
        report.radii.push_back(R);
        report.discrepancies.push_back(s.discrepancy);
        report.pairs_used.push_back(s.pairs_used);
        if (s.pairs_used == 0) any_empty = true;
    }

    const double final_d = report.discrepancies.back();
    const double min_d = *std::min_element(report.discrepancies.begin(),
                                           report.discrepancies.end());
    const bool decaying_trend = final_d <= min_d + opts.tol;
    if (any_empty)
        report.verdict = "undecided";
    else if (final_d < opts.tol && decaying_trend)
        report.verdict = "topological";
    else if (min_d >= opts.rejection_floor)
        report.verdict = "rejected";
    else
        report.verdict = "undecided";
    return report;
}

bool group_closure_check(const DecoratedPointSet& ps, double k1, double k2,
                         double R, double tol, std::size_t max_pairs) {
    const auto pairs = matching_pairs(ps, R, max_pairs);
    const double d1 = discrepancy_over_pairs(pairs, k1);
    const double d2 = discrepancy_over_pairs(pairs, k2);
    if (d1 >= tol || d2 >= tol)
        throw InputError("group_closure_check: both wave numbers must pass at the given radius");
    return discrepancy_over_pairs(pairs, k1 + k2) < 2.0 * tol;
}

std::string eigenvalue_report_to_json(const EigenvalueReport& report) {
    nlohmann::json j;
    j["k"] = round_for_output(report.k);
    j["radii"] = report.radii;
    nlohmann::json ds = nlohmann::json::array();
    for (double d : report.discrepancies) ds.push_back(round_for_output(d));
    j["discrepancies"] = ds;
    j["pairs_used"] = report.pairs_used;
    j["verdict"] = report.verdict;
    return j.dump(2) + "\n";
}

}  // namespace aperiodic
