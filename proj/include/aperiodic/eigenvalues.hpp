#pragma once

#include <string>
#include <vector>

#include "aperiodic/pointset.hpp"

namespace aperiodic {

// Phase discrepancy of e^{ikx} over a set of matching pairs:
//   D = max |e^{ik(x-y)} - 1|  in [0, 2].
// A value near 0 at large patch radius is the signature of a topological
// eigenvalue (pattern-equivariant plane wave).
double discrepancy_over_pairs(const std::vector<MatchingPair>& pairs, double k);

struct DiscrepancySample {
    double radius;
    double discrepancy;
    std::size_t pairs_used;
};

// D(k, R) over pairs sampled by matching_pairs(ps, R, max_pairs).
// pairs_used = 0 flags an empty sample (discrepancy reported as 0).
DiscrepancySample eigenvalue_discrepancy(const DecoratedPointSet& ps, double k,
                                         double R, std::size_t max_pairs);

struct EigenvalueReport {
    double k;
    std::vector<double> radii;
    std::vector<double> discrepancies;
    std::vector<std::size_t> pairs_used;
    std::string verdict;  // "topological" | "rejected" | "undecided"
};

struct EigenvalueTestOptions {
    std::vector<double> radii = {2, 4, 8, 16, 32};
    double tol = 1e-3;           // pass level at the largest radius
    double rejection_floor = 0.1;  // "rejected" needs min D >= this
    std::size_t max_pairs = 512;
};

// Run the discrepancy over the radius schedule and classify:
//   topological: D at the largest radius < tol and the trend is decaying
//                (the final value is the minimum of the schedule up to tol);
//   rejected:    min over the schedule >= rejection_floor;
//   undecided:   anything else, including empty pair samples.
EigenvalueReport eigenvalue_verdict(const DecoratedPointSet& ps, double k,
                                    const EigenvalueTestOptions& opts = {});

// Group property of the eigenvalue set: with k1 and k2 both passing at
// (R, tol), their sum must pass at (R, 2 tol) by |e^{i(a+b)}-1| <=
// |e^{ia}-1| + |e^{ib}-1|.  Throws InputError when the precondition fails.
bool group_closure_check(const DecoratedPointSet& ps, double k1, double k2,
                         double R, double tol, std::size_t max_pairs = 512);

std::string eigenvalue_report_to_json(const EigenvalueReport& report);

}  // namespace aperiodic
