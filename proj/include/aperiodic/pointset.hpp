#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aperiodic/substitution.hpp"
#include "aperiodic/word.hpp"

namespace aperiodic {

// A finite decorated point set on the line: strictly increasing positions,
// one alphabet letter per point.  `window_lo/hi` bound the populated region
// as a half-open interval [lo, hi): every point of the underlying infinite
// set inside it is present, and hi is where the next (unknown) point of the
// continuation would start.
struct DecoratedPointSet {
    std::vector<double> positions;
    std::vector<std::uint8_t> decorations;
    std::vector<std::string> alphabet;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool integral = false;  // all positions and tile lengths are integers

    std::int64_t size() const { return static_cast<std::int64_t>(positions.size()); }
    DecoratedPointSet translated(double t) const;
};

// Points at cumulative tile lengths: the letter at absolute index i is placed
// at sum of lengths of letters in [first_index, i), shifted so the letter at
// origin_index sits at 0.  origin_index must lie inside the word.
DecoratedPointSet from_word(const Word& w, const std::vector<double>& lengths,
                            const std::vector<std::string>& alphabet,
                            std::int64_t origin_index = 0);

DecoratedPointSet from_word(const Word& w, const Substitution& sub,
                            std::int64_t origin_index = 0);

// An R-patch: decorated points within distance R of a centre, stored as
// positions relative to the centre.
struct Patch {
    double center;
    double radius;
    std::vector<double> relative_positions;
    std::vector<std::uint8_t> decorations;
};

// All points in [x-R, x+R], relative to x.  Throws WindowError when the query
// interval is not contained in the populated window.
Patch patch_at(const DecoratedPointSet& ps, double x, double R);

struct DensityEstimate {
    double value;                        // count / window length, full window
    std::vector<double> window_lengths;  // nested windows used
    std::vector<double> estimates;       // count/length on each
};

// Point density per unit length with a nested-window convergence report.
DensityEstimate density(const DecoratedPointSet& ps);

struct MatchingPair {
    double x;
    double y;           // x < y
    double separation;  // y - x
};

// Pairs of point positions whose R-patches agree exactly (positions compared
// on a 1e-9 grid when not integral).  Pairs are drawn round-robin from
// log-spaced separation buckets so many scales are probed; the enumeration
// is deterministic and a larger max_pairs extends it monotonically.
std::vector<MatchingPair> matching_pairs(const DecoratedPointSet& ps, double R,
                                         std::size_t max_pairs);

// Per-point weights from a per-letter table.
std::vector<double> letter_weights(const DecoratedPointSet& ps,
                                   const std::vector<double>& weight_by_letter);

std::string pointset_to_csv(const DecoratedPointSet& ps);

}  // namespace aperiodic
