#include "aperiodic/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "aperiodic/errors.hpp"
#include "aperiodic/format.hpp"

namespace aperiodic {

namespace {

constexpr double kGrid = 1e-9;  // quantization grid for position comparison

std::int64_t quantize(double x) { return std::llround(x / kGrid); }

bool integral_value(double x) { return x == std::floor(x); }

}  // namespace

DecoratedPointSet DecoratedPointSet::translated(double t) const {
    DecoratedPointSet out = *this;
    for (auto& p : out.positions) p += t;
    out.window_lo += t;
    out.window_hi += t;
    out.integral = out.integral && integral_value(t);
    return out;
}

DecoratedPointSet from_word(const Word& w, const std::vector<double>& lengths,
                            const std::vector<std::string>& alphabet,
                            std::int64_t origin_index) {
    if (w.letters.empty()) throw InputError("from_word: empty word");
    if (lengths.size() != alphabet.size())
        throw InputError("from_word: lengths and alphabet sizes differ");
    for (auto id : w.letters)
        if (id >= alphabet.size()) throw InputError("from_word: letter out of range");
    if (origin_index < w.begin_index() || origin_index >= w.end_index())
        throw InputError("from_word: origin index outside the word");

    DecoratedPointSet ps;
    ps.alphabet = alphabet;
    ps.decorations = w.letters;
    ps.positions.resize(w.letters.size());
    double x = 0.0;
    for (std::int64_t i = 0; i < w.size(); ++i) {
        ps.positions[static_cast<std::size_t>(i)] = x;
        x += lengths[w.letters[static_cast<std::size_t>(i)]];
    }
    const double shift = ps.positions[static_cast<std::size_t>(origin_index - w.begin_index())];
    for (auto& p : ps.positions) p -= shift;
    ps.window_lo = ps.positions.front();
    ps.window_hi = x - shift;  // end of the last tile = next point of the continuation
    ps.integral = true;
    for (double len : lengths)
        if (!integral_value(len)) ps.integral = false;
    if (ps.integral && !integral_value(ps.positions.front())) ps.integral = false;
    return ps;
}

DecoratedPointSet from_word(const Word& w, const Substitution& sub, std::int64_t origin_index) {
    return from_word(w, sub.lengths, sub.alphabet, origin_index);
}

Patch patch_at(const DecoratedPointSet& ps, double x, double R) {
    if (R < 0) throw InputError("patch_at: negative radius");
    if (x - R < ps.window_lo || x + R >= ps.window_hi)
        throw WindowError("patch_at: query interval leaves the populated window");
    Patch patch;
    patch.center = x;
    patch.radius = R;
    auto lo = std::lower_bound(ps.positions.begin(), ps.positions.end(), x - R);
    for (auto it = lo; it != ps.positions.end() && *it <= x + R; ++it) {
        const auto idx = static_cast<std::size_t>(it - ps.positions.begin());
        patch.relative_positions.push_back(*it - x);
        patch.decorations.push_back(ps.decorations[idx]);
    }
    return patch;
}

DensityEstimate density(const DecoratedPointSet& ps) {
    const double full = ps.window_hi - ps.window_lo;
    if (!(full > 0)) throw InputError("density: empty window");
    DensityEstimate est;
    // nested windows anchored at the left edge, doubling up to the full one
    std::vector<double> lengths;
    for (double len = full; len >= 4.0 && lengths.size() < 12; len /= 2) lengths.push_back(len);
    std::reverse(lengths.begin(), lengths.end());
    if (lengths.empty()) lengths.push_back(full);
    for (double len : lengths) {
        const double hi = ps.window_lo + len;
        auto it = std::lower_bound(ps.positions.begin(), ps.positions.end(), hi);
        const auto count = static_cast<double>(it - ps.positions.begin());
        est.window_lengths.push_back(len);
        est.estimates.push_back(count / len);
    }
    est.value = est.estimates.back();
    return est;
}

namespace {

// FNV-1a over 64-bit words; patch identity is (quantized offsets, letters).
struct PatchKeyHash {
    std::uint64_t h = 1469598103934665603ull;
    void mix(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    }
};

}  // namespace

namespace {

// Fast-path precondition: consecutive integer positions that exactly tile the
// window, so the patch around centre i is the decoration slice i-R..i+R.
bool unit_spaced(const DecoratedPointSet& ps) {
    if (ps.positions.empty()) return false;
    if (ps.positions.front() != ps.window_lo) return false;
    if (ps.positions.back() + 1.0 != ps.window_hi) return false;
    for (std::size_t i = 1; i < ps.positions.size(); ++i)
        if (ps.positions[i] - ps.positions[i - 1] != 1.0) return false;
    return true;
}

// Double polynomial rolling hash over the decoration array, so patch
// signatures on unit-spaced sets cost O(1) per centre.
struct PrefixHashes {
    std::vector<std::uint64_t> h1, h2, p1, p2;
    static constexpr std::uint64_t kB1 = 1000003411579ull;
    static constexpr std::uint64_t kB2 = 2862933555777941757ull;

    explicit PrefixHashes(const std::vector<std::uint8_t>& a) {
        const std::size_t n = a.size();
        h1.assign(n + 1, 0);
        h2.assign(n + 1, 0);
        p1.assign(n + 1, 1);
        p2.assign(n + 1, 1);
        for (std::size_t i = 0; i < n; ++i) {
            h1[i + 1] = h1[i] * kB1 + a[i] + 1;
            h2[i + 1] = h2[i] * kB2 + a[i] + 1;
            p1[i + 1] = p1[i] * kB1;
            p2[i + 1] = p2[i] * kB2;
        }
    }
    // hash of a[i..j)
    std::pair<std::uint64_t, std::uint64_t> range(std::size_t i, std::size_t j) const {
        return {h1[j] - h1[i] * p1[j - i], h2[j] - h2[i] * p2[j - i]};
    }
};

struct PairCursor {
    std::size_t i = 0;  // index into the class member list
    std::size_t j = 1;
    bool exhausted = false;
};

}  // namespace

std::vector<MatchingPair> matching_pairs(const DecoratedPointSet& ps, double R,
                                         std::size_t max_pairs) {
    if (R < 0) throw InputError("matching_pairs: negative radius");
    if (max_pairs == 0) return {};

    // eligible centres: patch fully inside the populated window
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < ps.positions.size(); ++i) {
        const double x = ps.positions[i];
        if (x - R >= ps.window_lo && x + R < ps.window_hi) eligible.push_back(i);
    }
    if (eligible.size() < 2) return {};

    // group centres by patch signature
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> classes;
    classes.reserve(eligible.size() * 2);
    const bool fast = unit_spaced(ps);
    if (fast) {
        const auto Ri = static_cast<std::size_t>(std::floor(R));
        PrefixHashes ph(ps.decorations);
        for (std::size_t i : eligible) {
            auto [a, b] = ph.range(i - Ri, i + Ri + 1);
            classes[a ^ (b * 1099511628211ull)].push_back(i);
        }
    } else {
        auto begin = ps.positions.begin();
        for (std::size_t i : eligible) {
            const double x = ps.positions[i];
            auto lo = std::lower_bound(begin, ps.positions.end(), x - R);
            PatchKeyHash key;
            for (auto it = lo; it != ps.positions.end() && *it <= x + R; ++it) {
                const auto idx = static_cast<std::size_t>(it - begin);
                key.mix(static_cast<std::uint64_t>(quantize(*it - x)));
                key.mix(ps.decorations[idx]);
            }
            classes[key.h].push_back(i);
        }
    }

    // order classes deterministically by first member
    std::vector<std::vector<std::size_t>*> ordered;
    for (auto& kv : classes)
        if (kv.second.size() >= 2) ordered.push_back(&kv.second);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->front() < b->front(); });
    if (ordered.empty()) return {};

    // log-spaced separation buckets covering the window span
    const double span = ps.window_hi - ps.window_lo;
    const int bucket_count = std::max(1, static_cast<int>(std::ceil(std::log2(span))) + 1);
    auto bucket_bounds = [](int b) { return std::pair<double, double>(std::exp2(b), std::exp2(b + 1)); };

    // per (class, bucket) lazy pair enumeration; members are position-sorted
    std::vector<std::vector<PairCursor>> cursors(ordered.size(),
                                                 std::vector<PairCursor>(static_cast<std::size_t>(bucket_count)));
    auto next_pair = [&](std::size_t c, int b) -> std::optional<std::pair<std::size_t, std::size_t>> {
        const auto& members = *ordered[c];
        auto& cur = cursors[c][static_cast<std::size_t>(b)];
        if (cur.exhausted) return std::nullopt;
        const auto [lo, hi] = bucket_bounds(b);
        while (cur.i + 1 < members.size()) {
            const double xi = ps.positions[members[cur.i]];
            if (cur.j <= cur.i) cur.j = cur.i + 1;
            // first j with separation >= lo
            {
                auto first = std::lower_bound(members.begin() + static_cast<std::ptrdiff_t>(cur.j),
                                              members.end(), xi + lo,
                                              [&](std::size_t idx, double v) { return ps.positions[idx] < v; });
                cur.j = static_cast<std::size_t>(first - members.begin());
            }
            if (cur.j < members.size() && ps.positions[members[cur.j]] - xi < hi) {
                auto out = std::make_pair(members[cur.i], members[cur.j]);
                ++cur.j;
                if (cur.j >= members.size() || ps.positions[members[cur.j]] - xi >= hi) {
                    ++cur.i;
                    cur.j = cur.i + 1;
                }
                return out;
            }
            ++cur.i;
            cur.j = cur.i + 1;
        }
        cur.exhausted = true;
        return std::nullopt;
    };

    // verify a candidate against the actual patches (hash-collision guard)
    const auto Ri = static_cast<std::size_t>(std::floor(R));
    auto verified = [&](std::size_t a, std::size_t b) {
        if (fast)
            return std::equal(ps.decorations.begin() + static_cast<std::ptrdiff_t>(a - Ri),
                              ps.decorations.begin() + static_cast<std::ptrdiff_t>(a + Ri + 1),
                              ps.decorations.begin() + static_cast<std::ptrdiff_t>(b - Ri));
        const Patch pa = patch_at(ps, ps.positions[a], R);
        const Patch pb = patch_at(ps, ps.positions[b], R);
        if (pa.decorations != pb.decorations) return false;
        if (pa.relative_positions.size() != pb.relative_positions.size()) return false;
        for (std::size_t i = 0; i < pa.relative_positions.size(); ++i)
            if (quantize(pa.relative_positions[i]) != quantize(pb.relative_positions[i]))
                return false;
        return true;
    };

    // round-robin over buckets (small separations first) and classes
    std::vector<MatchingPair> out;
    out.reserve(max_pairs);
    bool progress = true;
    while (out.size() < max_pairs && progress) {
        progress = false;
        for (int b = 0; b < bucket_count && out.size() < max_pairs; ++b) {
            for (std::size_t c = 0; c < ordered.size() && out.size() < max_pairs; ++c) {
                auto pr = next_pair(c, b);
                if (!pr) continue;
                progress = true;
                if (!verified(pr->first, pr->second)) continue;
                const double x = ps.positions[pr->first];
                const double y = ps.positions[pr->second];
                out.push_back(MatchingPair{x, y, y - x});
            }
        }
    }
    return out;
}

std::vector<double> letter_weights(const DecoratedPointSet& ps,
                                   const std::vector<double>& weight_by_letter) {
    if (weight_by_letter.size() != ps.alphabet.size())
        throw InputError("letter_weights: one weight per letter required");
    std::vector<double> w(ps.positions.size());
    for (std::size_t i = 0; i < ps.positions.size(); ++i)
        w[i] = weight_by_letter[ps.decorations[i]];
    return w;
}

std::string pointset_to_csv(const DecoratedPointSet& ps) {
    std::ostringstream out;
    out << "position,symbol\n";
    for (std::size_t i = 0; i < ps.positions.size(); ++i)
        out << format_real(ps.positions[i]) << ',' << ps.alphabet[ps.decorations[i]] << '\n';
    return out.str();
}

}  // namespace aperiodic
