#pragma once

#include <cstdint>
#include <vector>

namespace aperiodic {

// A finite block of a symbolic sequence.  `letters` holds alphabet indices;
// the letter at letters[i] sits at absolute index first_index + i, so a
// one-sided word has first_index = 0 and a two-sided word built by mirror
// completion has first_index = -n for a right half of length n.
struct Word {
    std::vector<std::uint8_t> letters;
    std::int64_t first_index = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(letters.size()); }
    std::int64_t begin_index() const { return first_index; }
    std::int64_t end_index() const { return first_index + size(); }

    // Letter at absolute index i; caller keeps i within [begin_index, end_index).
    std::uint8_t at(std::int64_t i) const {
        return letters[static_cast<std::size_t>(i - first_index)];
    }
};

}  // namespace aperiodic
