#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aperiodic/word.hpp"

namespace aperiodic {

// A substitution rule on a finite alphabet, with a tile length per letter,
// a seed letter, and an optional two-sided (mirror) completion flag.
//
// JSON form (exact keys):
//   {"alphabet": ["1","1b"],
//    "rules": {"1": ["1","1b"], "1b": ["1b","1"]},
//    "lengths": {"1": 1.0, "1b": 1.0},
//    "seed": "1", "mirror": true}
struct Substitution {
    std::vector<std::string> alphabet;        // names; index is the letter id
    std::vector<std::vector<std::uint8_t>> rules;  // image of each letter
    std::vector<double> lengths;              // tile length per letter, > 0
    std::uint8_t seed = 0;
    bool mirror = false;

    int letter_count() const { return static_cast<int>(alphabet.size()); }
    // Index of a named letter; throws InputError for unknown names.
    std::uint8_t letter(const std::string& name) const;
    // Structural validation: nonempty alphabet and rules, positive lengths,
    // every rule image nonempty.  Throws InputError with the offending field.
    void validate() const;
};

Substitution substitution_from_json(const std::string& json_text);
std::string substitution_to_json(const Substitution& sub);

// n-fold image of the seed letter, as a one-sided word (first_index 0).
Word iterate(const Substitution& sub, int n);

// n-fold image of an arbitrary letter.
Word iterate_letter(const Substitution& sub, std::uint8_t letter, int n);

// Two-sided word on indices -L..L-1 where L = |iterate(n)|: the right half is
// iterate(n) and the letter at -m is the letter at m-1 (mirror completion).
// Requires sub.mirror and a prefix-stable seed (rule(seed) starts with seed),
// so that iterate(n) is a prefix of iterate(n+1).
Word two_sided_word(const Substitution& sub, int n);

// True iff every rule image begins with the same letter (the common-prefix
// hypothesis under which the Bragg-to-gap correspondence is expected to be
// bijective for primitive irreducible Pisot rules).
bool common_prefix_ok(const Substitution& sub);

// Abelianization: entries[a][b] = number of a's in rule(b), so letter-count
// vectors evolve by counts_{n+1} = M * counts_n.
struct SubstitutionMatrix {
    std::vector<std::vector<std::int64_t>> entries;
    int size() const { return static_cast<int>(entries.size()); }
};

SubstitutionMatrix substitution_matrix(const Substitution& sub);

// Primitivity: some power M^k, k <= size^2, is entrywise positive.
bool is_primitive(const SubstitutionMatrix& m);

struct PerronFrobeniusData {
    double lambda;                    // spectral radius
    std::vector<double> frequencies;  // positive eigenvector, sums to 1
};

// Perron-Frobenius eigenvalue and letter-frequency vector.  Dense solve;
// alphabets larger than 8 are rejected (UnsupportedError), non-primitive
// matrices rejected with the failing power named (InputError).
PerronFrobeniusData pf_data(const SubstitutionMatrix& m);

// True iff every non-Perron root of the characteristic polynomial has
// modulus < 1 (tolerance 1e-9).  Same primitivity/size requirements.
bool is_pisot(const SubstitutionMatrix& m);

struct FrequencyOptions {
    double rel_tol = 1e-8;  // relative agreement between consecutive orders
    int max_order = 26;
    // Earliest order allowed to stop.  Constant-length rules make counts at
    // alternating order pairs agree exactly, so the first permitted
    // comparison wins and min_order, not rel_tol, sets the accuracy there;
    // raise it when tight absolute accuracy is needed.
    int min_order = 8;
};

struct FrequencyEstimate {
    double value;       // occurrences per letter at the converged order
    double achieved;    // relative difference between the last two estimates
    int order;          // the later of the two agreeing orders
};

// Frequency of `word` (letter ids) as a factor of the substitution sequence,
// by counting occurrences at consecutive orders until the estimates agree to
// opts.rel_tol.  A word that is absent once the factor set of its length has
// stabilized gets frequency 0 (the stabilization order is the certificate).
// Throws ConvergenceError (carrying both estimates) if max_order is reached
// without agreement.
FrequencyEstimate patch_frequency(const Substitution& sub,
                                  const std::vector<std::uint8_t>& word,
                                  const FrequencyOptions& opts = {});

// Name-based convenience overload.
FrequencyEstimate patch_frequency(const Substitution& sub,
                                  const std::vector<std::string>& word,
                                  const FrequencyOptions& opts = {});

}  // namespace aperiodic
