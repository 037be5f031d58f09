#pragma once

#include <string>
#include <vector>

#include "aperiodic/gaplabel.hpp"
#include "aperiodic/substitution.hpp"

namespace aperiodic {

// Named case studies: "thue-morse", "fibonacci", "period-doubling", and
// "periodic:p" for the p-letter cyclic word.  Throws InputError for names
// outside this list.
Substitution preset_substitution(const std::string& name);

bool is_preset_name(const std::string& name);
std::vector<std::string> preset_names();

// Balanced spectral weights (+1/-1 on a two-letter alphabet, cos(2 pi j / p)
// on periodic:p).
std::vector<double> preset_potential(const Substitution& sub);

// The Bragg/eigenvalue module 2 pi * {m/2^n} of the Thue-Morse chain.
RealModule thue_morse_e_top();
// Its gap-label module {m/(3 * 2^n)}.
RealModule thue_morse_gap_module();
// The Fibonacci gap-label module {m + n/tau}.
RealModule fibonacci_gap_module();

}  // namespace aperiodic
