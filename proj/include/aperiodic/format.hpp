#pragma once

#include <string>

namespace aperiodic {

// All floating-point output goes through here: 12 significant digits,
// infinities as "inf"/"-inf", so identical configs produce identical bytes.
std::string format_real(double x);

// Round to the 12-significant-digit value that format_real would print,
// for numbers embedded in JSON documents.
double round_for_output(double x);

}  // namespace aperiodic
