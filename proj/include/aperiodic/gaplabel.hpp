#pragma once

#include <optional>
#include <string>
#include <vector>

namespace aperiodic {

// A finitely generated subgroup of (R, +) with an optional denominator
// closure: elements are sums c_i * g_i with c_i integers, or integers over
// the denominator primes when those are present ({m/2^n} style).
//
// Generators may carry an exact descriptor ("1", "1/3", "tau^-1",
// "2/3 tau", ...) used for exact arithmetic where possible; `scale` is a
// display scale: "2pi" means stored values are in units of 2 pi (the module
// of Bragg peak positions k = 2 pi * value).
struct ModuleGenerator {
    double value;
    std::string exact;  // empty when no exact form is known
};

struct RealModule {
    std::vector<ModuleGenerator> generators;
    std::vector<int> denominator_primes;  // empty => plain integer coefficients
    std::string scale = "1";              // "1" or "2pi"

    int rank() const { return static_cast<int>(generators.size()); }
    bool has_denominators() const { return !denominator_primes.empty(); }
};

RealModule module_from_json(const std::string& json_text);
std::string module_to_json(const RealModule& m);

// Gap label of a Bragg peak in d = 1: k / (2 pi).
double bragg_to_gap_1d(double k);

// Gap label of d Bragg vectors in R^d: det(k_1 .. k_d) / (2 pi)^d, the
// determinant computed by fraction-free (Bareiss) elimination so integer
// inputs stay exact.
double bragg_to_gap_d(const std::vector<std::vector<double>>& k_vectors);

// One coefficient of a module element: numerator / prime_power, where
// prime_power is a product of the module's denominator primes.
struct Coefficient {
    long long numerator = 0;
    long long denominator = 1;
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

struct MembershipResult {
    bool found = false;
    std::vector<Coefficient> coefficients;  // one per generator when found
    double residual = 0.0;
};

struct MembershipOptions {
    double tol = 1e-9;
    long long coeff_bound = 1000000;  // bound on coefficient numerators
    int max_denominator_exponent = 40;
};

// Decide whether x is a module element within tol, searching coefficients
// with bounded numerators: continued-fraction assisted for rank 1 with
// denominator closure, bounded exhaustive search otherwise.  Rank > 2 is
// rejected (UnsupportedError).  A negative answer means the bounded search
// found nothing, not a proof of non-membership.
MembershipResult membership(const RealModule& m, double x,
                            const MembershipOptions& opts = {});

// Index of subgroup a inside b when finite and detectable: rational
// generator ratios for rank 1 with matching denominator closure, integer
// coefficient matrices for closure-free modules.  nullopt = incomparable
// (or infinite index).
std::optional<long long> subgroup_index(const RealModule& a, const RealModule& b);

// Divide all generators by dens (the tight-binding normalization
// Gap = (1/dens) * tau_*K_0): exact descriptors are kept when dens is
// recognized as an exact small rational, otherwise dropped.
RealModule rescale_for_tight_binding(const RealModule& m, double dens);

// Map a d=1 Bragg module (scale "2pi") to its gap-label module: divide
// actual values by 2 pi, which just drops the display scale.
RealModule module_from_bragg(const RealModule& e_top);

// Numeric value of a generator's exact descriptor, when parseable.
std::optional<double> exact_descriptor_value(const std::string& exact);

}  // namespace aperiodic
