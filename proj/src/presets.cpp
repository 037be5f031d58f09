#include "aperiodic/presets.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "aperiodic/errors.hpp"

namespace aperiodic {

namespace {

constexpr double kTauInv = 1.0 / std::numbers::phi;

std::optional<int> periodic_period(const std::string& name) {
    if (name.rfind("periodic:", 0) != 0) return std::nullopt;
    const std::string digits = name.substr(9);
    if (digits.empty()) return std::nullopt;
    int p = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
        p = p * 10 + (c - '0');
        if (p > 1000) return std::nullopt;
    }
    return p;
}

}  // namespace

Substitution preset_substitution(const std::string& name) {
    Substitution s;
    if (name == "thue-morse") {
        s.alphabet = {"1", "1b"};
        s.rules = {{0, 1}, {1, 0}};
        s.lengths = {1.0, 1.0};
        s.seed = 0;
        s.mirror = true;
    } else if (name == "fibonacci") {
        s.alphabet = {"a", "b"};
        s.rules = {{0, 1}, {0}};
        s.lengths = {1.0, 1.0};
        s.seed = 0;
        s.mirror = false;
    } else if (name == "period-doubling") {
        s.alphabet = {"a", "b"};
        s.rules = {{0, 1}, {0, 0}};
        s.lengths = {1.0, 1.0};
        s.seed = 0;
        s.mirror = false;
    } else if (auto p = periodic_period(name)) {
        if (*p < 1 || *p > 64)
            throw InputError("preset: periodic period must be between 1 and 64");
        // base-2 carry rule j -> (2j, 2j+1) mod p: the fixed point from 0 is
        // the periodic sequence n mod p, and the rule is primitive
        for (int j = 0; j < *p; ++j) {
            s.alphabet.push_back(std::to_string(j));
            s.rules.push_back({static_cast<std::uint8_t>((2 * j) % *p),
                               static_cast<std::uint8_t>((2 * j + 1) % *p)});
            s.lengths.push_back(1.0);
        }
        s.seed = 0;
        s.mirror = false;
    } else {
        throw InputError("preset: unknown name \"" + name +
                         "\" (expected thue-morse, fibonacci, period-doubling, or periodic:p)");
    }
    s.validate();
    return s;
}

bool is_preset_name(const std::string& name) {
    if (name == "thue-morse" || name == "fibonacci" || name == "period-doubling")
        return true;
    const auto p = periodic_period(name);
    return p && *p >= 1 && *p <= 64;
}

std::vector<std::string> preset_names() {
    return {"thue-morse", "fibonacci", "period-doubling", "periodic:p"};
}

std::vector<double> preset_potential(const Substitution& sub) {
    const int n = sub.letter_count();
    if (n == 2) return {1.0, -1.0};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        v[static_cast<std::size_t>(j)] = std::cos(2.0 * std::numbers::pi * j / n);
    return v;
}

RealModule thue_morse_e_top() {
    RealModule m;
    m.generators = {ModuleGenerator{1.0, "1"}};
    m.denominator_primes = {2};
    m.scale = "2pi";
    return m;
}

RealModule thue_morse_gap_module() {
    RealModule m;
    m.generators = {ModuleGenerator{1.0 / 3.0, "1/3"}};
    m.denominator_primes = {2};
    m.scale = "1";
    return m;
}

RealModule fibonacci_gap_module() {
    RealModule m;
    m.generators = {ModuleGenerator{1.0, "1"}, ModuleGenerator{kTauInv, "tau^-1"}};
    m.scale = "1";
    return m;
}

}  // namespace aperiodic
