#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Everything here is deliberately written from first principles (closed
// forms, brute-force enumeration, textbook recurrences) so that agreement
// with the library is evidence, not tautology.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// Eigenvalue counting for a symmetric tridiagonal matrix with unit
// off-diagonals, by locating every root of the characteristic polynomial
// with sign-change bisection.  The characteristic polynomial is evaluated
// through the standard three-term recurrence
//   p_0 = 1,  p_1 = d_1 - E,  p_k = (d_k - E) p_{k-1} - p_{k-2};
// with nonzero off-diagonals all eigenvalues are simple, so a fine grid
// over the Gershgorin interval catches exactly N sign changes.

inline double charpoly(const std::vector<double>& diag, double E) {
    double pm1 = 1.0, p = diag[0] - E;
    for (std::size_t k = 1; k < diag.size(); ++k) {
        const double next = (diag[k] - E) * p - pm1;
        pm1 = p;
        p = next;
    }
    return p;
}

inline std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag) {
    double lo = diag[0], hi = diag[0];
    for (const double d : diag) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    lo -= 2.5;
    hi += 2.5;
    const int grid = 20000;
    std::vector<double> roots;
    double prev_e = lo, prev_p = charpoly(diag, lo);
    for (int i = 1; i <= grid; ++i) {
        const double e = lo + (hi - lo) * i / grid;
        const double p = charpoly(diag, e);
        if ((prev_p < 0.0) != (p < 0.0)) {
            double a = prev_e, b = e;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                if ((charpoly(diag, a) < 0.0) != (charpoly(diag, m) < 0.0))
                    b = m;
                else
                    a = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_e = e;
        prev_p = p;
    }
    return roots;
}

inline std::int64_t eigencount_below(const std::vector<double>& diag, double E) {
    std::int64_t n = 0;
    for (const double r : tridiagonal_eigenvalues(diag)) n += (r < E) ? 1 : 0;
    return n;
}

// ---------------------------------------------------------------------------
// Plain 2x2 transfer-matrix product without any rescaling, valid for short
// products where overflow is not a concern.

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2 direct_transfer(const std::vector<double>& potentials, double E) {
    Mat2 p;
    for (const double v : potentials) {
        const Mat2 step{E + 2.0 - v, -1.0, 1.0, 0.0};
        p = step * p;
    }
    return p;
}

// ---------------------------------------------------------------------------
// The sign sequence of the doubling-invariant two-letter chain is the parity
// of the binary digit sum, which gives the finite-window exponential sum a
// closed product form:
//   sum_{n < 2^N} (-1)^{popcount(n)} z^n = prod_{l < N} (1 - z^{2^l}).

inline int balanced_sign(std::uint64_t n) {
    return (std::popcount(n) & 1) ? -1 : 1;
}

inline std::complex<double> digit_product_amplitude(double k, int N) {
    std::complex<double> prod = 1.0;
    for (int l = 0; l < N; ++l)
        prod *= 1.0 - std::polar(1.0, -k * static_cast<double>(std::uint64_t{1} << l));
    return prod / static_cast<double>(std::uint64_t{1} << N);
}

inline std::complex<double> digit_sum_amplitude(double k, int N) {
    std::complex<double> sum = 0.0;
    const std::uint64_t len = std::uint64_t{1} << N;
    for (std::uint64_t n = 0; n < len; ++n)
        sum += static_cast<double>(balanced_sign(n)) * std::polar(1.0, -k * static_cast<double>(n));
    return sum / static_cast<double>(len);
}

// ---------------------------------------------------------------------------
// Autocorrelation coefficients of the balanced two-letter chain obey the
// exact recursion eta(0)=1, eta(2m)=eta(m), eta(2m+1)=-(eta(m)+eta(m+1))/2,
// inherited from the block structure of the doubling rule.

inline double eta(std::int64_t z) {
    static std::map<std::int64_t, double> memo{{0, 1.0}};
    z = std::abs(z);
    if (const auto it = memo.find(z); it != memo.end()) return it->second;
    const double value = (z % 2 == 0) ? eta(z / 2) : -(eta(z / 2) + eta(z / 2 + 1)) / 2.0;
    memo[z] = value;
    return value;
}

// ---------------------------------------------------------------------------
// Scaling exponent partial sums for rational k = p/q: the doubling orbit of
// the residue p mod q is followed with exact integer arithmetic, so every
// sin^2 factor is evaluated at an exact rational phase.

inline double beta_partial_sum(long long p, long long q, int N) {
    long long r = ((p % q) + q) % q;
    const double pi = std::acos(-1.0);
    double s = 0.0;
    for (int l = 0; l <= N; ++l) {
        const double sine = std::sin(pi * static_cast<double>(r) / static_cast<double>(q));
        if (sine == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(sine * sine);
        r = (2 * r) % q;
    }
    return s / (static_cast<double>(N) * std::log(2.0));
}

// ---------------------------------------------------------------------------
// Band edges of a two-site periodic chain by direct diagonalization of the
// Bloch matrix over a quadrature of phases: the 2x2 Hermitian Bloch matrix
//   [[d0, 1 + e^{-i theta}], [1 + e^{i theta}, d1]]
// has eigenvalues mean +- sqrt(((d0-d1)/2)^2 + |1+e^{i theta}|^2).

struct BandPair {
    double lower_lo, lower_hi, upper_lo, upper_hi;
};

inline BandPair bloch_bands_two_site(double d0, double d1) {
    const double pi = std::acos(-1.0);
    BandPair out{1e300, -1e300, 1e300, -1e300};
    const int quad = 4001;
    for (int i = 0; i < quad; ++i) {
        const double theta = pi * i / (quad - 1);
        const double mean = 0.5 * (d0 + d1);
        const double disc =
            std::sqrt(0.25 * (d0 - d1) * (d0 - d1) + 2.0 + 2.0 * std::cos(theta));
        out.lower_lo = std::min(out.lower_lo, mean - disc);
        out.lower_hi = std::max(out.lower_hi, mean - disc);
        out.upper_lo = std::min(out.upper_lo, mean + disc);
        out.upper_hi = std::max(out.upper_hi, mean + disc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Word utilities for brute-force frequency and factor-set checks.

inline std::int64_t count_occurrences(const std::vector<std::uint8_t>& text,
                                      const std::vector<std::uint8_t>& pattern) {
    if (pattern.empty() || text.size() < pattern.size()) return 0;
    std::int64_t count = 0;
    for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
        std::size_t j = 0;
        while (j < pattern.size() && text[i + j] == pattern[j]) ++j;
        if (j == pattern.size()) ++count;
    }
    return count;
}

inline std::set<std::vector<std::uint8_t>> factor_set(const std::vector<std::uint8_t>& text,
                                                      std::size_t length) {
    std::set<std::vector<std::uint8_t>> out;
    if (length == 0 || text.size() < length) return out;
    for (std::size_t i = 0; i + length <= text.size(); ++i)
        out.insert(std::vector<std::uint8_t>(text.begin() + i, text.begin() + i + length));
    return out;
}

}  // namespace oracles
