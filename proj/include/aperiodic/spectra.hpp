#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aperiodic/substitution.hpp"
#include "aperiodic/word.hpp"

namespace aperiodic {

// Discrete Schrodinger operator on the decorated chain:
//   (H psi)_n = psi_{n+1} + psi_{n-1} - 2 psi_n + coupling * V(n) psi_n,
// with V(n) read off the word through potential_by_letter.  The word comes
// from a substitution (materialized on demand) or is given explicitly.
struct TightBindingModel {
    std::optional<Substitution> source;   // set => words come from iterate()
    Word word;                            // explicit word when source is empty
    std::vector<double> potential_by_letter;
    double coupling = 1.0;

    // The word for approximant order n (substitution models only).
    Word word_of_order(int n) const;
    // A window of N consecutive site potentials (coupling applied), centered
    // in the available word; substitution models grow the word as needed.
    std::vector<double> potential_window(std::int64_t N) const;
};

TightBindingModel tight_binding_from_substitution(const Substitution& sub,
                                                  std::vector<double> potential_by_letter,
                                                  double coupling);
TightBindingModel tight_binding_from_word(Word word,
                                          std::vector<double> potential_by_letter,
                                          double coupling);
// Periodic cosine chain V(n) = cos(2 pi n / q): the discrete counterpart of
// the continuum cosine model, first gap label 1/q.
TightBindingModel discrete_cosine_model(int q, double coupling, int repetitions = 1);

// Number of eigenvalues < E of H restricted to a window of N sites
// (Dirichlet ends), by Sturm sign counting on the tridiagonal pivots.
// Zero pivots are replaced by -1e-300 so the count stays well defined.
std::int64_t sturm_count(const TightBindingModel& m, std::int64_t N, double E);

// Integrated density of states estimate: sturm_count / N.
double ids(const TightBindingModel& m, std::int64_t N, double E);

// Product of single-step matrices [[E+2-V(n), -1],[1,0]] with max-norm
// rescaling; the true product is exp(log_scale) * m.
struct TransferMatrix {
    double m[2][2];
    double log_scale = 0.0;

    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    double trace_scaled() const { return m[0][0] + m[1][1]; }  // times e^{log_scale}
};

TransferMatrix transfer_product(const TightBindingModel& model, double E,
                                std::int64_t first_site, std::int64_t site_count);

// Top Lyapunov exponent estimate (1/L)(log_scale + ln ||m||) over L sites.
double lyapunov_exponent(const TightBindingModel& model, double E, std::int64_t L);

struct Band {
    double e_low;
    double e_high;
};

struct GapEntry {
    double e_low;
    double e_high;
    double label;   // IDS value on the gap, in [0, 1]
    int order;      // approximant order that produced it
    bool stable;    // confirmed across orders and by the finite-window IDS
};

struct GapReport {
    std::vector<GapEntry> gaps;
};

struct BandStructure {
    int order;
    std::int64_t period;
    std::vector<Band> bands;     // maximal |trace| <= 2 intervals
    std::vector<double> gap_labels;  // label of the gap above band i (j/period)
};

struct BandOptions {
    // NaN means "derive from the model": min diag - 2.5 / max diag + 2.5,
    // which strictly contains the spectrum by the Gershgorin bound.
    double e_min = std::numeric_limits<double>::quiet_NaN();
    double e_max = std::numeric_limits<double>::quiet_NaN();
    int grid = 2000;
    double edge_tol = 1e-10;   // bisection tolerance for band edges
    int max_depth = 48;        // refinement depth before giving up
};

// Spectrum of the period-p approximant (p = |iterate(order)|): maximal
// intervals with |tr T_p(E)| <= 2, edges refined by bisection.  Gap labels
// are Bloch branch counts j/p obtained from Sturm counts over whole periods,
// so touching bands are counted with multiplicity.  Throws RefinementError
// naming the interval when the grid cannot resolve a band.
BandStructure band_structure(const TightBindingModel& model, int order,
                             const BandOptions& opts = {});

struct GapTrackingOptions {
    std::vector<int> orders;       // approximant schedule, increasing
    double edge_tol = 1e-2;        // Cauchy tolerance for gap edges
    double label_tol = 1e-3;       // Cauchy tolerance for labels across orders
    double ids_tol = 1e-4;         // agreement between label and finite-window IDS
    std::int64_t ids_window = 1 << 16;
    BandOptions band;
    double min_gap_width = 1e-3;   // ignore gaps narrower than this
};

// Track gaps across approximant orders by interval overlap; a gap is stable
// when its edges and labels are Cauchy across the schedule and the label is
// confirmed by the finite-window IDS at the gap midpoint (two independent
// estimators).  The reported label is the IDS-refined value.
GapReport aperiodic_gap_labels(const TightBindingModel& model,
                               const GapTrackingOptions& opts);

// Scaling exponent of the singular continuous diffraction at k:
//   beta(k) ~ (1/(N ln 2)) sum_{l=0..N} ln sin^2(pi 2^l k).
// Rational k (detected by continued fractions, denominator <= 1e6) is
// iterated exactly mod the denominator; an exact zero of sin yields
// -infinity.  Irrational k falls back to frac-doubling in double precision.
double luck_beta(double k, int N);

// Continuum Schrodinger operator -psi'' + V(x) psi on [0, L].
struct ContinuumModel {
    std::function<double(double)> potential;
    double length = 1e4;
    double step = 1e-2;
};

// Rotation number theta(L)/(pi L) of the phase equation
//   theta' = cos^2 theta + (E - V(x)) sin^2 theta
// integrated by classical RK4; equals the IDS.  Throws RefinementError when
// a step advances the phase by more than 0.1 rad.
double prufer_rotation_number(const ContinuumModel& m, double E);

std::string gap_report_to_json(const GapReport& report);
std::string bands_to_csv(const std::vector<BandStructure>& bands);

}  // namespace aperiodic
