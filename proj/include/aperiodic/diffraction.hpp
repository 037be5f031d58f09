#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "aperiodic/pointset.hpp"

namespace aperiodic {

// Scattering amplitude per unit length over the half-open window [lo, hi):
//   a(k) = (1/(hi-lo)) * sum_{x in [lo,hi)} w(x) e^{-ikx}.
// Throws WindowError if [lo, hi) is not contained in the populated window.
std::complex<double> bt_amplitude(const DecoratedPointSet& ps,
                                  const std::vector<double>& weights, double k,
                                  double lo, double hi);

// Centered-window convenience: window [-L, L), normalization 1/(2L).
std::complex<double> bt_amplitude(const DecoratedPointSet& ps,
                                  const std::vector<double>& weights, double k,
                                  double halfwidth);

// Autocorrelation coefficients gamma(z) = (1/(2L)) sum w(x+z) conj(w(x)) over
// pairs inside [-L, L), for realized displacements |z| <= z_max only
// (displacements keyed on a 1e-9 grid; absent displacements are not
// zero-filled).  Hermitian by construction: gamma(-z) = conj(gamma(z)).
std::map<double, std::complex<double>> autocorrelation(
    const DecoratedPointSet& ps, const std::vector<double>& weights,
    double halfwidth, double z_max);

struct DiffractionSample {
    double k;
    double window;  // halfwidth L
    std::complex<double> amplitude;
    double intensity;  // |amplitude|^2
};

struct PeakVerdict {
    double k;
    double intensity;              // at the largest window
    std::string verdict;           // "bragg" | "decaying" | "undecided"
    std::vector<DiffractionSample> samples;
};

struct PeakScanOptions {
    double theta = 1e-6;      // intensity floor for a Bragg candidate
    double rel_tol = 0.05;    // relative stabilization of the last two windows
    double decay_slope = -0.05;    // slope threshold for "decaying"
    double decay_r2 = 0.8;         // fit quality threshold for "decaying"
};

// Classify each k over a strictly increasing schedule of window halfwidths
// (at least 3): "bragg" when intensities stay above theta and the last two
// agree to rel_tol; "decaying" when log-intensity falls linearly in
// log-window; "undecided" otherwise.
std::vector<PeakVerdict> peak_scan(const DecoratedPointSet& ps,
                                   const std::vector<double>& weights,
                                   const std::vector<double>& k_list,
                                   const std::vector<double>& window_schedule,
                                   const PeakScanOptions& opts = {});

// Least-squares slope of ln(intensity) against ln(window length) over the
// schedule.  Zero intensity at some window makes the slope -infinity.
double decay_exponent(const DecoratedPointSet& ps,
                      const std::vector<double>& weights, double k,
                      const std::vector<double>& window_schedule);

std::string diffraction_to_csv(const std::vector<DiffractionSample>& samples);
std::string peaks_to_json(const std::vector<PeakVerdict>& peaks);

}  // namespace aperiodic
