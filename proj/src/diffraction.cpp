#include "aperiodic/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aperiodic/errors.hpp"
#include "aperiodic/format.hpp"

namespace aperiodic {

namespace {

constexpr double kGrid = 1e-9;

void check_weights(const DecoratedPointSet& ps, const std::vector<double>& weights) {
    if (weights.size() != ps.alphabet.size())
        throw InputError("diffraction: one weight per alphabet letter required");
}

// Least-squares fit y = slope*x + intercept; returns {slope, r_squared}.
std::pair<double, double> linear_fit(const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0) return {0.0, 0.0};
    const double slope = (n * sxy - sx * sy) / den;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    const double intercept = (sy - slope * sx) / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        ss_res += r * r;
    }
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {slope, r2};
}

}  // namespace

std::complex<double> bt_amplitude(const DecoratedPointSet& ps,
                                  const std::vector<double>& weights, double k,
                                  double lo, double hi) {
    check_weights(ps, weights);
    if (!(lo < hi)) throw WindowError("bt_amplitude: empty window");
    if (lo < ps.window_lo || hi > ps.window_hi)
        throw WindowError("bt_amplitude: window exceeds populated region");
    auto first = std::lower_bound(ps.positions.begin(), ps.positions.end(), lo);
    std::complex<double> sum{0.0, 0.0};
    for (auto it = first; it != ps.positions.end() && *it < hi; ++it) {
        const auto i = static_cast<std::size_t>(it - ps.positions.begin());
        const double w = weights[ps.decorations[i]];
        if (w == 0.0) continue;
        sum += w * std::complex<double>(std::cos(k * *it), -std::sin(k * *it));
    }
    return sum / (hi - lo);
}

std::complex<double> bt_amplitude(const DecoratedPointSet& ps,
                                  const std::vector<double>& weights, double k,
                                  double halfwidth) {
    if (!(halfwidth > 0)) throw WindowError("bt_amplitude: halfwidth must be positive");
    return bt_amplitude(ps, weights, k, -halfwidth, halfwidth);
}

std::map<double, std::complex<double>> autocorrelation(
    const DecoratedPointSet& ps, const std::vector<double>& weights,
    double halfwidth, double z_max) {
    check_weights(ps, weights);
    if (!(z_max < halfwidth))
        throw WindowError("autocorrelation: z_max must be smaller than the window halfwidth");
    if (-halfwidth < ps.window_lo || halfwidth > ps.window_hi)
        throw WindowError("autocorrelation: window exceeds populated region");

    auto first = std::lower_bound(ps.positions.begin(), ps.positions.end(), -halfwidth);
    std::vector<std::size_t> in_window;
    for (auto it = first; it != ps.positions.end() && *it < halfwidth; ++it)
        in_window.push_back(static_cast<std::size_t>(it - ps.positions.begin()));

    std::map<double, std::complex<double>> table;
    const double norm = 1.0 / (2.0 * halfwidth);
    std::size_t j_lo = 0;
    for (std::size_t a = 0; a < in_window.size(); ++a) {
        const double x = ps.positions[in_window[a]];
        const double wx = weights[ps.decorations[in_window[a]]];
        while (j_lo < in_window.size() && ps.positions[in_window[j_lo]] < x - z_max) ++j_lo;
        for (std::size_t b = j_lo; b < in_window.size(); ++b) {
            const double y = ps.positions[in_window[b]];
            if (y > x + z_max) break;
            const double wy = weights[ps.decorations[in_window[b]]];
            const double z = kGrid * static_cast<double>(std::llround((y - x) / kGrid));
            table[z] += norm * wy * wx;
        }
    }
    return table;
}

std::vector<PeakVerdict> peak_scan(const DecoratedPointSet& ps,
                                   const std::vector<double>& weights,
                                   const std::vector<double>& k_list,
                                   const std::vector<double>& window_schedule,
                                   const PeakScanOptions& opts) {
    check_weights(ps, weights);
    if (window_schedule.size() < 3)
        throw InputError("peak_scan: at least 3 windows required");
    for (std::size_t i = 1; i < window_schedule.size(); ++i)
        if (!(window_schedule[i] > window_schedule[i - 1]))
            throw InputError("peak_scan: window schedule must be strictly increasing");

    std::vector<PeakVerdict> out;
    out.reserve(k_list.size());
    for (double k : k_list) {
        PeakVerdict pv;
        pv.k = k;
        for (double L : window_schedule) {
            const auto a = bt_amplitude(ps, weights, k, L);
            pv.samples.push_back(DiffractionSample{k, L, a, std::norm(a)});
        }
        pv.intensity = pv.samples.back().intensity;

        const auto n = pv.samples.size();
        bool above_floor = true;
        for (const auto& s : pv.samples)
            if (s.intensity < opts.theta) above_floor = false;
        const double last = pv.samples[n - 1].intensity;
        const double prev = pv.samples[n - 2].intensity;
        const bool stabilized =
            std::abs(last - prev) < opts.rel_tol * std::max(std::abs(last), opts.theta);

        if (above_floor && stabilized) {
            pv.verdict = "bragg";
        } else {
            std::vector<double> lx, ly;
            for (const auto& s : pv.samples)
                if (s.intensity > 0) {
                    lx.push_back(std::log(2.0 * s.window));
                    ly.push_back(std::log(s.intensity));
                }
            if (lx.size() >= 3) {
                const auto [slope, r2] = linear_fit(lx, ly);
                pv.verdict = (slope < opts.decay_slope && r2 >= opts.decay_r2)
                                 ? "decaying"
                                 : "undecided";
            } else {
                pv.verdict = "undecided";
            }
        }
        out.push_back(std::move(pv));
    }
    return out;
}

double decay_exponent(const DecoratedPointSet& ps,
                      const std::vector<double>& weights, double k,
                      const std::vector<double>& window_schedule) {
    check_weights(ps, weights);
    if (window_schedule.size() < 2)
        throw InputError("decay_exponent: at least 2 windows required");
    std::vector<double> lx, ly;
    for (double L : window_schedule) {
        const double intensity = std::norm(bt_amplitude(ps, weights, k, L));
        if (intensity <= 0.0) return -std::numeric_limits<double>::infinity();
        lx.push_back(std::log(2.0 * L));
        ly.push_back(std::log(intensity));
    }
    return linear_fit(lx, ly).first;
}

std::string diffraction_to_csv(const std::vector<DiffractionSample>& samples) {
    std::ostringstream os;
    os << "k,window,amplitude_re,amplitude_im,intensity\n";
    for (const auto& s : samples)
        os << format_real(s.k) << ',' << format_real(s.window) << ','
           << format_real(s.amplitude.real()) << ',' << format_real(s.amplitude.imag())
           << ',' << format_real(s.intensity) << '\n';
    return os.str();
}

std::string peaks_to_json(const std::vector<PeakVerdict>& peaks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : peaks)
        arr.push_back({{"k", round_for_output(p.k)},
                       {"intensity", round_for_output(p.intensity)},
                       {"verdict", p.verdict}});
    return arr.dump(2) + "\n";
}

}  // namespace aperiodic
