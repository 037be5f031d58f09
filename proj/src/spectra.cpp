#include "aperiodic/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aperiodic/errors.hpp"
#include "aperiodic/format.hpp"

namespace aperiodic {

namespace {

constexpr double kPi = std::numbers::pi;

// Smallest iterate of the source whose length is at least n letters.
Word grown_word(const Substitution& sub, std::int64_t n) {
    int order = 0;
    Word w = iterate(sub, 0);
    while (static_cast<std::int64_t>(w.size()) < n) {
        ++order;
        w = iterate(sub, order);
        if (order > 64)
            throw ComputationError("tight-binding word does not grow to the requested size");
    }
    return w;
}

}  // namespace

Word TightBindingModel::word_of_order(int n) const {
    if (!source)
        throw InputError("word_of_order: model has no substitution source");
    return iterate(*source, n);
}

std::vector<double> TightBindingModel::potential_window(std::int64_t N) const {
    if (N < 1) throw InputError("potential_window: window size must be positive");
    const Word w = source ? grown_word(*source, N) : word;
    if (static_cast<std::int64_t>(w.size()) < N)
        throw InputError("potential_window: explicit word shorter than the window");
    const auto start = (static_cast<std::int64_t>(w.size()) - N) / 2;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(N));
    for (std::int64_t i = start; i < start + N; ++i) {
        const auto letter = w.letters[static_cast<std::size_t>(i)];
        if (letter >= potential_by_letter.size())
            throw InputError("potential_window: letter without a potential value");
        v.push_back(coupling * potential_by_letter[letter]);
    }
    return v;
}

TightBindingModel tight_binding_from_substitution(const Substitution& sub,
                                                  std::vector<double> potential_by_letter,
                                                  double coupling) {
    if (potential_by_letter.size() != sub.letter_count())
        throw InputError("tight_binding_from_substitution: one potential value per letter required");
    for (double v : potential_by_letter)
        if (!std::isfinite(v))
            throw InputError("tight_binding_from_substitution: potential values must be finite");
    TightBindingModel m;
    m.source = sub;
    m.potential_by_letter = std::move(potential_by_letter);
    m.coupling = coupling;
    return m;
}

TightBindingModel tight_binding_from_word(Word word,
                                          std::vector<double> potential_by_letter,
                                          double coupling) {
    if (word.letters.empty()) throw InputError("tight_binding_from_word: empty word");
    for (auto id : word.letters)
        if (id >= potential_by_letter.size())
            throw InputError("tight_binding_from_word: letter without a potential value");
    for (double v : potential_by_letter)
        if (!std::isfinite(v))
            throw InputError("tight_binding_from_word: potential values must be finite");
    TightBindingModel m;
    m.word = std::move(word);
    m.potential_by_letter = std::move(potential_by_letter);
    m.coupling = coupling;
    return m;
}

TightBindingModel discrete_cosine_model(int q, double coupling, int repetitions) {
    if (q < 1) throw InputError("discrete_cosine_model: period must be positive");
    if (repetitions < 1) throw InputError("discrete_cosine_model: repetitions must be positive");
    Word w;
    w.letters.reserve(static_cast<std::size_t>(q) * static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r)
        for (int j = 0; j < q; ++j) w.letters.push_back(static_cast<std::uint8_t>(j));
    std::vector<double> pot(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) pot[static_cast<std::size_t>(j)] = std::cos(2.0 * kPi * j / q);
    return tight_binding_from_word(std::move(w), std::move(pot), coupling);
}

std::int64_t sturm_count(const TightBindingModel& m, std::int64_t N, double E) {
    if (N < 1) throw InputError("sturm_count: window size must be positive");
    const auto v = m.potential_window(N);
    std::int64_t below = 0;
    double q = 1.0;  // previous pivot; first step has no 1/q term
    for (std::int64_t i = 0; i < N; ++i) {
        const double d = -2.0 + v[static_cast<std::size_t>(i)];
        double pivot = d - E - (i > 0 ? 1.0 / q : 0.0);
        if (pivot == 0.0) pivot = -1e-300;
        if (pivot < 0.0) ++below;
        q = pivot;
    }
    return below;
}

double ids(const TightBindingModel& m, std::int64_t N, double E) {
    return static_cast<double>(sturm_count(m, N, E)) / static_cast<double>(N);
}

TransferMatrix transfer_product(const TightBindingModel& model, double E,
                                std::int64_t first_site, std::int64_t site_count) {
    if (site_count < 0) throw InputError("transfer_product: negative site count");

    std::vector<double> v;
    if (model.source) {
        if (first_site < 0)
            throw InputError("transfer_product: substitution words start at site 0");
        const Word w = grown_word(*model.source, first_site + site_count);
        v.reserve(static_cast<std::size_t>(site_count));
        for (std::int64_t i = first_site; i < first_site + site_count; ++i)
            v.push_back(model.coupling *
                        model.potential_by_letter[w.letters[static_cast<std::size_t>(i)]]);
    } else {
        if (first_site < model.word.begin_index() ||
            first_site + site_count > model.word.end_index())
            throw InputError("transfer_product: site range outside the word");
        v.reserve(static_cast<std::size_t>(site_count));
        for (std::int64_t i = first_site; i < first_site + site_count; ++i)
            v.push_back(model.coupling * model.potential_by_letter[model.word.at(i)]);
    }

    TransferMatrix t{{{1.0, 0.0}, {0.0, 1.0}}, 0.0};
    for (double vn : v) {
        const double a = E + 2.0 - vn;
        // left-multiply by [[a, -1], [1, 0]]
        const double r00 = a * t.m[0][0] - t.m[1][0];
        const double r01 = a * t.m[0][1] - t.m[1][1];
        const double r10 = t.m[0][0];
        const double r11 = t.m[0][1];
        t.m[0][0] = r00;
        t.m[0][1] = r01;
        t.m[1][0] = r10;
        t.m[1][1] = r11;
        const double s = std::max(std::max(std::abs(t.m[0][0]), std::abs(t.m[0][1])),
                                  std::max(std::abs(t.m[1][0]), std::abs(t.m[1][1])));
        if (s > 0.0) {
            t.m[0][0] /= s;
            t.m[0][1] /= s;
            t.m[1][0] /= s;
            t.m[1][1] /= s;
            t.log_scale += std::log(s);
        }
    }
    return t;
}

double lyapunov_exponent(const TightBindingModel& model, double E, std::int64_t L) {
    if (L < 1) throw InputError("lyapunov_exponent: length must be positive");
    const auto t = transfer_product(model, E, model.source ? 0 : model.word.begin_index(), L);
    const double norm = std::max(std::max(std::abs(t.m[0][0]), std::abs(t.m[0][1])),
                                 std::max(std::abs(t.m[1][0]), std::abs(t.m[1][1])));
    const double raw = (t.log_scale + std::log(norm)) / static_cast<double>(L);
    return std::max(0.0, raw);
}

namespace {

// ln |trace| of the true (descaled) one-period transfer product at E.
double log_abs_trace(const TightBindingModel& period_model, std::int64_t p, double E) {
    const auto t = transfer_product(period_model, E, period_model.word.begin_index(), p);
    return t.log_scale + std::log(std::abs(t.trace_scaled()));
}

// A model whose word is the period word repeated `reps` times.
TightBindingModel repeated_model(const TightBindingModel& base, const Word& period_word,
                                 int reps) {
    Word w;
    w.letters.reserve(period_word.letters.size() * static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r)
        w.letters.insert(w.letters.end(), period_word.letters.begin(),
                         period_word.letters.end());
    return tight_binding_from_word(std::move(w), base.potential_by_letter, base.coupling);
}

}  // namespace

BandStructure band_structure(const TightBindingModel& model, int order,
                             const BandOptions& opts) {
    const Word period_word = model.source ? model.word_of_order(order) : model.word;
    const auto p = static_cast<std::int64_t>(period_word.size());
    if (p < 1) throw InputError("band_structure: empty period word");

    TightBindingModel period_model =
        tight_binding_from_word(period_word, model.potential_by_letter, model.coupling);

    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -std::numeric_limits<double>::infinity();
    for (auto id : period_word.letters) {
        const double d = -2.0 + model.coupling * model.potential_by_letter[id];
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    const double e_min = std::isnan(opts.e_min) ? dmin - 2.5 : opts.e_min;
    const double e_max = std::isnan(opts.e_max) ? dmax + 2.5 : opts.e_max;
    if (!(e_min < e_max) || opts.grid < 2)
        throw InputError("band_structure: invalid energy grid");

    const double ln2 = std::log(2.0);
    auto in_band = [&](double E) { return log_abs_trace(period_model, p, E) <= ln2; };

    // sample the grid, then refine every band edge by bisection
    std::vector<double> grid(static_cast<std::size_t>(opts.grid));
    for (int i = 0; i < opts.grid; ++i)
        grid[static_cast<std::size_t>(i)] =
            e_min + (e_max - e_min) * i / (opts.grid - 1);
    std::vector<char> inside(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) inside[i] = in_band(grid[i]) ? 1 : 0;

    auto bisect = [&](double lo, double hi, bool lo_inside) {
        for (int d = 0; d < opts.max_depth && hi - lo > opts.edge_tol; ++d) {
            const double mid = 0.5 * (lo + hi);
            if (in_band(mid) == lo_inside)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    BandStructure bs;
    bs.order = order;
    bs.period = p;
    std::size_t i = 0;
    while (i < grid.size()) {
        if (!inside[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < grid.size() && inside[j + 1]) ++j;
        const double lo =
            i == 0 ? grid[0] : bisect(grid[i - 1], grid[i], /*lo_inside=*/false);
        const double hi = j + 1 == grid.size()
                              ? grid[j]
                              : bisect(grid[j], grid[j + 1], /*lo_inside=*/true);
        bs.bands.push_back(Band{lo, hi});
        i = j + 1;
    }
    if (bs.bands.empty())
        throw RefinementError("band_structure: no band found on the energy grid");

    // Bloch branch counts from Sturm counts over whole periods; rounding
    // absorbs the O(1) boundary modes of the finite window.
    const int reps = static_cast<int>(std::max<std::int64_t>(8, (4096 + p - 1) / p));
    TightBindingModel counting_model = repeated_model(model, period_word, reps);
    const std::int64_t window = p * reps;
    auto branches_below = [&](double E) {
        const auto c = sturm_count(counting_model, window, E);
        return std::llround(static_cast<double>(c) / reps);
    };

    // Bands narrower than the grid spacing leave branch-count mismatches
    // across the "gap" that hides them.  Locate each missing branch by
    // binary search on the count (which sees bands of any width) and insert
    // the band, degenerate to a point when the trace condition cannot
    // resolve its edges.
    const double nudge = std::max(10.0 * opts.edge_tol, 1e-8);
    const auto expected_insertions = static_cast<std::int64_t>(p) + 16;
    std::int64_t insertions = 0;
    for (bool settled = false; !settled;) {
        settled = true;
        for (std::size_t r = 0; r <= bs.bands.size(); ++r) {
            const bool at_bottom = r == 0;
            const bool at_top = r == bs.bands.size();
            const double lo = at_bottom ? e_min : bs.bands[r - 1].e_high + nudge;
            const double hi = at_top ? e_max : bs.bands[r].e_low - nudge;
            if (!(lo < hi)) continue;
            const auto j_lo = at_bottom ? 0 : branches_below(lo);
            const auto j_hi = at_top ? p : branches_below(hi);
            if (j_lo == j_hi) continue;

            settled = false;
            if (++insertions > expected_insertions) {
                std::ostringstream os;
                os << "band_structure: cannot separate bands in [" << format_real(lo)
                   << ", " << format_real(hi) << "]";
                throw RefinementError(os.str());
            }
            // first energy where the branch count exceeds j_lo
            double a = lo, b = hi;
            while (b - a > std::max(opts.edge_tol, 1e-14 * std::abs(b))) {
                const double mid = 0.5 * (a + b);
                if (branches_below(mid) > j_lo)
                    b = mid;
                else
                    a = mid;
            }
            const double witness = 0.5 * (a + b);
            Band missing{witness, witness};
            if (in_band(witness)) {
                missing.e_low = bisect(lo, witness, /*lo_inside=*/false);
                missing.e_high = bisect(witness, hi, /*lo_inside=*/true);
            }
            bs.bands.insert(bs.bands.begin() + static_cast<std::ptrdiff_t>(r), missing);
            break;  // region boundaries moved; rescan
        }
    }

    for (std::size_t b = 0; b + 1 < bs.bands.size(); ++b) {
        const double mid = 0.5 * (bs.bands[b].e_high + bs.bands[b + 1].e_low);
        bs.gap_labels.push_back(static_cast<double>(branches_below(mid)) /
                                static_cast<double>(p));
    }
    return bs;
}

GapReport aperiodic_gap_labels(const TightBindingModel& model,
                               const GapTrackingOptions& opts) {
    if (opts.orders.size() < 3)
        throw InputError("aperiodic_gap_labels: at least 3 approximant orders required");
    for (std::size_t i = 1; i < opts.orders.size(); ++i)
        if (opts.orders[i] <= opts.orders[i - 1])
            throw InputError("aperiodic_gap_labels: orders must be strictly increasing");

    struct TrackedGap {
        double e_low, e_high, label;
        std::int64_t period;
    };
    std::vector<std::vector<TrackedGap>> per_order;
    for (int order : opts.orders) {
        const auto bs = band_structure(model, order, opts.band);
        std::vector<TrackedGap> gaps;
        for (std::size_t b = 0; b + 1 < bs.bands.size(); ++b) {
            TrackedGap g{bs.bands[b].e_high, bs.bands[b + 1].e_low, bs.gap_labels[b],
                         bs.period};
            if (g.e_high - g.e_low >= opts.min_gap_width) gaps.push_back(g);
        }
        per_order.push_back(std::move(gaps));
    }

    // Track each final-order gap backward through the schedule by overlap.
    const auto& final_gaps = per_order.back();
    const int final_order = opts.orders.back();
    std::vector<std::vector<int>> claims(per_order.size() - 1);  // matches per earlier order
    for (auto& c : claims) c.assign(final_gaps.size(), -1);

    GapReport report;
    for (std::size_t g = 0; g < final_gaps.size(); ++g) {
        const auto& fg = final_gaps[g];
        bool chain_ok = true;
        TrackedGap prev = fg;
        for (std::size_t o = per_order.size() - 1; o-- > 0;) {
            int match = -1;
            for (std::size_t h = 0; h < per_order[o].size(); ++h) {
                const auto& cand = per_order[o][h];
                if (cand.e_low < prev.e_high && prev.e_low < cand.e_high) {
                    if (match >= 0) {
                        match = -2;  // overlap conflict: two candidates claim the chain
                        break;
                    }
                    match = static_cast<int>(h);
                }
            }
            if (match < 0) {
                chain_ok = false;
                break;
            }
            const auto& m = per_order[o][static_cast<std::size_t>(match)];
            // approximant labels are quantized to multiples of 1/period, so
            // the Cauchy comparison carries that slack on top of label_tol
            const double quantization = 1.0 / static_cast<double>(m.period) +
                                        1.0 / static_cast<double>(prev.period);
            if (std::abs(m.e_low - prev.e_low) > opts.edge_tol ||
                std::abs(m.e_high - prev.e_high) > opts.edge_tol ||
                std::abs(m.label - prev.label) > opts.label_tol + quantization) {
                chain_ok = false;
                break;
            }
            claims[o][g] = match;
            prev = m;
        }

        // confirm with the second estimator: finite-window IDS at the midpoint.
        // The branch-count label is quantized to 1/period, so that slack is
        // granted on top of ids_tol.
        const double midpoint = 0.5 * (fg.e_low + fg.e_high);
        const double ids_value = ids(model, opts.ids_window, midpoint);
        const bool ids_ok = std::abs(ids_value - fg.label) <=
                            opts.ids_tol + 1.0 / static_cast<double>(fg.period);

        GapEntry entry;
        entry.e_low = fg.e_low;
        entry.e_high = fg.e_high;
        entry.label = ids_value;
        entry.order = final_order;
        entry.stable = chain_ok && ids_ok;
        report.gaps.push_back(entry);
    }

    // two final gaps claiming the same earlier gap is a tracking ambiguity
    for (std::size_t o = 0; o < claims.size(); ++o)
        for (std::size_t g = 0; g < final_gaps.size(); ++g)
            for (std::size_t h = g + 1; h < final_gaps.size(); ++h)
                if (claims[o][g] >= 0 && claims[o][g] == claims[o][h]) {
                    report.gaps[g].stable = false;
                    report.gaps[h].stable = false;
                }

    return report;
}

double luck_beta(double k, int N) {
    if (N < 1) throw InputError("luck_beta: N must be positive");
    const double norm = static_cast<double>(N) * std::log(2.0);

    // rational detection by continued fractions, denominators up to 1e6
    long long p_prev = 0, q_prev = 1, p_cur = 1, q_cur = 0;
    double x = std::abs(k);
    long long num = 0, den = 0;
    for (int it = 0; it < 64; ++it) {
        const double a_f = std::floor(x);
        if (a_f > 9e17) break;
        const auto a = static_cast<long long>(a_f);
        const long long p_next = a * p_cur + p_prev;
        const long long q_next = a * q_cur + q_prev;
        if (q_next > 1000000) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if (std::abs(std::abs(k) - static_cast<double>(p_cur) / static_cast<double>(q_cur)) <
            1e-12 / static_cast<double>(q_cur)) {
            num = p_cur;
            den = q_cur;
            break;
        }
        const double frac = x - a_f;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }

    double sum = 0.0;
    if (den > 0) {
        long long r = num % den;
        for (int l = 0; l <= N; ++l) {
            if (r == 0) return -std::numeric_limits<double>::infinity();
            const double s = std::sin(kPi * static_cast<double>(r) / static_cast<double>(den));
            sum += std::log(s * s);
            r = (2 * r) % den;
        }
    } else {
        double frac = std::abs(k) - std::floor(std::abs(k));
        for (int l = 0; l <= N; ++l) {
            const double s = std::sin(kPi * frac);
            if (s == 0.0) return -std::numeric_limits<double>::infinity();
            sum += std::log(s * s);
            frac *= 2.0;
            if (frac >= 1.0) frac -= 1.0;
        }
    }
    return sum / norm;
}

double prufer_rotation_number(const ContinuumModel& m, double E) {
    if (!(m.step > 0)) throw InputError("prufer_rotation_number: step must be positive");
    if (!(m.length > 0)) throw InputError("prufer_rotation_number: length must be positive");
    if (!m.potential) throw InputError("prufer_rotation_number: missing potential");

    const auto steps = static_cast<std::int64_t>(std::llround(m.length / m.step));
    if (steps < 1) throw InputError("prufer_rotation_number: length shorter than one step");
    const double h = m.step;
    const double L = h * static_cast<double>(steps);

    auto f = [&](double x, double theta) {
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        return c * c + (E - m.potential(x)) * s * s;
    };

    double theta = 0.0;
    for (std::int64_t n = 0; n < steps; ++n) {
        const double x = h * static_cast<double>(n);
        const double k1 = f(x, theta);
        const double k2 = f(x + 0.5 * h, theta + 0.5 * h * k1);
        const double k3 = f(x + 0.5 * h, theta + 0.5 * h * k2);
        const double k4 = f(x + h, theta + h * k3);
        const double dtheta = h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        if (std::abs(dtheta) > 0.1)
            throw RefinementError(
                "prufer_rotation_number: phase advances more than 0.1 rad per step; "
                "reduce the step size");
        theta += dtheta;
    }
    return theta / (kPi * L);
}

std::string gap_report_to_json(const GapReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : report.gaps)
        arr.push_back({{"e_low", round_for_output(g.e_low)},
                       {"e_high", round_for_output(g.e_high)},
                       {"label", round_for_output(g.label)},
                       {"order", g.order},
                       {"stable", g.stable}});
    nlohmann::json j;
    j["gaps"] = arr;
    return j.dump(2) + "\n";
}

std::string bands_to_csv(const std::vector<BandStructure>& bands) {
    std::ostringstream os;
    os << "order,band_index,e_low,e_high\n";
    for (const auto& bs : bands)
        for (std::size_t b = 0; b < bs.bands.size(); ++b)
            os << bs.order << ',' << b << ',' << format_real(bs.bands[b].e_low) << ','
               << format_real(bs.bands[b].e_high) << '\n';
    return os.str();
}

}  // namespace aperiodic
