#include "aperiodic/gaplabel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aperiodic/errors.hpp"
#include "aperiodic/format.hpp"

namespace aperiodic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTau = std::numbers::phi;  // golden ratio (1+sqrt 5)/2

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Best rational p/q with q <= max_den and |t - p/q| <= eps / q, by continued
// fractions; nullopt when no convergent qualifies.
std::optional<std::pair<long long, long long>> detect_rational(double t, long long max_den,
                                                               double eps) {
    const double sign = t < 0 ? -1.0 : 1.0;
    double x = std::abs(t);
    long long p_prev = 0, q_prev = 1, p_cur = 1, q_cur = 0;
    for (int it = 0; it < 64; ++it) {
        const double a_f = std::floor(x);
        if (a_f > 9e17) break;
        const auto a = static_cast<long long>(a_f);
        const long long p_next = a * p_cur + p_prev;
        const long long q_next = a * q_cur + q_prev;
        if (q_next > max_den) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if (std::abs(std::abs(t) - static_cast<double>(p_cur) / static_cast<double>(q_cur)) <=
            eps / static_cast<double>(q_cur))
            return std::make_pair(static_cast<long long>(sign) * p_cur, q_cur);
        const double frac = x - a_f;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    return std::nullopt;
}

// Strip every factor of the given primes from n; returns the residual part.
long long strip_primes(long long n, const std::vector<int>& primes) {
    n = std::llabs(n);
    for (int p : primes)
        while (n != 0 && n % p == 0) n /= p;
    return n;
}

void validate_module(const RealModule& m) {
    if (m.scale != "1" && m.scale != "2pi")
        throw InputError("module: scale must be \"1\" or \"2pi\"");
    for (int p : m.denominator_primes)
        if (!is_prime(p)) throw InputError("module: denominator entries must be prime");
    for (const auto& g : m.generators) {
        if (!std::isfinite(g.value) || g.value == 0.0)
            throw InputError("module: generators must be finite and nonzero");
        if (!g.exact.empty()) {
            const auto v = exact_descriptor_value(g.exact);
            if (!v)
                throw InputError("module: unparseable exact descriptor \"" + g.exact + "\"");
            if (std::abs(*v - g.value) > 1e-9)
                throw InputError("module: exact descriptor disagrees with value for \"" +
                                 g.exact + "\"");
        }
    }
    // rational dependence between generators defeats coefficient search
    for (std::size_t i = 0; i < m.generators.size(); ++i)
        for (std::size_t j = i + 1; j < m.generators.size(); ++j) {
            const double ratio = m.generators[i].value / m.generators[j].value;
            if (detect_rational(ratio, 1000000, 1e-10))
                throw InputError("module: generators are rationally dependent");
        }
}

// All closure denominators prod p^e with e <= max_exp, capped in count.
std::vector<long long> closure_denominators(const std::vector<int>& primes, int max_exp) {
    std::vector<long long> dens{1};
    for (int p : primes) {
        std::vector<long long> next;
        for (long long d : dens) {
            long long v = d;
            for (int e = 0; e <= max_exp; ++e) {
                next.push_back(v);
                if (v > (1ll << 62) / p) break;
                v *= p;
            }
        }
        dens.swap(next);
        if (dens.size() > 100000)
            throw UnsupportedError("membership: denominator closure set too large");
    }
    std::sort(dens.begin(), dens.end());
    dens.erase(std::unique(dens.begin(), dens.end()), dens.end());
    return dens;
}

}  // namespace

namespace {

struct Descriptor {
    long long num = 1;
    long long den = 1;
    long long tau_exp = 0;
};

// grammar: [p[/q]] ["tau"["^" e]]  e.g. "1", "-2/3", "tau", "1/2 tau^-1"
std::optional<Descriptor> parse_descriptor(const std::string& exact) {
    std::string s = exact;
    auto trim = [](std::string& t) {
        while (!t.empty() && t.front() == ' ') t.erase(t.begin());
        while (!t.empty() && t.back() == ' ') t.pop_back();
    };
    trim(s);
    if (s.empty()) return std::nullopt;

    Descriptor d;
    bool saw_rational = false;
    const auto tau_pos = s.find("tau");
    std::string head = tau_pos == std::string::npos ? s : s.substr(0, tau_pos);
    std::string tail = tau_pos == std::string::npos ? "" : s.substr(tau_pos);
    trim(head);
    trim(tail);

    if (!head.empty()) {
        std::size_t pos = 0;
        try {
            d.num = std::stoll(head, &pos);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (pos < head.size()) {
            if (head[pos] != '/') return std::nullopt;
            std::string den_part = head.substr(pos + 1);
            std::size_t dpos = 0;
            try {
                d.den = std::stoll(den_part, &dpos);
            } catch (const std::exception&) {
                return std::nullopt;
            }
            if (dpos != den_part.size() || d.den == 0) return std::nullopt;
        }
        saw_rational = true;
    }

    if (tail.empty()) {
        if (!saw_rational) return std::nullopt;
        return d;
    }
    if (tail.rfind("tau", 0) != 0) return std::nullopt;
    std::string exp_part = tail.substr(3);
    trim(exp_part);
    d.tau_exp = 1;
    if (!exp_part.empty()) {
        if (exp_part[0] != '^') return std::nullopt;
        std::string digits = exp_part.substr(1);
        std::size_t epos = 0;
        try {
            d.tau_exp = std::stoll(digits, &epos);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (epos != digits.size()) return std::nullopt;
    }
    return d;
}

std::string format_descriptor(Descriptor d) {
    if (d.den < 0) {
        d.den = -d.den;
        d.num = -d.num;
    }
    const long long g = std::gcd(std::llabs(d.num), d.den);
    if (g > 1) {
        d.num /= g;
        d.den /= g;
    }
    std::ostringstream os;
    if (d.tau_exp == 0 || d.num != 1 || d.den != 1) {
        os << d.num;
        if (d.den != 1) os << '/' << d.den;
        if (d.tau_exp != 0) os << ' ';
    }
    if (d.tau_exp == 1)
        os << "tau";
    else if (d.tau_exp != 0)
        os << "tau^" << d.tau_exp;
    return os.str();
}

}  // namespace

std::optional<double> exact_descriptor_value(const std::string& exact) {
    const auto d = parse_descriptor(exact);
    if (!d) return std::nullopt;
    return static_cast<double>(d->num) / static_cast<double>(d->den) *
           std::pow(kTau, static_cast<double>(d->tau_exp));
}

RealModule module_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("module: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        throw InputError("module: expected an object with a \"generators\" array");

    RealModule m;
    for (const auto& g : j["generators"]) {
        if (!g.is_object() || !g.contains("value") || !g["value"].is_number())
            throw InputError("module: each generator needs a numeric \"value\"");
        ModuleGenerator mg;
        mg.value = g["value"].get<double>();
        if (g.contains("exact")) {
            if (!g["exact"].is_string())
                throw InputError("module: generator \"exact\" must be a string");
            mg.exact = g["exact"].get<std::string>();
        }
        m.generators.push_back(std::move(mg));
    }
    if (j.contains("denominator_primes")) {
        if (!j["denominator_primes"].is_array())
            throw InputError("module: \"denominator_primes\" must be an array");
        for (const auto& p : j["denominator_primes"]) {
            if (!p.is_number_integer())
                throw InputError("module: denominator primes must be integers");
            m.denominator_primes.push_back(p.get<int>());
        }
    }
    if (j.contains("scale")) {
        if (!j["scale"].is_string()) throw InputError("module: \"scale\" must be a string");
        m.scale = j["scale"].get<std::string>();
    }
    validate_module(m);
    return m;
}

std::string module_to_json(const RealModule& m) {
    nlohmann::json j;
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : m.generators) {
        nlohmann::json e;
        e["value"] = round_for_output(g.value);
        if (!g.exact.empty()) e["exact"] = g.exact;
        gens.push_back(e);
    }
    j["generators"] = gens;
    j["denominator_primes"] = m.denominator_primes;
    j["scale"] = m.scale;
    return j.dump(2) + "\n";
}

double bragg_to_gap_1d(double k) { return k / kTwoPi; }

double bragg_to_gap_d(const std::vector<std::vector<double>>& k_vectors) {
    const std::size_t d = k_vectors.size();
    if (d == 0) throw InputError("bragg_to_gap_d: at least one vector required");
    for (const auto& v : k_vectors)
        if (v.size() != d)
            throw InputError("bragg_to_gap_d: vector dimension does not match count");

    // vectors as columns; fraction-free (Bareiss) elimination keeps integer
    // input exact through the divisions
    std::vector<std::vector<double>> a(d, std::vector<double>(d));
    for (std::size_t col = 0; col < d; ++col)
        for (std::size_t row = 0; row < d; ++row) a[row][col] = k_vectors[col][row];

    double sign = 1.0;
    double prev = 1.0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        std::size_t pivot = k;
        for (std::size_t r = k + 1; r < d; ++r)
            if (std::abs(a[r][k]) > std::abs(a[pivot][k])) pivot = r;
        if (a[pivot][k] == 0.0) return 0.0;
        if (pivot != k) {
            std::swap(a[pivot], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < d; ++i)
            for (std::size_t j = k + 1; j < d; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    const double det = sign * a[d - 1][d - 1];
    return det / std::pow(kTwoPi, static_cast<double>(d));
}

namespace {

MembershipResult found_result(std::vector<Coefficient> cs, double residual) {
    MembershipResult r;
    r.found = true;
    r.coefficients = std::move(cs);
    r.residual = residual;
    return r;
}

}  // namespace

MembershipResult membership(const RealModule& m, double x, const MembershipOptions& opts) {
    if (opts.tol <= 0) throw InputError("membership: tolerance must be positive");
    if (m.rank() > 2)
        throw UnsupportedError("membership: rank > 2 modules are not supported");

    if (m.rank() == 0) {
        if (std::abs(x) < opts.tol) return found_result({}, std::abs(x));
        return {};
    }

    if (m.rank() == 1) {
        const double g = m.generators[0].value;
        const double t = x / g;
        if (!m.has_denominators()) {
            const double c = std::round(t);
            if (std::abs(c) <= static_cast<double>(opts.coeff_bound)) {
                const double resid = std::abs(x - c * g);
                if (resid < opts.tol)
                    return found_result({Coefficient{static_cast<long long>(c), 1}}, resid);
            }
            return {};
        }
        // continued-fraction fast path: exact rational with closure denominator
        if (auto r = detect_rational(t, opts.coeff_bound, 1e-12)) {
            auto [p, q] = *r;
            if (strip_primes(q, m.denominator_primes) == 1 &&
                std::llabs(p) <= opts.coeff_bound) {
                const double resid =
                    std::abs(x - g * static_cast<double>(p) / static_cast<double>(q));
                if (resid < opts.tol) return found_result({Coefficient{p, q}}, resid);
            }
        }
        // complete scan over closure denominators within the exponent bound
        for (long long den : closure_denominators(m.denominator_primes,
                                                  opts.max_denominator_exponent)) {
            const double scaled = t * static_cast<double>(den);
            if (std::abs(scaled) > 9e17) continue;
            const double p = std::round(scaled);
            if (std::abs(p) > static_cast<double>(opts.coeff_bound)) continue;
            const double resid = std::abs(x - g * p / static_cast<double>(den));
            if (resid < opts.tol)
                return found_result({Coefficient{static_cast<long long>(p), den}}, resid);
        }
        return {};
    }

    // rank 2: bounded exhaustive search over the first coefficient
    const double g1 = m.generators[0].value;
    const double g2 = m.generators[1].value;
    const auto dens = m.has_denominators()
                          ? closure_denominators(m.denominator_primes,
                                                 opts.max_denominator_exponent)
                          : std::vector<long long>{1};
    for (long long den : dens) {
        const double y = x * static_cast<double>(den);
        if (!std::isfinite(y)) continue;
        // search numerators outward from 0 so small solutions are preferred
        for (long long step = 0; step <= 2 * opts.coeff_bound; ++step) {
            const long long c1 = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
            const double rem = y - static_cast<double>(c1) * g1;
            const double c2 = std::round(rem / g2);
            if (std::abs(c2) > static_cast<double>(opts.coeff_bound)) continue;
            const double resid = std::abs(rem - c2 * g2) / static_cast<double>(den);
            if (resid < opts.tol)
                return found_result({Coefficient{c1, den},
                                     Coefficient{static_cast<long long>(c2), den}},
                                    resid);
        }
    }
    return {};
}

std::optional<long long> subgroup_index(const RealModule& a, const RealModule& b) {
    if (a.rank() == 0) return b.rank() == 0 ? std::optional<long long>(1) : std::nullopt;
    if (b.rank() == 0) return std::nullopt;

    auto sorted_primes = [](const RealModule& m) {
        auto p = m.denominator_primes;
        std::sort(p.begin(), p.end());
        return p;
    };

    if (a.has_denominators() || b.has_denominators()) {
        // finite index with closures needs rank 1 and identical prime sets
        if (a.rank() != 1 || b.rank() != 1) return std::nullopt;
        if (sorted_primes(a) != sorted_primes(b)) return std::nullopt;
        const double ratio = a.generators[0].value / b.generators[0].value;
        const auto r = detect_rational(ratio, 1000000, 1e-10);
        if (!r) return std::nullopt;
        auto [p, q] = *r;
        if (p == 0) return std::nullopt;
        // closure primes are units; anything left in the denominator means
        // a is not inside b, anything left in the numerator is the index
        if (strip_primes(q, b.denominator_primes) != 1) return std::nullopt;
        return strip_primes(p, b.denominator_primes);
    }

    // closure-free: express each generator of a in b with integer coefficients
    if (a.rank() != b.rank()) return std::nullopt;
    MembershipOptions opts;
    std::vector<std::vector<long long>> c;
    for (const auto& g : a.generators) {
        const auto res = membership(b, g.value, opts);
        if (!res.found) return std::nullopt;
        std::vector<long long> row;
        for (const auto& coeff : res.coefficients) row.push_back(coeff.numerator);
        c.push_back(row);
    }
    long long det = 0;
    if (a.rank() == 1)
        det = c[0][0];
    else
        det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    if (det == 0) return std::nullopt;
    return std::llabs(det);
}

RealModule rescale_for_tight_binding(const RealModule& m, double dens) {
    if (!(dens > 0)) throw InputError("rescale_for_tight_binding: density must be positive");
    RealModule out = m;
    const auto exact_dens = detect_rational(dens, 1000, 1e-12);
    for (auto& g : out.generators) {
        g.value /= dens;
        if (g.exact.empty()) continue;
        const auto d = parse_descriptor(g.exact);
        if (exact_dens && d) {
            // divide the exact rational part by dens = p/q
            Descriptor nd = *d;
            nd.num *= exact_dens->second;
            nd.den *= exact_dens->first;
            g.exact = format_descriptor(nd);
        } else {
            g.exact.clear();  // no exact form tracked through an irrational rescale
        }
    }
    return out;
}

RealModule module_from_bragg(const RealModule& e_top) {
    RealModule out = e_top;
    if (e_top.scale == "2pi") {
        // stored values are already k/(2 pi); only the display scale changes
        out.scale = "1";
        return out;
    }
    for (auto& g : out.generators) {
        g.value /= kTwoPi;
        g.exact.clear();
    }
    return out;
}

}  // namespace aperiodic
