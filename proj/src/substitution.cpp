#include "aperiodic/substitution.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "aperiodic/errors.hpp"
#include "aperiodic/format.hpp"

namespace aperiodic {

using nlohmann::json;

std::uint8_t Substitution::letter(const std::string& name) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return static_cast<std::uint8_t>(i);
    throw InputError("unknown letter '" + name + "'");
}

void Substitution::validate() const {
    if (alphabet.empty()) throw InputError("substitution: empty alphabet");
    if (alphabet.size() > 255) throw InputError("substitution: alphabet larger than 255 letters");
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet.size(); ++j)
            if (alphabet[i] == alphabet[j])
                throw InputError("substitution: duplicate letter '" + alphabet[i] + "'");
    if (rules.size() != alphabet.size())
        throw InputError("substitution: rules must cover every letter");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].empty())
            throw InputError("substitution: empty rule image for '" + alphabet[i] + "'");
        for (auto id : rules[i])
            if (id >= alphabet.size())
                throw InputError("substitution: rule image letter out of range");
    }
    if (lengths.size() != alphabet.size())
        throw InputError("substitution: lengths must cover every letter");
    for (std::size_t i = 0; i < lengths.size(); ++i)
        if (!(lengths[i] > 0.0))
            throw InputError("substitution: non-positive length for '" + alphabet[i] + "'");
    if (seed >= alphabet.size()) throw InputError("substitution: seed out of range");
    if (mirror && rules[seed][0] != seed)
        throw InputError(
            "substitution: mirror completion requires rule(seed) to start with the seed "
            "(iterates must be nested prefixes)");
}

Substitution substitution_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("substitution spec: invalid JSON: ") + e.what());
    }
    Substitution sub;
    try {
        if (!j.contains("alphabet")) throw InputError("substitution spec: missing 'alphabet'");
        sub.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        if (!j.contains("rules")) throw InputError("substitution spec: missing 'rules'");
        const auto& rules = j.at("rules");
        sub.rules.resize(sub.alphabet.size());
        for (std::size_t i = 0; i < sub.alphabet.size(); ++i) {
            const auto& name = sub.alphabet[i];
            if (!rules.contains(name))
                throw InputError("substitution spec: no rule for '" + name + "'");
            for (const auto& s : rules.at(name))
                sub.rules[i].push_back(sub.letter(s.get<std::string>()));
        }
        if (!j.contains("lengths")) throw InputError("substitution spec: missing 'lengths'");
        sub.lengths.resize(sub.alphabet.size());
        for (std::size_t i = 0; i < sub.alphabet.size(); ++i) {
            const auto& name = sub.alphabet[i];
            if (!j.at("lengths").contains(name))
                throw InputError("substitution spec: no length for '" + name + "'");
            sub.lengths[i] = j.at("lengths").at(name).get<double>();
        }
        if (!j.contains("seed")) throw InputError("substitution spec: missing 'seed'");
        sub.seed = sub.letter(j.at("seed").get<std::string>());
        sub.mirror = j.value("mirror", false);
    } catch (const json::exception& e) {
        throw InputError(std::string("substitution spec: ") + e.what());
    }
    sub.validate();
    return sub;
}

std::string substitution_to_json(const Substitution& sub) {
    json j;
    j["alphabet"] = sub.alphabet;
    json rules = json::object();
    for (std::size_t i = 0; i < sub.alphabet.size(); ++i) {
        std::vector<std::string> image;
        for (auto id : sub.rules[i]) image.push_back(sub.alphabet[id]);
        rules[sub.alphabet[i]] = image;
    }
    j["rules"] = rules;
    json lengths = json::object();
    for (std::size_t i = 0; i < sub.alphabet.size(); ++i)
        lengths[sub.alphabet[i]] = round_for_output(sub.lengths[i]);
    j["lengths"] = lengths;
    j["seed"] = sub.alphabet[sub.seed];
    j["mirror"] = sub.mirror;
    return j.dump(2);
}

Word iterate_letter(const Substitution& sub, std::uint8_t letter, int n) {
    sub.validate();
    if (letter >= sub.alphabet.size()) throw InputError("iterate: letter out of range");
    if (n < 0) throw InputError("iterate: negative order");
    std::vector<std::uint8_t> cur{letter};
    for (int step = 0; step < n; ++step) {
        std::size_t next_len = 0;
        for (auto id : cur) next_len += sub.rules[id].size();
        if (next_len > (std::size_t{1} << 31))
            throw InputError("iterate: word longer than 2^31 letters");
        std::vector<std::uint8_t> next;
        next.reserve(next_len);
        for (auto id : cur)
            next.insert(next.end(), sub.rules[id].begin(), sub.rules[id].end());
        cur = std::move(next);
    }
    return Word{std::move(cur), 0};
}

Word iterate(const Substitution& sub, int n) { return iterate_letter(sub, sub.seed, n); }

Word two_sided_word(const Substitution& sub, int n) {
    sub.validate();
    if (!sub.mirror)
        throw InputError("two_sided_word: substitution has no mirror completion");
    Word right = iterate(sub, n);
    const std::int64_t L = right.size();
    Word out;
    out.first_index = -L;
    out.letters.resize(static_cast<std::size_t>(2 * L));
    // letter(-m) = letter(m-1) for m = 1..L
    for (std::int64_t m = 1; m <= L; ++m)
        out.letters[static_cast<std::size_t>(L - m)] = right.letters[static_cast<std::size_t>(m - 1)];
    std::copy(right.letters.begin(), right.letters.end(), out.letters.begin() + L);
    return out;
}

bool common_prefix_ok(const Substitution& sub) {
    sub.validate();
    for (std::size_t i = 1; i < sub.rules.size(); ++i)
        if (sub.rules[i][0] != sub.rules[0][0]) return false;
    return true;
}

SubstitutionMatrix substitution_matrix(const Substitution& sub) {
    sub.validate();
    const int n = sub.letter_count();
    SubstitutionMatrix m;
    m.entries.assign(n, std::vector<std::int64_t>(n, 0));
    for (int b = 0; b < n; ++b)
        for (auto a : sub.rules[b]) m.entries[a][b] += 1;
    return m;
}

bool is_primitive(const SubstitutionMatrix& m) {
    const int n = m.size();
    if (n == 0) throw InputError("is_primitive: empty matrix");
    // Boolean semiring powers: only the support matters, so entries cannot
    // overflow.  Wielandt: primitive iff M^(n^2) is positive.
    std::vector<std::vector<bool>> p(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p[i][j] = m.entries[i][j] > 0;
    const int bound = n * n;
    auto all_positive = [&](const std::vector<std::vector<bool>>& q) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!q[i][j]) return false;
        return true;
    };
    std::vector<std::vector<bool>> cur = p;
    for (int k = 1; k <= bound; ++k) {
        if (all_positive(cur)) return true;
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (cur[i][l])
                    for (int j = 0; j < n; ++j)
                        if (p[l][j]) next[i][j] = true;
        cur = std::move(next);
    }
    return false;
}

namespace {

constexpr int kMaxDenseSize = 8;

Eigen::MatrixXd to_eigen(const SubstitutionMatrix& m) {
    const int n = m.size();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = static_cast<double>(m.entries[i][j]);
    return a;
}

void require_primitive(const SubstitutionMatrix& m, const char* who) {
    if (!is_primitive(m)) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "%s: matrix is not primitive (power %d still has zero entries)", who,
                      m.size() * m.size());
        throw InputError(msg);
    }
}

void require_dense_size(const SubstitutionMatrix& m, const char* who) {
    if (m.size() > kMaxDenseSize) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "%s: alphabet size %d exceeds dense-eigensolve limit %d",
                      who, m.size(), kMaxDenseSize);
        throw UnsupportedError(msg);
    }
}

}  // namespace

PerronFrobeniusData pf_data(const SubstitutionMatrix& m) {
    require_dense_size(m, "pf_data");
    require_primitive(m, "pf_data");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
    const auto& vals = solver.eigenvalues();
    int pf = 0;
    for (int i = 1; i < vals.size(); ++i)
        if (std::abs(vals[i]) > std::abs(vals[pf])) pf = i;
    PerronFrobeniusData out;
    out.lambda = vals[pf].real();
    Eigen::VectorXcd v = solver.eigenvectors().col(pf);
    double sum = 0.0;
    for (int i = 0; i < v.size(); ++i) sum += v[i].real();
    out.frequencies.resize(static_cast<std::size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) out.frequencies[static_cast<std::size_t>(i)] = v[i].real() / sum;
    return out;
}

bool is_pisot(const SubstitutionMatrix& m) {
    require_dense_size(m, "is_pisot");
    require_primitive(m, "is_pisot");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
    const auto& vals = solver.eigenvalues();
    int pf = 0;
    for (int i = 1; i < vals.size(); ++i)
        if (std::abs(vals[i]) > std::abs(vals[pf])) pf = i;
    constexpr double tol = 1e-9;
    for (int i = 0; i < vals.size(); ++i) {
        if (i == pf) continue;
        if (std::abs(vals[i]) >= 1.0 - tol) return false;
    }
    return true;
}

namespace {

// Occurrences of `pattern` as a factor of `text`.
std::int64_t count_occurrences(const std::vector<std::uint8_t>& text,
                               const std::vector<std::uint8_t>& pattern) {
    if (pattern.empty() || pattern.size() > text.size()) return 0;
    std::int64_t count = 0;
    const std::size_t last = text.size() - pattern.size();
    for (std::size_t i = 0; i <= last; ++i) {
        std::size_t j = 0;
        while (j < pattern.size() && text[i + j] == pattern[j]) ++j;
        if (j == pattern.size()) ++count;
    }
    return count;
}

// Number of distinct length-L factors (used to certify absence: once the
// factor set stops growing between consecutive orders, a missing word is
// missing from the language).
std::int64_t distinct_factors(const std::vector<std::uint8_t>& text, std::size_t L) {
    if (L == 0 || text.size() < L) return 0;
    std::set<std::vector<std::uint8_t>> seen;
    for (std::size_t i = 0; i + L <= text.size(); ++i)
        seen.insert(std::vector<std::uint8_t>(text.begin() + i, text.begin() + i + L));
    return static_cast<std::int64_t>(seen.size());
}

}  // namespace

FrequencyEstimate patch_frequency(const Substitution& sub,
                                  const std::vector<std::uint8_t>& word,
                                  const FrequencyOptions& opts) {
    sub.validate();
    if (word.empty()) throw InputError("patch_frequency: empty word");
    for (auto id : word)
        if (id >= sub.alphabet.size()) throw InputError("patch_frequency: letter out of range");
    if (opts.min_order < 1 || opts.max_order < opts.min_order)
        throw InputError("patch_frequency: bad order range");

    Word cur = iterate(sub, opts.min_order - 1);
    double prev = std::numeric_limits<double>::quiet_NaN();
    double last = std::numeric_limits<double>::quiet_NaN();
    bool prev_valid = false;
    std::int64_t prev_factors = -1;
    for (int order = opts.min_order; order <= opts.max_order; ++order) {
        // grow by one application of the rule
        std::vector<std::uint8_t> next;
        std::size_t next_len = 0;
        for (auto id : cur.letters) next_len += sub.rules[id].size();
        next.reserve(next_len);
        for (auto id : cur.letters)
            next.insert(next.end(), sub.rules[id].begin(), sub.rules[id].end());
        cur.letters = std::move(next);

        const double est =
            static_cast<double>(count_occurrences(cur.letters, word)) /
            static_cast<double>(cur.letters.size());
        if (prev_valid) {
            const double denom = std::max(std::abs(est), std::abs(prev));
            if (denom == 0.0) {
                // absence certificate: the length-|word| factor set has
                // stabilized between consecutive orders and the word is not
                // in it, so it is absent from the whole sequence
                if (cur.letters.size() <= (std::size_t{1} << 22)) {
                    const std::int64_t nf = distinct_factors(cur.letters, word.size());
                    if (nf == prev_factors) return FrequencyEstimate{0.0, 0.0, order};
                    prev_factors = nf;
                }
            } else {
                const double rel = std::abs(est - prev) / denom;
                if (rel <= opts.rel_tol) return FrequencyEstimate{est, rel, order};
            }
        }
        last = prev;
        prev = est;
        prev_valid = true;
    }
    throw ConvergenceError(
        "patch_frequency: estimates did not agree to rel_tol within max_order", last,
        prev);
}

FrequencyEstimate patch_frequency(const Substitution& sub,
                                  const std::vector<std::string>& word,
                                  const FrequencyOptions& opts) {
    std::vector<std::uint8_t> ids;
    ids.reserve(word.size());
    for (const auto& name : word) ids.push_back(sub.letter(name));
    return patch_frequency(sub, ids, opts);
}

}  // namespace aperiodic
