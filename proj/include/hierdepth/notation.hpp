#pragma once

// Textual notation used by the command-line tool:
//   lattices  curve | P2 | P1xP1 | BlowupP2(m)  (also blowup:m)
//   classes   5H + 2E1 + 3E2,  f*H - E1,  4P,  2F1 + F2,  0
//   bundles   O(3)+O(1)+O(0) on rank-one lattices, O(3H-E1)+O(2H) elsewhere
//   points    inf or an integer on P^1; a:b or a:b:c projectively

#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hierdepth/agcode.hpp"
#include "hierdepth/bundle.hpp"
#include "hierdepth/error.hpp"
#include "hierdepth/hecke.hpp"
#include "hierdepth/picard.hpp"

namespace hierdepth::notation {

using picard::DivisorClass;
using picard::Lattice;
using picard::LatticeKind;

namespace detail {

inline std::string strip(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

inline std::int64_t parse_int(std::string_view text, std::string_view field = "value") {
    const auto s = detail::strip(text);
    std::int64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc{} || ptr != last) {
        throw Error(Errc::ParseError, std::string(field) + ": expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

/// "3,1,0" -> {3,1,0}; empty text gives an empty list.
inline std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view field = "list") {
    std::vector<std::int64_t> out;
    const auto s = detail::strip(text);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(parse_int(std::string_view(s).substr(start, comma - start), field));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline Lattice parse_lattice(std::string_view text) {
    const auto s = detail::lower(detail::strip(text));
    if (s == "curve" || s == "p1") return Lattice::curve();
    if (s == "p2") return Lattice::p2();
    if (s == "p1xp1") return Lattice::p1xp1();
    for (std::string_view prefix : {"blowupp2(", "blowup("}) {
        if (s.rfind(prefix, 0) == 0 && s.back() == ')') {
            const auto inner = std::string_view(s).substr(prefix.size(), s.size() - prefix.size() - 1);
            return Lattice::blowup_p2(static_cast<std::size_t>(parse_int(inner, "lattice")));
        }
    }
    if (s.rfind("blowup:", 0) == 0) {
        return Lattice::blowup_p2(static_cast<std::size_t>(parse_int(std::string_view(s).substr(7), "lattice")));
    }
    throw Error(Errc::ParseError, "lattice: unknown kind '" + std::string(text) + "'");
}

/// Generator index for a label on the given lattice.
inline std::size_t generator_index(const Lattice& L, std::string_view label) {
    std::string l(label);
    if (l == "f*H" || l == "fH") l = "H";
    for (std::size_t i = 0; i < L.rank(); ++i)
        if (L.label(i) == l) return i;
    throw Error(Errc::ParseError, "class: generator '" + std::string(label) + "' does not exist on " + L.name());
}

/// Whitespace-insensitive sum of terms [sign][coefficient][generator]; a bare
/// integer is allowed only when it is zero.
inline DivisorClass parse_class(std::string_view text, const Lattice& L) {
    const auto s = detail::strip(text);
    if (s.empty()) throw Error(Errc::ParseError, "class: empty expression");
    auto c = DivisorClass::zero(L);
    std::size_t i = 0;
    bool first = true;
    while (i < s.size()) {
        std::int64_t sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw Error(Errc::ParseError, "class: expected '+' or '-' in '" + std::string(text) + "'");
        }
        first = false;
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        std::int64_t coeff = j > i ? parse_int(std::string_view(s).substr(i, j - i), "class") : 1;
        if (j < s.size() && s[j] == '*' && j > i) ++j;
        std::size_t k = j;
        while (k < s.size() && s[k] != '+' && s[k] != '-') ++k;
        const auto label = std::string_view(s).substr(j, k - j);
        if (label.empty()) {
            if (coeff != 0 || j == i) throw Error(Errc::ParseError, "class: missing generator in '" + std::string(text) + "'");
        } else {
            c += DivisorClass::generator(L, generator_index(L, label), sign * coeff);
        }
        i = k;
    }
    return c;
}

inline std::string format_class(const DivisorClass& c) {
    std::string out;
    const auto& L = c.lattice();
    for (std::size_t i = 0; i < L.rank(); ++i) {
        const auto v = c[i];
        if (v == 0) continue;
        if (!out.empty()) out += v < 0 ? " - " : " + ";
        else if (v < 0) out += "-";
        const auto a = v < 0 ? -v : v;
        if (a != 1) out += std::to_string(a);
        out += L.label(i);
    }
    return out.empty() ? "0" : out;
}

/// O(a)+O(b)+... ; an integer argument means a multiple of the first generator.
inline bundle::SplitBundle parse_bundle(std::string_view text, const Lattice& L) {
    const auto s = detail::strip(text);
    std::vector<DivisorClass> summands;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!summands.empty()) {
            if (s[i] != '+') throw Error(Errc::ParseError, "bundle: expected '+' between summands");
            ++i;
        }
        if (s.compare(i, 2, "O(") != 0) throw Error(Errc::ParseError, "bundle: expected 'O(' at offset " + std::to_string(i));
        int depth = 1;
        std::size_t j = i + 2;
        while (j < s.size() && depth > 0) {
            if (s[j] == '(') ++depth;
            if (s[j] == ')') --depth;
            ++j;
        }
        if (depth != 0) throw Error(Errc::ParseError, "bundle: unbalanced parentheses");
        const auto inner = std::string_view(s).substr(i + 2, j - i - 3);
        const bool numeric = !inner.empty() && inner.find_first_not_of("+-0123456789") == std::string_view::npos;
        summands.push_back(numeric ? DivisorClass::generator(L, 0, parse_int(inner, "bundle")) : parse_class(inner, L));
        i = j;
    }
    if (summands.empty()) throw Error(Errc::ParseError, "bundle: no summands");
    return bundle::SplitBundle(std::move(summands));
}

inline hecke::RationalPoint parse_p1_point(std::string_view text, const gf::PrimeField& f) {
    const auto s = detail::lower(detail::strip(text));
    if (s == "inf" || s == "infinity" || s == "\xe2\x88\x9e") return hecke::RationalPoint::infinity();
    return hecke::RationalPoint::affine(f.reduce(parse_int(s, "point")));
}

/// "a:b:c" (projective coordinates, normalized on parse).
inline agcode::ProjPoint parse_proj_point(std::string_view text, const gf::PrimeField& f) {
    auto s = detail::strip(text);
    if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::vector<std::int64_t> coords;
    std::size_t start = 0;
    while (true) {
        const auto colon = s.find(':', start);
        coords.push_back(parse_int(std::string_view(s).substr(start, colon - start), "point"));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    try {
        return agcode::ProjPoint::make(f, coords);
    } catch (const Error& e) {
        throw Error(Errc::ParseError, std::string("point: ") + e.what());
    }
}

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(detail::trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Flat key = value config describing a code:
///
///   p = 5
///   space = P2
///   summand = 2 vanish 1:0:0          # repeatable; 'vanish a:b:c^o' for order o
///   points = all-rational             # or a comma list of a:b:c
///   exclude = 1:0:0                   # optional, with all-rational
///   max_points = 10                   # optional, keeps the first N
///   exceptional = 1:0:0 x 2           # optional, points on the exceptional curve
///   budget = 10000000                 # optional
struct CodeConfig {
    std::uint32_t p = 0;
    agcode::Space space = agcode::Space::P2;
    struct Summand {
        std::uint32_t degree = 0;
        std::vector<agcode::VanishingCondition> vanishing;
    };
    std::vector<Summand> summands;
    std::vector<agcode::EvalPoint> points;
    std::uint64_t budget = agcode::kDefaultBudget;
};

inline CodeConfig parse_code_config(std::istream& in) {
    std::multimap<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "config line " + std::to_string(lineno) + ": expected key = value");
        kv.emplace(detail::lower(detail::trim(std::string_view(line).substr(0, eq))),
                   detail::trim(std::string_view(line).substr(eq + 1)));
    }
    static const std::vector<std::string> known{"p", "space", "summand", "points", "exclude", "max_points", "exceptional", "budget"};
    for (const auto& [k, v] : kv) {
        if (std::find(known.begin(), known.end(), k) == known.end()) throw Error(Errc::ParseError, k + ": unknown key");
    }
    auto single = [&](const std::string& key) -> std::optional<std::string> {
        const auto n = kv.count(key);
        if (n == 0) return std::nullopt;
        if (n > 1) throw Error(Errc::ParseError, key + ": given more than once");
        return kv.find(key)->second;
    };

    CodeConfig cfg;
    const auto p = single("p");
    if (!p) throw Error(Errc::ParseError, "p: missing");
    const auto pv = parse_int(*p, "p");
    if (pv < 2 || !gf::is_prime(static_cast<std::uint64_t>(pv)) || pv > static_cast<std::int64_t>(gf::PrimeField::kMaxModulus)) {
        throw Error(Errc::ParseError, "p: " + *p + " is not a supported prime");
    }
    cfg.p = static_cast<std::uint32_t>(pv);
    const gf::PrimeField f(cfg.p);

    const auto space = single("space").value_or("P2");
    const auto sl = detail::lower(space);
    if (sl == "p1") cfg.space = agcode::Space::P1;
    else if (sl == "p2") cfg.space = agcode::Space::P2;
    else throw Error(Errc::ParseError, "space: expected P1 or P2, got '" + space + "'");
    const auto nvars = agcode::variable_count(cfg.space);

    auto point = [&](std::string_view text, const std::string& key) {
        auto pt = parse_proj_point(text, f);
        if (pt.size() != nvars) throw Error(Errc::ParseError, key + ": point " + pt.str() + " is not in " + space);
        return pt;
    };

    const auto range = kv.equal_range("summand");
    for (auto it = range.first; it != range.second; ++it) {
        std::istringstream ss(it->second);
        std::string tok;
        CodeConfig::Summand s;
        if (!(ss >> tok)) throw Error(Errc::ParseError, "summand: missing degree");
        const auto d = parse_int(tok, "summand");
        if (d < 0) throw Error(Errc::ParseError, "summand: degree must be nonnegative");
        s.degree = static_cast<std::uint32_t>(d);
        while (ss >> tok) {
            if (detail::lower(tok) != "vanish") throw Error(Errc::ParseError, "summand: expected 'vanish', got '" + tok + "'");
            std::string token;
            if (!(ss >> token)) throw Error(Errc::ParseError, "summand: 'vanish' needs a point");
            std::uint32_t order = 1;
            if (const auto caret = token.find('^'); caret != std::string::npos) {
                const auto o = parse_int(std::string_view(token).substr(caret + 1), "summand");
                if (o < 1) throw Error(Errc::ParseError, "summand: vanishing order must be positive");
                order = static_cast<std::uint32_t>(o);
                token.erase(caret);
            }
            s.vanishing.push_back({point(token, "summand"), order});
        }
        cfg.summands.push_back(std::move(s));
    }
    if (cfg.summands.empty()) throw Error(Errc::ParseError, "summand: at least one is required");

    const auto pts = single("points");
    if (!pts) throw Error(Errc::ParseError, "points: missing");
    std::vector<agcode::ProjPoint> regular;
    if (detail::lower(detail::strip(*pts)) == "all-rational") {
        std::vector<agcode::ProjPoint> excluded;
        if (const auto ex = single("exclude")) {
            for (const auto& t : split(*ex, ',')) excluded.push_back(point(t, "exclude"));
        }
        for (auto& q : agcode::rational_points(cfg.space, f))
            if (std::find(excluded.begin(), excluded.end(), q) == excluded.end()) regular.push_back(std::move(q));
    } else {
        if (single("exclude")) throw Error(Errc::ParseError, "exclude: only valid with points = all-rational");
        for (const auto& t : split(*pts, ',')) regular.push_back(point(t, "points"));
    }
    if (const auto mp = single("max_points")) {
        const auto m = parse_int(*mp, "max_points");
        if (m < 0) throw Error(Errc::ParseError, "max_points: must be nonnegative");
        if (static_cast<std::size_t>(m) < regular.size()) regular.erase(regular.begin() + m, regular.end());
    }
    for (auto& q : regular) cfg.points.push_back(agcode::EvalPoint::regular(std::move(q)));

    const auto exr = kv.equal_range("exceptional");
    for (auto it = exr.first; it != exr.second; ++it) {
        const auto parts = split(it->second, 'x');
        if (parts.size() != 2) throw Error(Errc::ParseError, "exceptional: expected '<point> x <count>'");
        const auto base = point(parts[0], "exceptional");
        const auto count = parse_int(parts[1], "exceptional");
        if (count < 0) throw Error(Errc::ParseError, "exceptional: count must be nonnegative");
        for (std::int64_t t = 0; t < count; ++t) cfg.points.push_back(agcode::EvalPoint::on_exceptional(base, static_cast<std::size_t>(t)));
    }

    if (const auto b = single("budget")) {
        const auto v = parse_int(*b, "budget");
        if (v < 1) throw Error(Errc::ParseError, "budget: must be positive");
        cfg.budget = static_cast<std::uint64_t>(v);
    }
    return cfg;
}

/// Builds the code a config describes.
inline agcode::LinearCode build_code(const CodeConfig& cfg) {
    const gf::PrimeField f(cfg.p);
    std::vector<agcode::SectionBasis> bases;
    for (const auto& s : cfg.summands) bases.push_back(agcode::vanishing_basis(s.degree, s.vanishing, cfg.space, f));
    return agcode::build_code(bases, cfg.points, f);
}

}  // namespace hierdepth::notation
