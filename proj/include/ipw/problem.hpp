#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <tuple>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ipw/infinitesimal.hpp"
#include "ipw/parse.hpp"

namespace ipw {

/// Error in a problem file, carrying the 1-based line number.
struct ProblemError : std::runtime_error {
    ProblemError(std::size_t line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

/// Parsed, validated problem description.
///
/// Format: a sectioned key-value text file.
///   [manifold]     coordinates = x1, x2, y1
///   [submanifold]  normal = y1
///   [poisson]      x1,x2 = 1 + y1        (upper-triangular pairs only)
///   [options]      max_weight = 2        (optional)
/// '#' starts a comment; unlisted bivector components are zero.
struct ProblemFile {
    std::vector<std::string> coordinates; // in declaration order
    std::vector<std::string> normal;      // subset of coordinates
    std::vector<std::tuple<std::string, std::string, std::string>> entries; // (a, b, poly text)
    long long max_weight = 2;
    bool has_max_weight = false;
    std::string file_name; // set by load_problem

    ContextPtr ctx;    // base coordinates first, then normal ones
    Multivector pi{nullptr, 2};
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

inline bool valid_name(const std::string& s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

} // namespace detail

inline ProblemFile parse_problem(std::istream& in) {
    ProblemFile pf;
    std::string section;
    std::string line;
    std::size_t no = 0;
    std::set<std::pair<std::string, std::string>> seen_pairs;
    std::vector<std::tuple<std::size_t, std::string, std::string>> kvs; // (line, key, value)
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ProblemError(no, "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "manifold" && section != "submanifold" && section != "poisson" &&
                section != "options")
                throw ProblemError(no, "unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ProblemError(no, "expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) throw ProblemError(no, "entry before any section header");
        if (section == "manifold") {
            if (key != "coordinates") throw ProblemError(no, "unknown key '" + key + "'");
            if (!pf.coordinates.empty()) throw ProblemError(no, "duplicate 'coordinates'");
            pf.coordinates = detail::split_list(value);
            if (pf.coordinates.empty() ||
                (pf.coordinates.size() == 1 && pf.coordinates[0].empty()))
                throw ProblemError(no, "empty coordinate list");
            std::set<std::string> uniq;
            for (const auto& c : pf.coordinates) {
                if (!detail::valid_name(c)) throw ProblemError(no, "bad coordinate name '" + c + "'");
                if (!uniq.insert(c).second)
                    throw ProblemError(no, "duplicate coordinate '" + c + "'");
            }
        } else if (section == "submanifold") {
            if (key != "normal") throw ProblemError(no, "unknown key '" + key + "'");
            if (!pf.normal.empty()) throw ProblemError(no, "duplicate 'normal'");
            pf.normal = detail::split_list(value);
            if (pf.normal.size() == 1 && pf.normal[0].empty()) pf.normal.clear();
        } else if (section == "poisson") {
            auto pair = detail::split_list(key);
            if (pair.size() != 2) throw ProblemError(no, "component key must be 'a,b'");
            if (!seen_pairs.insert({pair[0], pair[1]}).second)
                throw ProblemError(no, "duplicate component '" + key + "'");
            pf.entries.emplace_back(pair[0], pair[1], value);
            kvs.emplace_back(no, key, value);
        } else { // options
            if (key == "max_weight") {
                if (pf.has_max_weight) throw ProblemError(no, "duplicate 'max_weight'");
                try {
                    std::size_t used = 0;
                    pf.max_weight = std::stoll(value, &used);
                    if (used != value.size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw ProblemError(no, "max_weight must be an integer");
                }
                if (pf.max_weight < 0) throw ProblemError(no, "max_weight must be >= 0");
                pf.has_max_weight = true;
            } else {
                throw ProblemError(no, "unknown key '" + key + "'");
            }
        }
    }
    if (pf.coordinates.empty()) throw ProblemError(no, "missing [manifold] coordinates");

    std::set<std::string> coord_set(pf.coordinates.begin(), pf.coordinates.end());
    std::set<std::string> normal_set;
    for (const auto& n : pf.normal) {
        if (!coord_set.count(n))
            throw ProblemError(no, "normal variable '" + n + "' is not a coordinate");
        if (!normal_set.insert(n).second)
            throw ProblemError(no, "duplicate normal variable '" + n + "'");
    }
    std::vector<std::string> base_vars, normal_vars;
    for (const auto& c : pf.coordinates)
        (normal_set.count(c) ? normal_vars : base_vars).push_back(c);
    pf.ctx = make_context(base_vars, normal_vars);

    pf.pi = Multivector(pf.ctx, 2);
    std::size_t k = 0;
    for (const auto& [a, b, text] : pf.entries) {
        std::size_t lno = std::get<0>(kvs[k++]);
        if (!coord_set.count(a)) throw ProblemError(lno, "unknown coordinate '" + a + "'");
        if (!coord_set.count(b)) throw ProblemError(lno, "unknown coordinate '" + b + "'");
        auto decl_pos = [&](const std::string& n) {
            return std::find(pf.coordinates.begin(), pf.coordinates.end(), n) -
                   pf.coordinates.begin();
        };
        if (a == b) throw ProblemError(lno, "component '" + a + "," + b + "' is diagonal");
        if (decl_pos(a) > decl_pos(b))
            throw ProblemError(lno, "component '" + a + "," + b +
                                        "' is lower-triangular; list it as '" + b + "," + a + "'");
        std::size_t ia = pf.ctx->index_of(a), ib = pf.ctx->index_of(b);
        Poly p;
        try {
            p = parse_poly(text, pf.ctx);
        } catch (const ParseError& e) {
            throw ProblemError(lno, std::string("in component '") + a + "," + b + "': " + e.what());
        }
        pf.pi.add_term({static_cast<unsigned>(ia), static_cast<unsigned>(ib)}, p);
    }
    return pf;
}

inline ProblemFile parse_problem_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_problem(ss);
}

inline ProblemFile load_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ProblemError(0, "cannot open '" + path + "'");
    ProblemFile pf = parse_problem(f);
    pf.file_name = path;
    return pf;
}

} // namespace ipw
