#pragma once

#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <omest/classical.hpp>
#include <omest/errors.hpp>
#include <omest/moments.hpp>
#include <omest/render.hpp>
#include <omest/scenario.hpp>
#include <omest/search_counts.hpp>

namespace omest {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

// Single-line CSV fields with RFC-style quoting; embedded newlines are not
// supported.
inline std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (const char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    q += '"';
    return q;
}

inline bool parse_count(const std::string& field, long long& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) return false;
    out = v;
    return true;
}

}  // namespace detail

struct BatchStats {
    long long ok = 0;
    long long failed = 0;
};

// Reads rows "id,na,nb,nab" and writes one result row per input row. Rows
// that fail to parse or validate produce status "error: ..." and processing
// continues. All estimates are on the missed-count scale.
inline BatchStats process_batch(std::istream& in, std::ostream& out, const Scenario& sc) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("batch input is empty");
    {
        const auto header = detail::parse_csv_line(line);
        if (header.size() != 4 || detail::trim(header[0]) != "id" ||
            detail::trim(header[1]) != "na" || detail::trim(header[2]) != "nb" ||
            detail::trim(header[3]) != "nab")
            throw ValidationError("batch input must start with header \"id,na,nb,nab\"");
    }

    out << "id,na,nb,nab,mean,sd,skewness,kurtosis,chapman,lp,seber_sd,status\n";

    BatchStats stats;
    const auto moment_cell = [](const Moment& m) {
        return m.defined() ? format_exact(m.value()) : std::string("undefined");
    };

    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::parse_csv_line(line);
        const std::string id = fields.empty() ? std::string() : detail::trim(fields[0]);

        std::string error;
        long long na = 0, nb = 0, nab = 0;
        if (fields.size() != 4) {
            error = "expected 4 fields, got " + std::to_string(fields.size());
        } else if (!detail::parse_count(fields[1], na) || !detail::parse_count(fields[2], nb) ||
                   !detail::parse_count(fields[3], nab)) {
            error = "counts must be integers";
        }

        if (error.empty()) {
            try {
                const SearchCounts c(na, nb, nab);
                const MomentReport m = moment_report(c, sc);
                const Chapman ch = chapman(c);
                const LincolnPetersen lp = lincoln_petersen(c);
                out << detail::csv_field(id) << ',' << na << ',' << nb << ',' << nab << ','
                    << moment_cell(m.mean) << ',' << moment_cell(m.sd) << ','
                    << moment_cell(m.skewness) << ',' << moment_cell(m.kurtosis) << ','
                    << format_exact(ch.missed) << ',' << moment_cell(lp.missed) << ','
                    << format_exact(std::sqrt(seber_variance(c))) << ",ok\n";
                stats.ok += 1;
                continue;
            } catch (const ValidationError& e) {
                error = e.what();
            }
        }

        out << detail::csv_field(id) << ',';
        if (fields.size() == 4)
            out << detail::trim(fields[1]) << ',' << detail::trim(fields[2]) << ','
                << detail::trim(fields[3]);
        else
            out << ",,";
        out << ",,,,,,,," << detail::csv_field("error: " + error) << '\n';
        stats.failed += 1;
    }
    return stats;
}

}  // namespace omest
