#include "selfnorm/cli.hpp"

#include "selfnorm/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace selfnorm::cli {

namespace {

constexpr std::array<const char*, 12> kHeader = {"dist",     "n",     "B",        "family",
                                                  "value",    "optimizer", "theta_or_p_star", "n_star",
                                                  "mc_point", "mc_ci_lo",  "mc_ci_hi",        "status"};

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (const char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::array<std::string, 12> cells(const Row& r)
{
    return {r.dist,
            r.n,
            format_real(r.B),
            r.family,
            format_real(r.value),
            r.optimizer,
            format_real(r.arg_star),
            r.n_star > 0 ? std::to_string(r.n_star) : std::string(),
            format_real(r.mc_point),
            format_real(r.mc_ci_lo),
            format_real(r.mc_ci_hi),
            r.status};
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

double parse_real(const std::string& s)
{
    if (s.empty()) return kAbsent;
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "' in CSV");
    return v;
}

}  // namespace

std::string format_real(double x)
{
    if (std::isnan(x)) return {};
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

void write_csv(std::ostream& os, std::span<const Row> rows)
{
    for (std::size_t i = 0; i < kHeader.size(); ++i) os << (i ? "," : "") << kHeader[i];
    os << '\n';
    for (const auto& r : rows) {
        const auto c = cells(r);
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << quote(c[i]);
        os << '\n';
    }
}

void write_pretty(std::ostream& os, std::span<const Row> rows)
{
    std::vector<std::array<std::string, 12>> table;
    std::array<std::string, 12> head;
    std::copy(kHeader.begin(), kHeader.end(), head.begin());
    table.push_back(head);
    for (const auto& r : rows) table.push_back(cells(r));

    std::array<std::size_t, 12> width{};
    for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : table) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell = row[i].empty() ? "-" : row[i];
            if (i + 1 < row.size()) cell.resize(std::max(width[i], std::size_t{1}) + 2, ' ');
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
}

std::vector<Row> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != kHeader.size()) throw std::invalid_argument("CSV row has " + std::to_string(c.size()) + " fields");
        Row r;
        r.dist = c[0];
        r.n = c[1];
        r.B = parse_real(c[2]);
        r.family = c[3];
        r.value = parse_real(c[4]);
        r.optimizer = c[5];
        r.arg_star = parse_real(c[6]);
        r.n_star = c[7].empty() ? 0 : std::stoll(c[7]);
        r.mc_point = parse_real(c[8]);
        r.mc_ci_lo = parse_real(c[9]);
        r.mc_ci_hi = parse_real(c[10]);
        r.status = c[11];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace selfnorm::cli
