#include "selfnorm/cli.hpp"

#include "selfnorm/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace selfnorm::cli {

namespace {

const std::vector<std::string> kKeys = {
    "command",    "dist",   "n",     "B",          "sup-range", "trials",      "seed",
    "kr",         "output", "format", "threads",   "chunk-size", "confidence", "bound-scale",
    "psi",        "phi",    "p-points", "p-cap",   "lambda-per-decade", "lambda-decades"};

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const Setting& s, const std::string& what)
{
    throw ConfigError(s.origin + ": key '" + key + "': " + what + " (got '" + s.value + "')");
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <class T>
std::optional<T> parse_number(std::string_view s)
{
    T v{};
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end) return std::nullopt;
    return v;
}

double real_of(const std::string& key, const Setting& s, std::string_view text)
{
    if (text == "e") return std::numbers::e;
    const auto v = parse_number<double>(text);
    if (!v) fail(key, s, "expected a real number");
    return *v;
}

double positive_real(const std::string& key, const Setting& s)
{
    const double v = real_of(key, s, trim(s.value));
    if (!(v > 0.0) || !std::isfinite(v)) fail(key, s, "expected a positive finite real");
    return v;
}

template <class T>
T integer(const std::string& key, const Setting& s, T min_value)
{
    const auto v = parse_number<T>(trim(s.value));
    if (!v || *v < min_value) fail(key, s, "expected an integer >= " + std::to_string(min_value));
    return *v;
}

Command command_of(const Setting& s)
{
    for (const auto c : {Command::BoundExp, Command::BoundPower, Command::BoundLower, Command::Sweep, Command::MC,
                         Command::Verify, Command::Gls})
        if (trim(s.value) == command_name(c)) return c;
    fail("command", s, "expected one of bound-exp, bound-power, bound-lower, sweep, mc, verify, gls");
}

}  // namespace

std::string_view command_name(Command c)
{
    switch (c) {
    case Command::BoundExp: return "bound-exp";
    case Command::BoundPower: return "bound-power";
    case Command::BoundLower: return "bound-lower";
    case Command::Sweep: return "sweep";
    case Command::MC: return "mc";
    case Command::Verify: return "verify";
    case Command::Gls: return "gls";
    }
    return "?";
}

Settings parse_config_text(std::string_view text, const std::string& source)
{
    Settings out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string origin = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(origin + ": expected key=value");
        const std::string key(trim(line.substr(0, eq)));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw ConfigError(origin + ": unknown key '" + key + "'");
        if (out.count(key)) throw ConfigError(origin + ": key '" + key + "' repeated");
        out[key] = {std::string(trim(line.substr(eq + 1))), origin};
    }
    return out;
}

Settings read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

RunConfig build_config(const Settings& flags, const Settings& file)
{
    Settings merged = file;
    for (const auto& [k, v] : flags) merged[k] = v;

    RunConfig cfg;
    const auto get = [&](const char* key) -> const Setting* {
        const auto it = merged.find(key);
        return it == merged.end() ? nullptr : &it->second;
    };

    if (const auto* s = get("command")) cfg.command = command_of(*s);
    else throw ConfigError("missing command (bound-exp, bound-power, bound-lower, sweep, mc, verify, gls)");

    if (const auto* s = get("dist")) cfg.distribution = std::string(trim(s->value));
    DistributionModel dist = DistributionModel::rademacher();
    try {
        dist = parse_distribution(cfg.distribution);
    } catch (const std::exception& e) {
        const Setting* s = get("dist");
        fail("dist", s ? *s : Setting{cfg.distribution, "default"}, e.what());
    }

    if (const auto* s = get("n")) {
        cfg.n_grid.clear();
        for (const auto part : split(s->value, ',')) {
            const auto v = parse_number<std::int64_t>(part);
            if (!v || *v < 1) fail("n", *s, "expected a comma-separated list of positive integers");
            cfg.n_grid.push_back(*v);
        }
    }
    if (const auto* s = get("B")) {
        cfg.B_grid.clear();
        for (const auto part : split(s->value, ',')) {
            const double v = real_of("B", *s, part);
            if (!(v > 0.0) || !std::isfinite(v)) fail("B", *s, "expected a comma-separated list of positive reals");
            cfg.B_grid.push_back(v);
        }
    }
    if (const auto* s = get("sup-range")) {
        const auto parts = split(s->value, ':');
        std::optional<std::int64_t> lo, hi;
        if (parts.size() == 2) {
            lo = parse_number<std::int64_t>(parts[0]);
            hi = parse_number<std::int64_t>(parts[1]);
        }
        if (!lo || !hi || *lo < 1 || *hi < *lo) fail("sup-range", *s, "expected lo:hi with 1 <= lo <= hi");
        cfg.n_sup_range = NRange{*lo, *hi};
    }
    if (const auto* s = get("trials")) cfg.trials = integer<std::uint64_t>("trials", *s, 1);
    if (const auto* s = get("seed")) cfg.seed = integer<std::uint64_t>("seed", *s, 0);
    if (const auto* s = get("kr")) cfg.kr_constant = positive_real("kr", *s);
    if (const auto* s = get("output")) cfg.output_path = std::string(trim(s->value));
    if (const auto* s = get("format")) {
        const auto f = trim(s->value);
        if (f == "csv") cfg.format = Format::Csv;
        else if (f == "pretty") cfg.format = Format::Pretty;
        else fail("format", *s, "expected csv or pretty");
    }
    if (const auto* s = get("threads")) cfg.threads = integer<unsigned>("threads", *s, 0);
    if (const auto* s = get("chunk-size")) cfg.chunk_size = integer<std::uint64_t>("chunk-size", *s, 1);
    if (const auto* s = get("confidence")) {
        cfg.confidence = real_of("confidence", *s, trim(s->value));
        if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) fail("confidence", *s, "expected a value in (0, 1)");
    }
    if (const auto* s = get("bound-scale")) cfg.bound_scale = positive_real("bound-scale", *s);
    if (const auto* s = get("p-points")) cfg.grid.p_points = integer<int>("p-points", *s, 2);
    if (const auto* s = get("p-cap")) cfg.grid.p_cap = positive_real("p-cap", *s);
    if (const auto* s = get("lambda-per-decade"))
        cfg.grid.lambda_per_decade = integer<int>("lambda-per-decade", *s, 1);
    if (const auto* s = get("lambda-decades")) cfg.grid.lambda_decades = integer<int>("lambda-decades", *s, 1);

    if (const auto* s = get("psi")) {
        cfg.psi = std::string(trim(s->value));
        try {
            parse_psi(cfg.psi);
        } catch (const std::exception& e) {
            fail("psi", *s, e.what());
        }
    }
    if (const auto* s = get("phi")) {
        cfg.phi = std::string(trim(s->value));
        try {
            parse_phi(cfg.phi, dist);
        } catch (const std::exception& e) {
            fail("phi", *s, e.what());
        }
    }
    if (cfg.command == Command::Gls && cfg.psi.empty() == cfg.phi.empty())
        throw ConfigError("gls needs exactly one of the keys 'psi' and 'phi'");
    return cfg;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out)
{
    CLI::App app{"Tail bounds for self-normalized sums under natural norming, checked by Monte Carlo", "selfnorm"};
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> opts;
    std::string config_path;

    const auto add = [&](const std::string& key, const std::string& names, const std::string& help) {
        opts[key] = app.add_option(names, raw[key], help);
    };
    add("command", "command", "bound-exp | bound-power | bound-lower | sweep | mc | verify | gls");
    add("dist", "--dist", "rademacher | gaussian | uniform:a=<real> | discrete:v:p,... | empirical:<path>");
    add("n", "--n", "comma-separated sample sizes");
    add("B", "--B", "comma-separated thresholds; 'e' is accepted");
    add("sup-range", "--sup-range", "lo:hi range for sup-over-n curves");
    add("trials", "--trials", "Monte Carlo trials per n");
    add("seed", "--seed", "64-bit seed");
    add("kr", "--kr", "Rosenthal constant");
    add("output", "-o,--output", "output file (default stdout)");
    add("format", "--format", "csv | pretty");
    add("threads", "--threads", "worker threads, 0 = all cores");
    add("chunk-size", "--chunk-size", "trials per RNG chunk");
    add("confidence", "--confidence", "Clopper-Pearson confidence");
    add("bound-scale", "--bound-scale", "multiply upper bounds before verification");
    add("psi", "--psi", "psi:degenerate:r=<real> | psi:power:m=<real>");
    add("phi", "--phi", "phi:power:m=<real> | phi:natural");
    add("p-points", "--p-points", "p grid size");
    add("p-cap", "--p-cap", "largest p on unbounded supports");
    add("lambda-per-decade", "--lambda-per-decade", "lambda grid density");
    add("lambda-decades", "--lambda-decades", "lambda grid span");
    app.add_option("--config", config_path, "key=value file; flags win");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("command line: ") + e.what());
    }

    Settings flags;
    for (const auto& [key, opt] : opts)
        if (opt->count() > 0) flags[key] = {raw[key], key == "command" ? "command line" : "flag --" + key};
    const Settings file = config_path.empty() ? Settings{} : read_config_file(config_path);
    return build_config(flags, file);
}

}  // namespace selfnorm::cli
