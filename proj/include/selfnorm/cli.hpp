#pragma once

#include "selfnorm/bounds.hpp"
#include "selfnorm/dist.hpp"
#include "selfnorm/gls.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selfnorm::cli {

enum class Command { BoundExp, BoundPower, BoundLower, Sweep, MC, Verify, Gls };
enum class Format { Csv, Pretty };

std::string_view command_name(Command c);

struct RunConfig {
    Command command = Command::Sweep;
    std::string distribution = "rademacher";
    std::vector<std::int64_t> n_grid{1};
    std::vector<double> B_grid = default_B_grid();
    /// Adds sup-over-n curves; sweep uses [1, kDefaultSupNHi] when unset.
    std::optional<NRange> n_sup_range;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    double kr_constant = kRosenthalConstant;
    std::string output_path;  // empty or "-" writes to stdout
    Format format = Format::Csv;
    unsigned threads = 0;
    std::uint64_t chunk_size = 1u << 16;
    double confidence = 0.999;
    /// Multiplies every upper-bound value before verification (negative control).
    double bound_scale = 1.0;
    std::string psi;
    std::string phi;
    GridOptions grid;
};

/// One raw key=value entry and where it came from, for error messages.
struct Setting {
    std::string value;
    std::string origin;  // "flag --trials" or "run.cfg:3"
};
using Settings = std::map<std::string, Setting>;

/// Flat key=value text; '#' starts a comment, blank lines are ignored.
Settings parse_config_text(std::string_view text, const std::string& source);
Settings read_config_file(const std::string& path);

/// Typed config from flag and file settings; flags win on conflict.
/// Throws ConfigError naming the offending key and its origin.
RunConfig build_config(const Settings& flags, const Settings& file);

/// argv[1] is the command. Returns nullopt when help was printed.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// rademacher | gaussian | uniform:a=<real> | discrete:v1:p1,v2:p2,... | empirical:<path>
DistributionModel parse_distribution(std::string_view spec);
/// psi:degenerate:r=<real> | psi:power:m=<real>
PsiFunction parse_psi(std::string_view spec);
/// phi:power:m=<real> | phi:natural
PhiFunction parse_phi(std::string_view spec, const DistributionModel& dist);

inline constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

/// One output line. NaN numeric fields and n_star = 0 print as empty cells.
struct Row {
    std::string dist;
    std::string n;  // an integer, or "lo:hi" for a sup-over-n row
    double B = kAbsent;
    std::string family;
    double value = kAbsent;
    std::string optimizer;  // name of the attaining argument: theta, p or lambda
    double arg_star = kAbsent;
    std::int64_t n_star = 0;
    double mc_point = kAbsent;
    double mc_ci_lo = kAbsent;
    double mc_ci_hi = kAbsent;
    std::string status;
};

std::string format_real(double x);
void write_csv(std::ostream& os, std::span<const Row> rows);
void write_pretty(std::ostream& os, std::span<const Row> rows);
/// Inverse of write_csv.
std::vector<Row> read_csv(std::istream& is);

struct Outcome {
    std::vector<Row> rows;
    bool has_fail = false;
};

Outcome compute(const RunConfig& cfg);

/// Runs one command and writes its table. 0 on success, 1 when a cell FAILs.
int run(const RunConfig& cfg, std::ostream& out);

/// Full entry point: parse, run, map errors to exit status 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selfnorm::cli
