#include "selfnorm/cli.hpp"

#include "selfnorm/errors.hpp"
#include "selfnorm/mc.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace selfnorm::cli {

namespace {

std::string range_label(NRange r) { return std::to_string(r.lo) + ":" + std::to_string(r.hi); }

std::string_view optimizer_name(BoundFamily f)
{
    switch (f) {
    case BoundFamily::ExpLevel: return "theta";
    case BoundFamily::PowerLevel: return "p";
    default: return "";
    }
}

std::string family_label(BoundFamily f, bool sup)
{
    std::string s(family_name(f));
    return sup && f != BoundFamily::LowerCLT ? s + "-sup" : s;
}

Row bound_row(const std::string& dist, std::string n, BoundFamily f, bool sup, const BoundPoint& p)
{
    Row r;
    r.dist = dist;
    r.n = std::move(n);
    r.B = p.B;
    r.family = family_label(f, sup);
    r.value = p.value;
    r.optimizer = optimizer_name(f);
    if (!r.optimizer.empty()) r.arg_star = p.optimizer.arg_star;
    if (sup) r.n_star = p.n_star;
    return r;
}

Row skip_row(const std::string& dist, std::string n, double B, bool sup)
{
    Row r;
    r.dist = dist;
    r.n = std::move(n);
    r.B = B;
    r.family = family_label(BoundFamily::PowerLevel, sup);
    r.status = "SKIP";
    return r;
}

MCConfig mc_config(const RunConfig& cfg, std::int64_t n)
{
    MCConfig m;
    m.n = n;
    m.trials = cfg.trials;
    m.seed = cfg.seed;
    m.chunk_size = cfg.chunk_size;
    m.confidence = cfg.confidence;
    m.threads = cfg.threads;
    return m;
}

void exp_rows(const RunConfig& cfg, const DistributionModel& dist, std::vector<Row>& rows)
{
    for (const auto n : cfg.n_grid)
        for (const auto& p : exp_curve(dist, n, cfg.B_grid).points)
            rows.push_back(bound_row(dist.name(), std::to_string(n), BoundFamily::ExpLevel, false, p));
    if (!cfg.n_sup_range) return;
    const NRange r = *cfg.n_sup_range;
    for (const double B : cfg.B_grid) {
        const auto s = exp_tail_bound_sup(dist, B, r.lo, r.hi);
        rows.push_back(bound_row(dist.name(), range_label(r), BoundFamily::ExpLevel, true, s.point));
        Row edge;
        edge.dist = dist.name();
        edge.n = std::to_string(r.hi);
        edge.B = B;
        edge.family = "exp-sup-boundary";
        edge.value = s.boundary_value;
        rows.push_back(edge);
    }
}

void power_rows(const RunConfig& cfg, const DistributionModel& dist, std::vector<Row>& rows)
{
    for (const auto n : cfg.n_grid) {
        for (const double B : cfg.B_grid) {
            if (B < std::numbers::e) {
                rows.push_back(skip_row(dist.name(), std::to_string(n), B, false));
                continue;
            }
            const auto p = power_tail_bound(dist, n, B, cfg.kr_constant, cfg.grid);
            rows.push_back(bound_row(dist.name(), std::to_string(n), BoundFamily::PowerLevel, false, p));
        }
    }
    if (!cfg.n_sup_range) return;
    const NRange r = *cfg.n_sup_range;
    for (const double B : cfg.B_grid) {
        if (B < std::numbers::e) {
            rows.push_back(skip_row(dist.name(), range_label(r), B, true));
            continue;
        }
        const auto s = power_tail_bound_sup(dist, B, r.lo, r.hi, cfg.kr_constant, cfg.grid);
        rows.push_back(bound_row(dist.name(), range_label(r), BoundFamily::PowerLevel, true, s.point));
        Row edge;
        edge.dist = dist.name();
        edge.n = std::to_string(r.hi);
        edge.B = B;
        edge.family = "power-sup-boundary";
        edge.value = s.boundary_value;
        rows.push_back(edge);
    }
}

void lower_rows(const RunConfig& cfg, const DistributionModel& dist, std::vector<Row>& rows)
{
    for (const double B : cfg.B_grid) {
        Row q;
        q.dist = dist.name();
        q.n = "1";
        q.B = B;
        q.family = family_name(BoundFamily::LowerQ1);
        q.value = lower_bound_q1(dist, B);
        rows.push_back(q);
    }
    for (const double B : cfg.B_grid) {
        const auto clt = lower_bound_clt(B);
        Row r;
        r.dist = dist.name();
        r.B = B;
        r.family = family_name(BoundFamily::LowerCLT);
        r.value = clt.operative;
        r.status = "REPORT";
        rows.push_back(r);
        r.family = "lower-clt-printed";
        r.value = clt.printed;
        rows.push_back(r);
    }
}

void mc_rows(const RunConfig& cfg, const DistributionModel& dist, std::vector<Row>& rows)
{
    for (const auto n : cfg.n_grid) {
        for (const auto& e : empirical_tail(dist, mc_config(cfg, n), cfg.B_grid)) {
            Row r;
            r.dist = dist.name();
            r.n = std::to_string(n);
            r.B = e.B;
            r.family = "mc";
            r.mc_point = e.point;
            r.mc_ci_lo = e.ci_lo;
            r.mc_ci_hi = e.ci_hi;
            rows.push_back(r);
        }
    }
}

bool verify_rows(const RunConfig& cfg, const DistributionModel& dist, std::vector<Row>& rows)
{
    std::vector<BoundCurve> curves;
    for (const auto n : cfg.n_grid) {
        curves.push_back(exp_curve(dist, n, cfg.B_grid));
        auto power = power_curve(dist, n, cfg.B_grid, cfg.kr_constant);
        if (!power.points.empty()) curves.push_back(std::move(power));
    }
    if (cfg.n_sup_range) {
        curves.push_back(exp_sup_curve(dist, *cfg.n_sup_range, cfg.B_grid));
        auto power = power_sup_curve(dist, *cfg.n_sup_range, cfg.B_grid, cfg.kr_constant);
        if (!power.points.empty()) curves.push_back(std::move(power));
    }
    for (auto& c : curves)
        for (auto& p : c.points) p.value *= cfg.bound_scale;
    curves.push_back(q1_curve(dist, cfg.B_grid));
    curves.push_back(clt_curve(cfg.B_grid));

    MCConfig mc = mc_config(cfg, 1);
    const auto report = verify_bounds(dist, cfg.n_grid, cfg.B_grid, mc, curves);
    for (const auto& cell : report.cells) {
        Row r = bound_row(dist.name(), std::to_string(cell.n), cell.family, cell.sup_curve, cell.bound);
        if (cell.family == BoundFamily::LowerCLT) r.n_star = 0;
        r.mc_point = cell.referee.point;
        r.mc_ci_lo = cell.referee.lo;
        r.mc_ci_hi = cell.referee.hi;
        r.status = status_name(cell.status);
        rows.push_back(r);
    }
    for (const auto n : cfg.n_grid)
        for (const double B : cfg.B_grid)
            if (B < std::numbers::e) rows.push_back(skip_row(dist.name(), std::to_string(n), B, false));
    return report.has_fail();
}

void gls_rows(const RunConfig& cfg, const DistributionModel& dist, std::vector<Row>& rows)
{
    if (!cfg.psi.empty()) {
        const auto psi = parse_psi(cfg.psi);
        const auto curve = [&dist](double p) { return lp_norm(dist, p); };
        const auto norm = gls_norm(curve, psi, cfg.grid);
        Row head;
        head.dist = dist.name();
        head.family = "gls-norm:" + cfg.psi;
        head.value = norm.value;
        head.optimizer = "p";
        head.arg_star = norm.arg;
        rows.push_back(head);
        for (const double B : cfg.B_grid) {
            const auto t = gls_tail_bound(psi, norm.value, B, cfg.grid);
            Row r;
            r.dist = dist.name();
            r.n = "1";
            r.B = B;
            r.family = "gls:" + cfg.psi;
            r.value = t.value;
            r.optimizer = "p";
            r.arg_star = t.arg_star;
            rows.push_back(r);
        }
        return;
    }
    const auto phi = parse_phi(cfg.phi, dist);
    const auto mgf = [&dist](double l) { return log_mgf2(dist, l, 0.0); };
    const auto norm = bphi_norm(mgf, phi, cfg.grid);
    Row head;
    head.dist = dist.name();
    head.family = "bphi-norm:" + cfg.phi;
    head.value = norm.value;
    head.optimizer = "lambda";
    head.arg_star = norm.arg;
    rows.push_back(head);
    for (const auto n : cfg.n_grid) {
        for (const double B : cfg.B_grid) {
            const auto t = normalized_sum_tail(phi, norm.value, n, B);
            Row r;
            r.dist = dist.name();
            r.n = std::to_string(n);
            r.B = B;
            r.family = "bphi:" + cfg.phi;
            r.value = t.value;
            r.optimizer = "lambda";
            r.arg_star = t.arg_star;
            rows.push_back(r);
        }
    }
}

}  // namespace

Outcome compute(const RunConfig& cfg)
{
    if (cfg.n_grid.empty()) throw ConfigError("key 'n': grid is empty");
    if (cfg.B_grid.empty()) throw ConfigError("key 'B': grid is empty");
    const auto dist = parse_distribution(cfg.distribution);
    Outcome out;
    switch (cfg.command) {
    case Command::BoundExp: exp_rows(cfg, dist, out.rows); break;
    case Command::BoundPower: power_rows(cfg, dist, out.rows); break;
    case Command::BoundLower: lower_rows(cfg, dist, out.rows); break;
    case Command::MC: mc_rows(cfg, dist, out.rows); break;
    case Command::Verify: out.has_fail = verify_rows(cfg, dist, out.rows); break;
    case Command::Sweep: {
        RunConfig full = cfg;
        if (!full.n_sup_range) full.n_sup_range = NRange{1, kDefaultSupNHi};
        out.has_fail = verify_rows(full, dist, out.rows);
        for (const double B : full.B_grid) {
            Row r;
            r.dist = dist.name();
            r.B = B;
            r.family = "lower-clt-printed";
            r.value = lower_bound_clt(B).printed;
            r.status = "REPORT";
            out.rows.push_back(r);
        }
        break;
    }
    case Command::Gls: gls_rows(cfg, dist, out.rows); break;
    }
    return out;
}

int run(const RunConfig& cfg, std::ostream& out)
{
    const Outcome result = compute(cfg);
    std::ostringstream buf;
    if (cfg.format == Format::Csv) write_csv(buf, result.rows);
    else write_pretty(buf, result.rows);

    if (cfg.output_path.empty() || cfg.output_path == "-") {
        out << buf.str();
    } else {
        std::ofstream file(cfg.output_path, std::ios::binary);
        if (!file) throw ConfigError("key 'output': cannot write '" + cfg.output_path + "'");
        file << buf.str();
    }
    return result.has_fail ? 1 : 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    try {
        const auto cfg = parse_command_line(argc, argv, out);
        if (!cfg) return 0;
        return run(*cfg, out);
    } catch (const ConfigError& e) {
        err << "selfnorm: configuration error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "selfnorm: " << e.what() << '\n';
    }
    return 2;
}

}  // namespace selfnorm::cli
