#include "selfnorm/cli.hpp"
#include "selfnorm/errors.hpp"

#include "support.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace selfnorm;
using namespace selfnorm::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "selfnorm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name)
{
    return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/selfnorm_test_" + name;
}

}  // namespace

TEST_CASE("distribution grammar")
{
    CHECK(parse_distribution("rademacher").kind() == LawKind::Rademacher);
    CHECK(parse_distribution("gaussian").kind() == LawKind::StandardGaussian);
    const auto u = parse_distribution("uniform:a=2");
    CHECK(u.kind() == LawKind::UniformSymmetric);
    CHECK(u.half_width() == 2.0);
    CHECK(u.name() == "uniform:a=2");
    const auto d = parse_distribution("discrete:-2:0.25,1:0.5,0:0.25");
    CHECK(d.atoms().size() == 3);
    CHECK(d.sigma2() == 1.5);
    CHECK_THROWS_AS(parse_distribution("uniform:a=bogus"), ConfigError);
    CHECK_THROWS_AS(parse_distribution("discrete:1"), ConfigError);
    CHECK_THROWS_AS(parse_distribution("cauchy"), ConfigError);
    CHECK_THROWS_AS(parse_distribution("empirical:/nonexistent/file"), ConfigError);

    const auto path = temp_path("samples.txt");
    std::ofstream(path) << "1.5\n-0.5\n\n2\n-3\n";
    const auto e = parse_distribution("empirical:" + path);
    CHECK(e.samples().size() == 4);
    std::ofstream(path) << "1.5\nabc\n";
    CHECK_THROWS_WITH_AS(parse_distribution("empirical:" + path), doctest::Contains("line 2"), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("generator grammar")
{
    CHECK(parse_psi("psi:degenerate:r=3").kind == PsiKind::Degenerate);
    CHECK(parse_psi("psi:power:m=2")(4.0) == 2.0);
    CHECK(parse_phi("phi:power:m=2", DistributionModel::rademacher())(2.0) == 2.0);
    CHECK(parse_phi("phi:natural", DistributionModel::rademacher())(1.0) == doctest::Approx(std::log(std::cosh(1.0))));
    CHECK_THROWS_AS(parse_psi("psi:other"), ConfigError);
    CHECK_THROWS_AS(parse_phi("phi:power:m=1", DistributionModel::rademacher()), ConfigError);
}

TEST_CASE("config text names the key and line of an error")
{
    const auto s = parse_config_text("# run\ndist = gaussian\n\ntrials=12 # trailing\n", "run.cfg");
    CHECK(s.at("dist").value == "gaussian");
    CHECK(s.at("trials").value == "12");
    CHECK(s.at("trials").origin == "run.cfg:4");
    CHECK_THROWS_WITH_AS(parse_config_text("dist=gaussian\nbogus=1\n", "x.cfg"), doctest::Contains("x.cfg:2"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config_text("dist gaussian\n", "x.cfg"), ConfigError);

    Settings file = parse_config_text("command=mc\ntrials=zero\n", "bad.cfg");
    CHECK_THROWS_WITH_AS(build_config({}, file), doctest::Contains("bad.cfg:2: key 'trials'"), ConfigError);
}

TEST_CASE("flags win over the config file")
{
    const auto path = temp_path("run.cfg");
    std::ofstream(path) << "dist=gaussian\nn=1,4\nB=1,e\ntrials=500\nseed=3\n";
    std::ostringstream sink;
    const char* argv[] = {"selfnorm", "mc", "--config", path.c_str(), "--trials", "700"};
    const auto cfg = parse_command_line(6, argv, sink);
    REQUIRE(cfg);
    CHECK(cfg->command == Command::MC);
    CHECK(cfg->distribution == "gaussian");
    CHECK(cfg->trials == 700);
    CHECK(cfg->seed == 3);
    CHECK(cfg->n_grid == std::vector<std::int64_t>{1, 4});
    CHECK(cfg->B_grid.size() == 2);
    std::remove(path.c_str());
}

TEST_CASE("configuration errors exit with status 2")
{
    const auto bogus = invoke({"bound-exp", "--dist", "uniform:a=bogus"});
    CHECK(bogus.code == 2);
    CHECK(bogus.err.find("dist") != std::string::npos);
    CHECK(invoke({"bound-exp", "--n", "0"}).code == 2);
    CHECK(invoke({"bound-exp", "--B", "1,-2"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"mc", "--trials", "0"}).code == 2);
    CHECK(invoke({"gls", "--dist", "gaussian"}).code == 2);
    CHECK(invoke({"bound-exp", "--no-such-flag", "1"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("power bound rows below e are skipped")
{
    const auto r = invoke({"bound-power", "--dist", "gaussian", "--n", "16", "--B", "1,5"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto rows = read_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "SKIP");
    CHECK(std::isnan(rows[0].value));
    CHECK(rows[1].value == doctest::Approx(0.5587173894323873).epsilon(1e-7));
    CHECK(rows[1].optimizer == "p");
}

TEST_CASE("verify on the enumerable Rademacher case")
{
    const auto r = invoke({"verify", "--dist", "rademacher", "--n", "1,4,16", "--B", "0.5,1,2", "--trials", "1000000",
                           "--seed", "7"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    const auto rows = read_csv(in);
    std::size_t pass = 0;
    for (const auto& row : rows) {
        CHECK(row.status != "FAIL");
        if (row.status == "PASS") ++pass;
    }
    CHECK(pass >= 12);
}

TEST_CASE("negative control fails verification")
{
    const auto r = invoke({"verify", "--dist", "rademacher", "--n", "1,4", "--B", "0.5,1", "--bound-scale", "1e-6"});
    CHECK(r.code == 1);
    CHECK(r.out.find(",FAIL") != std::string::npos);
}

TEST_CASE("CSV round trip")
{
    std::vector<Row> rows(3);
    rows[0] = {"discrete:-1:0.5,1:0.5", "4", 0.25, "exp", 0.123456789012345678, "theta", kInf, 0, 1.0 / 3, 0.0, 1.0, "PASS"};
    rows[1] = {"gaussian", "1:4096", 50.0, "exp-sup", 1.6289430204164835e-64, "p", 181.8, 1, kAbsent, kAbsent, kAbsent, ""};
    rows[2] = {"x\"y", "", 2.718281828459045, "lower-clt", 2.5e-300, "", kAbsent, 0, kAbsent, kAbsent, kAbsent, "REPORT"};
    std::ostringstream first;
    write_csv(first, rows);
    std::istringstream in(first.str());
    const auto back = read_csv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].dist == rows[i].dist);
        CHECK(back[i].n == rows[i].n);
        CHECK(back[i].n_star == rows[i].n_star);
        CHECK(back[i].status == rows[i].status);
        for (const auto [a, b] : {std::pair{back[i].value, rows[i].value}, {back[i].B, rows[i].B},
                                  {back[i].arg_star, rows[i].arg_star}, {back[i].mc_point, rows[i].mc_point}}) {
            if (std::isnan(b)) CHECK(std::isnan(a));
            else if (std::isinf(b)) CHECK(a == b);
            else CHECK(close_rel(a, b, 5e-15));
        }
    }
    std::ostringstream second;
    write_csv(second, back);
    CHECK(second.str() == first.str());
    CHECK(first.str().substr(0, 4) == "dist");
}

TEST_CASE("CSV from a real run parses back")
{
    const auto r = invoke({"bound-exp", "--dist", "gaussian", "--n", "1,4", "--sup-range", "1:64"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto rows = read_csv(in);
    CHECK(rows.size() == 2 * 11 + 2 * 11);
    std::ostringstream again;
    write_csv(again, rows);
    CHECK(again.str() == r.out);
}

TEST_CASE("identical configs give byte-identical output")
{
    const std::vector<std::string> args = {"sweep", "--dist", "uniform:a=1.7320508075688772", "--n", "1,4", "--B",
                                           "0.5,2,5", "--trials", "20000", "--seed", "11", "--sup-range", "1:32"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("lower-clt-printed") != std::string::npos);
    CHECK(a.out.find("exp-sup") != std::string::npos);
}

TEST_CASE("output file and pretty format")
{
    const auto path = temp_path("out.txt");
    const auto r = invoke({"bound-lower", "--dist", "gaussian", "--B", "1,100", "--format", "pretty", "-o", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header.find("theta_or_p_star") != std::string::npos);
    CHECK(line.find("lower-q1") == header.find("family"));
    std::remove(path.c_str());
}

TEST_CASE("gls command")
{
    const auto psi = invoke({"gls", "--dist", "gaussian", "--psi", "psi:power:m=2", "--B", "10"});
    REQUIRE(psi.code == 0);
    std::istringstream in(psi.out);
    const auto rows = read_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].value == doctest::Approx(0.7978845608028654).epsilon(1e-8));
    const auto phi = invoke({"gls", "--dist", "rademacher", "--phi", "phi:natural", "--n", "1", "--B", "0.5"});
    REQUIRE(phi.code == 0);
    std::istringstream in2(phi.out);
    const auto prow = read_csv(in2);
    REQUIRE(prow.size() == 2);
    CHECK(prow[1].value == doctest::Approx(std::exp(-0.13081203594113696)).epsilon(1e-8));
}
