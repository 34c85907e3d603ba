#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "rdp/io.hpp"

using doctest::Approx;
using rdp::io::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(RDP_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') {
                quoted = !quoted;
            } else if (ch == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell += ch;
            }
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double hb(double a) { return -a * std::log(a) - (1 - a) * std::log(1 - a); }

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("binary-curve: twenty rows, RD column, byte-identical reruns")
    {
        const Run a = run("binary-curve --d-min 0.05 --d-max 0.5 --d-step 0.05 --P 0,D");
        REQUIRE(a.code == 0);
        const auto rows = csv(a.out);
        REQUIRE(rows.size() == 21);
        CHECK(rows[0] == std::vector<std::string>{"D", "P", "hbar", "envelope", "rate_nats", "rate_bits"});
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double D = std::stod(rows[i][0]), P = std::stod(rows[i][1]);
            const double r = std::stod(rows[i][4]);
            CHECK(std::stod(rows[i][5]) == Approx(r / std::log(2.0)).epsilon(1e-11));
            if (D >= 0.5 - 1e-12) {
                CHECK(r == 0.0);
            } else if (P == D) {
                CHECK(std::abs(r - (std::log(2.0) - hb(D))) <= 1e-3);
            }
        }
        CHECK(run("binary-curve --d-min 0.05 --d-max 0.5 --d-step 0.05 --P 0,D").out == a.out);
        CHECK(run("binary-curve --D 1.5").code == 2);
        CHECK(run("binary-curve --P x").code == 2);
    }

    TEST_CASE("gaussian-waterfill examples and errors")
    {
        const Run a = run("gaussian-waterfill --eigenvalues 1 --D 0.2 --P 0");
        REQUIRE(a.code == 0);
        CHECK(json::parse(a.out)["rate_nats"].get<double>() == Approx(1.151293).epsilon(1e-6));
        const Run b = run("gaussian-waterfill --eigenvalues 1,0.25 --D 0.5 --P 0.5");
        CHECK(json::parse(b.out)["rate_nats"].get<double>() == Approx(0.693147).epsilon(1e-6));
        const json c = json::parse(run("gaussian-waterfill --D 3 --P 3 --eigenvalues 1").out);
        CHECK(c["rate_nats"].get<double>() == 0.0);
        CHECK(c["omega_l"] == json::array({1.0}));
        CHECK(run("gaussian-waterfill --eigenvalues 1,-2 --D 0.2 --P 0").code == 2);
        CHECK(run("gaussian-waterfill --eigenvalues 1 --D 0.2").code == 2);
        const Run curve = run("gaussian-waterfill --eigenvalues 1,0.5 --P 0.1 --curve --d-min 0.1 --d-max 0.5 --d-step 0.1");
        REQUIRE(curve.code == 0);
        const auto rows = csv(curve.out);
        CHECK(rows.size() == 6);
        CHECK(rows[0][0] == "D");
        CHECK(rows[1][7].front() == '[');
    }

    TEST_CASE("finite-solve: JSON out, malformed input exits 2, infeasible exits 3")
    {
        const Run a = run(R"(finite-solve --problem '{"source":{"probs":[0.5,0.5]},"D":0.11,"P":0.11,"u_card":6}')");
        REQUIRE(a.code == 0);
        const json j = json::parse(a.out);
        CHECK(std::abs(j["rate_nats"].get<double>() - (std::log(2.0) - hb(0.11))) <= 2e-3);
        CHECK(j["converged"].get<bool>());
        CHECK(j.contains("encoder"));
        CHECK(run(R"(finite-solve --problem '{"source":{"probs":[0.5,0.5]},"D":0.1')").code == 2);
        CHECK(run(R"(finite-solve --problem '{"source":{"probs":[0.5,0.6]},"D":0.1,"P":0}')").code == 2);
        const Run bad = run(
            R"(finite-solve --restarts 4 --problem '{"source":[0.5,0.5],"distortion":[[0.5,1],[1,0.5]],"D":0.2,"P":0,"u_card":2}')");
        CHECK(bad.code == 3);
        CHECK(json::parse(bad.out).contains("rate_nats"));
    }

    TEST_CASE("finite-curve emits one row per budget pair")
    {
        const Run a = run(R"(finite-curve --problem '{"source":[0.5,0.5],"u_card":6}' --D 0.1,0.2 --P 0,D)");
        REQUIRE(a.code == 0);
        const auto rows = csv(a.out);
        REQUIRE(rows.size() == 5);
        CHECK(rows[1][4] == "solver");
        CHECK(std::stod(rows[2][2]) <= std::stod(rows[1][2]));
    }

    TEST_CASE("simulate is reproducible under a fixed seed")
    {
        const std::string args =
            R"(simulate --seed 42 --samples 20000 --construction '{"type":"gaussian","eigenvalues":[1],"D":0.2,"P":0.05}')";
        const Run a = run(args);
        REQUIRE(a.code == 0);
        CHECK(run(args).out == a.out);
        const json j = json::parse(a.out);
        CHECK(j["est_P"]["target"].get<double>() == Approx(0.05));
        const Run f = run(
            R"(simulate --samples 5000 --construction '{"type":"finite","source":[0.5,0.5],"encoder":{"rows":[[1,0],[0,1]]},"decoder":{"rows":[[1,0],[0,1]]}}')");
        REQUIRE(f.code == 0);
        CHECK(json::parse(f.out)["est_D"]["value"].get<double>() == 0.0);
        CHECK(run(R"(simulate --construction '{"type":"weird"}')").code == 2);
    }

    TEST_CASE("compare: binary gap and the solver-free Gaussian path")
    {
        const Run a = run("compare --D 0.11 --P 0.11");
        REQUIRE(a.code == 0);
        CHECK(json::parse(a.out)["max_gap"].get<double>() <= 2e-3);
        const Run g = run("compare --eigenvalues 1,0.3,0.05 --D 0.1,0.4,2 --P 0,0.05,D");
        REQUIRE(g.code == 0);
        CHECK(json::parse(g.out)["max_gap"].get<double>() <= 1e-12);
    }

    TEST_CASE("usage errors exit 2; help exits 0")
    {
        CHECK(run("").code == 2);
        CHECK(run("no-such-command").code == 2);
        CHECK(run("--help").code == 0);
    }
}
