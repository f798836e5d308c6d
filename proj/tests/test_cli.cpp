#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef MVHBOND_PATH
#error "MVHBOND_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

// run the CLI through /bin/sh, capturing stdout; stderr is dropped
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string tmp = "cli_out_" + std::to_string(counter++) + ".txt";
    const std::string cmd =
        std::string("\"") + MVHBOND_PATH + "\" " + args + " > " + tmp + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(tmp);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    std::remove(tmp.c_str());
    return r;
}

}  // namespace

TEST_CASE("price gives text and JSON output") {
    const RunResult text = run_cli("price --v 66");
    CHECK(text.exit_code == 0);
    CHECK(text.out.find("price") != std::string::npos);
    const RunResult js = run_cli("price --v 66 --json");
    CHECK(js.exit_code == 0);
    CHECK(js.out.find("\"price\":") != std::string::npos);
    CHECK(js.out.find("\"manifest\":") != std::string::npos);
    CHECK(js.out.find("\"yield\":") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
    CHECK(run_cli("price --rho 1.5").exit_code == 2);
    CHECK(run_cli("price --t 11").exit_code == 2);         // beyond maturity
    CHECK(run_cli("price --no-such-flag").exit_code == 2);
    CHECK(run_cli("curve --maturities 1,,2").exit_code == 2);
    CHECK(run_cli("sensitivity --param volatility --min 0.1 --max 0.2").exit_code == 2);
}

TEST_CASE("parameter files are honored and checked") {
    {
        std::ofstream f("cli_params_ok.json");
        f << R"({"mu1": 0.03, "kappa": 2.0})";
    }
    const RunResult ok = run_cli("price --params cli_params_ok.json --v 66 --json");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("\"kappa\":2") != std::string::npos);  // manifest echoes the file
    CHECK(ok.out.find("cli_params_ok.json") != std::string::npos);
    {
        std::ofstream f("cli_params_bad.json");
        f << R"({"mu_one": 0.03})";
    }
    CHECK(run_cli("price --params cli_params_bad.json").exit_code == 2);
    CHECK(run_cli("price --params no_such_file.json").exit_code == 2);
    std::remove("cli_params_ok.json");
    std::remove("cli_params_bad.json");
}

TEST_CASE("curve CSV shape") {
    const RunResult r = run_cli("curve --maturities 1,5,10 --v-list 66,132 --kappa-list 0,1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("# manifest {", 0) == 0);  // first line carries the manifest
    CHECK(r.out.find("T,v,kappa,b,c_tilde,B,yield") != std::string::npos);
    // 3 maturities x 2 values x 2 kappas = 12 data rows
    int rows = 0;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'T') ++rows;
    CHECK(rows == 12);
    CHECK(r.out.find("\r") == std::string::npos);  // LF endings only
}

TEST_CASE("sensitivity sweep runs") {
    const RunResult r =
        run_cli("sensitivity --param kappa --min 0 --max 10 --count 3 --v 66");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("param,value,b,c_tilde,B,yield") != std::string::npos);
}

TEST_CASE("hedge reports a z-score against the quadrature value") {
    const RunResult r = run_cli("hedge --paths 2000 --steps 50 --seed 42 --v 66");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"mean_sq_error\":") != std::string::npos);
    CHECK(r.out.find("\"z_score\":") != std::string::npos);
    CHECK(r.out.find("\"reference\":") != std::string::npos);
}

TEST_CASE("help is exit 0") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("price --help").exit_code == 0);
}
