#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

// Drives the installed binary (path injected by the build) through /bin/sh,
// capturing exit code and both streams via temporary files in the work dir.

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_path = "cli_stdout_" + tag + ".txt";
  const std::string err_path = "cli_stderr_" + tag + ".txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" +
                          WOFZ_CLI_BINARY + "\" " + args + " > " + out_path +
                          " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (const char c : s) {
    n += c == '\n';
  }
  return n;
}

}  // namespace

TEST_CASE("eval prints shortest round-trip values") {
  const RunResult r0 = run_cli("eval --x 0 --y 0");
  CHECK(r0.exit_code == 0);
  CHECK(r0.out == "re=1 im=0\n");

  const RunResult r1 = run_cli("eval --x 1 --y 1");
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == "re=0.3047442052569126 im=0.20821893820283163\n");

  const RunResult rc = run_cli("eval --x 1 --y 1 --check");
  CHECK(rc.exit_code == 0);
  CHECK(rc.out.find("re=0.3047442052569126 im=0.20821893820283163 "
                    "delta_re=") == 0);
  CHECK(rc.out.find(" delta_im=") != std::string::npos);

  for (const char* variant : {"eq2", "eq4", "auto"}) {
    const RunResult rv =
        run_cli(std::string("eval --x 2 --y 0.3 --variant ") + variant);
    CHECK(rv.exit_code == 0);
  }
}

TEST_CASE("eval error paths exit 2") {
  const RunResult overflow = run_cli("eval --x 0 --y -30");
  CHECK(overflow.exit_code == 2);
  CHECK(overflow.err.find("error:") != std::string::npos);

  CHECK(run_cli("eval --x 1 --y -1 --variant eq2").exit_code == 2);
  CHECK(run_cli("eval --x 1 --y 1 --variant nosuch").exit_code == 2);
  CHECK(run_cli("eval --x 1 --y 1 --digits 10").exit_code == 2);
  CHECK(run_cli("eval --y 1").exit_code == 2);  // --x required
}

TEST_CASE("oracle digits environment override") {
  CHECK(run_cli("eval --x 1 --y 1 --check", "WOFZ_ORACLE_DIGITS=10")
            .exit_code == 2);
  CHECK(run_cli("eval --x 1 --y 1 --check", "WOFZ_ORACLE_DIGITS=40")
            .exit_code == 0);
  CHECK(run_cli("eval --x 1 --y 1 --check", "WOFZ_ORACLE_DIGITS=bogus")
            .exit_code == 2);
  // An explicit flag beats a bad environment value.
  CHECK(run_cli("eval --x 1 --y 1 --check --digits 25",
                "WOFZ_ORACLE_DIGITS=10")
            .exit_code == 0);
  // Without --check the oracle is never consulted.
  CHECK(run_cli("eval --x 1 --y 1", "WOFZ_ORACLE_DIGITS=10").exit_code == 0);
}

TEST_CASE("batch evaluates rows and flags failures") {
  spit("batch_in.csv", "x,y\n0,0\n1,1\n0,-30\n");
  const RunResult r =
      run_cli("batch --input batch_in.csv --output batch_out.csv");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("1 row(s)") != std::string::npos);
  const std::string out = slurp("batch_out.csv");
  CHECK(count_lines(out) == 4);
  CHECK(out.find("x,y,re,im\n") == 0);
  CHECK(out.find("0,0,1,0\n") != std::string::npos);
  CHECK(out.find("0,-30,nan,nan\n") != std::string::npos);

  // Round-trip: feeding the output coordinates back reproduces the values.
  std::istringstream first(out);
  std::string line;
  std::getline(first, line);
  std::string again = "x,y\n";
  while (std::getline(first, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    again += line.substr(0, c2) + "\n";
  }
  spit("batch_in2.csv", again);
  const RunResult r2 =
      run_cli("batch --input batch_in2.csv --output batch_out2.csv");
  CHECK(r2.exit_code == 0);
  CHECK(slurp("batch_out2.csv") == out);

  std::remove("batch_in.csv");
  std::remove("batch_in2.csv");
  std::remove("batch_out.csv");
  std::remove("batch_out2.csv");
}

TEST_CASE("batch edge cases") {
  spit("batch_empty.csv", "x,y\n");
  const RunResult empty =
      run_cli("batch --input batch_empty.csv --output batch_empty_out.csv");
  CHECK(empty.exit_code == 0);
  CHECK(empty.err.empty());
  CHECK(slurp("batch_empty_out.csv") == "x,y,re,im\n");
  std::remove("batch_empty.csv");
  std::remove("batch_empty_out.csv");

  spit("batch_badhdr.csv", "a,b\n1,2\n");
  CHECK(run_cli("batch --input batch_badhdr.csv --output /dev/null")
            .exit_code == 2);
  std::remove("batch_badhdr.csv");

  spit("batch_badrow.csv", "x,y\n1,2,3\n");
  CHECK(run_cli("batch --input batch_badrow.csv --output /dev/null")
            .exit_code == 2);
  std::remove("batch_badrow.csv");

  CHECK(run_cli("batch --input no_such_file.csv --output /dev/null")
            .exit_code == 2);
}

TEST_CASE("errmap writes map, summary, and is deterministic") {
  const std::string flags =
      "errmap --nx 3 --ny 2 --variant eq4 --output errmap_a.csv "
      "--summary errmap_a.json";
  const RunResult a = run_cli(flags);
  CHECK(a.exit_code == 0);
  CHECK(a.out.find("{\"max_re\": ") == 0);
  const std::string csv_a = slurp("errmap_a.csv");
  CHECK(count_lines(csv_a) == 1 + 3 * 2);
  CHECK(csv_a.find("x,y,delta_re,delta_im\n") == 0);
  const std::string json_a = slurp("errmap_a.json");
  CHECK(json_a.find("\"p999_im\":") != std::string::npos);

  const RunResult b = run_cli(
      "errmap --nx 3 --ny 2 --variant eq4 --output errmap_b.csv "
      "--summary errmap_b.json");
  CHECK(slurp("errmap_b.csv") == csv_a);
  CHECK(slurp("errmap_b.json") == json_a);
  CHECK(b.out == a.out);

  std::remove("errmap_a.csv");
  std::remove("errmap_a.json");
  std::remove("errmap_b.csv");
  std::remove("errmap_b.json");
}

TEST_CASE("errmap rejects invalid grids") {
  CHECK(run_cli("errmap --nx 0 --output /dev/null").exit_code == 2);
  CHECK(run_cli("errmap --ymin 0 --ny 2 --nx 2 --output /dev/null")
            .exit_code == 2);
  CHECK(run_cli("errmap --xmin -1 --nx 2 --ny 2 --output /dev/null")
            .exit_code == 2);
}

TEST_CASE("overlap prints the discrepancy") {
  const RunResult r = run_cli("overlap --nx 5 --ny 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("max_rel_discrepancy=") == 0);
  const double v = std::strtod(r.out.c_str() + 20, nullptr);
  CHECK(v >= 0.0);
  CHECK(v <= 1e-11);
}

TEST_CASE("voigt synthesizes a profile CSV") {
  spit("lines.csv",
       "nu0,alpha_d,gamma_l,intensity\n1000,0.01,0.001,1\n1000.5,0.02,0,2\n");
  const RunResult r = run_cli(
      "voigt --lines lines.csv --nu-start 999 --nu-end 1001 --n 5 "
      "--output profile_out.csv");
  CHECK(r.exit_code == 0);
  const std::string out = slurp("profile_out.csv");
  CHECK(count_lines(out) == 6);
  CHECK(out.find("nu,value\n999,") == 0);
  CHECK(out.find("\n1001,") != std::string::npos);
  std::remove("profile_out.csv");

  spit("lines_bad.csv", "nu0,alpha_d,gamma_l,intensity\n1000,0,0,1\n");
  CHECK(run_cli("voigt --lines lines_bad.csv --nu-start 999 --nu-end 1001 "
                "--n 5 --output /dev/null")
            .exit_code == 2);
  std::remove("lines.csv");
  std::remove("lines_bad.csv");

  CHECK(run_cli("voigt --lines no_such.csv --nu-start 0 --nu-end 1 --n 5 "
                "--output /dev/null")
            .exit_code == 2);
}

TEST_CASE("bench checksum is stable across runs") {
  const RunResult a = run_cli("bench --n 1000");
  const RunResult b = run_cli("bench --n 1000");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  const auto checksum_lines = [](const std::string& s) {
    const auto pos = s.find("checksum_serial=");
    return s.substr(pos);
  };
  REQUIRE(a.out.find("checksum_serial=") != std::string::npos);
  CHECK(checksum_lines(a.out) == checksum_lines(b.out));

  const auto grab = [](const std::string& s, const std::string& key) {
    const auto pos = s.find(key) + key.size();
    return s.substr(pos, 16);
  };
  CHECK(grab(a.out, "checksum_serial=") == grab(a.out, "checksum_parallel="));

  CHECK(run_cli("bench --n 0").exit_code == 2);
}

TEST_CASE("usage surface") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("eval --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);          // a subcommand is required
  CHECK(run_cli("nosuch").exit_code == 2);
  CHECK(run_cli("eval --x 1 --y 1 --nosuch").exit_code == 2);
}
