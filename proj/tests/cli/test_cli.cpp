#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  return fs::temp_directory_path() / ("growthlab_cli_" + std::to_string(::getpid()) + "_" + name);
}

// Runs the CLI through the shell; arguments are already quoted.
Run cli(const std::string& args) {
  const fs::path err = scratch("stderr");
  const std::string cmd = std::string("\"") + GROWTHLAB_CLI + "\" " + args + " 2>\"" +
                          err.string() + "\"";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    r.out.append(buf, n);
  }
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  fs::remove(err);
  return r;
}

std::string golden(const std::string& name) { return slurp(fs::path(GOLDEN_DIR) / name); }
std::string data(const std::string& name) {
  return "\"" + (fs::path(SOURCE_DIR) / name).string() + "\"";
}

const std::string kExp = "\"iter(m=1,n=0,a=1,c=1)\"";

}  // namespace

TEST_CASE("verify on the shipped config reproduces the golden report") {
  const auto r = cli("verify --config " + data("data/standard.cfg"));
  CHECK(r.code == 0);
  CHECK(r.out == golden("verify_standard.json"));
  CHECK(cli("verify --config " + data("data/standard.cfg") + " --format csv").out ==
        golden("verify_standard.csv"));
  CHECK(cli("verify --config " + data("data/standard.cfg") + " --format table").out ==
        golden("verify_standard.txt"));
}

TEST_CASE("verify without a config runs the standard catalog") {
  const auto r = cli("verify");
  CHECK(r.code == 0);
  CHECK(r.out == golden("verify_standard.json"));
}

TEST_CASE("catalog goldens list the eight pairs") {
  const auto r = cli("catalog --format csv");
  CHECK(r.code == 0);
  CHECK(r.out == golden("catalog.csv"));
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 9);
  CHECK(cli("catalog").out == golden("catalog.json"));
  CHECK(cli("catalog --format table").out == golden("catalog.txt"));
}

TEST_CASE("nevanlinna, indicators and transition goldens") {
  const auto nev = cli("nevanlinna --model \"rat(zeros=[];poles=[1,3];scale=1)\" --r 2,6,10 --format csv");
  CHECK(nev.code == 0);
  CHECK(nev.out == golden("nevanlinna_rational.csv"));
  CHECK(nev.out.find("6,0,2.48490664978800") != std::string::npos);

  const auto ind = cli("indicators --alpha " + kExp +
                       " --beta \"iter(m=1,n=0,a=2,c=3)\" --p 1 --q 1 --format json");
  CHECK(ind.code == 0);
  CHECK(ind.out == golden("indicators_regular.json"));

  const auto tr = cli("integral transition --alpha exp --beta \"iter(m=1,n=0,a=3,c=1)\" --p 2 "
                      "--q 2 --A 1 --krange 1:6 --tol 0.05 --format json");
  CHECK(tr.code == 0);
  CHECK(tr.out == golden("transition_poly.json"));
}

TEST_CASE("derived max-modulus indicators") {
  const auto r = cli("indicators --alpha " + kExp +
                     " --beta \"maxmod(exppow(c=1,n=2))\" --p 1 --q 1 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.find("rho,2,") != std::string::npos);
  CHECK(r.out.find("sigma,1,") != std::string::npos);
}

TEST_CASE("integral classify verdicts") {
  const std::string base = "integral classify --alpha exp --beta \"iter(m=1,n=0,a=3,c=1)\" ";
  const auto conv = cli(base + "--k 3.5");
  CHECK(conv.code == 0);
  CHECK(conv.out.find("\"Converges\"") != std::string::npos);
  const auto edge = cli(base + "--k 3.0");
  CHECK(edge.code == 0);
  CHECK(edge.out.find("\"Indeterminate\"") != std::string::npos);
  const auto csv = cli(base + "--k 2 --format csv");
  CHECK(csv.out.rfind("k,verdict,decay_slope,tail_bound\n2,Diverges,", 0) == 0);
}

TEST_CASE("exit 1: a ground-truth gate fails") {
  const auto r = cli("verify --config " + data("tests/data/failing.cfg"));
  CHECK(r.code == 1);
  CHECK(r.out.find("\"status\": \"Fail\"") != std::string::npos);
  const auto broken = cli("verify --config " + data("tests/data/broken.cfg") + " --format csv");
  CHECK(broken.code == 1);
  CHECK(broken.out.find("broken,") != std::string::npos);
  CHECK(broken.out.find("Errored") != std::string::npos);
  // Literals contain commas, so CSV quotes them.
  CHECK(broken.out.find("\nidentity,\"iter(m=1,n=0,a=1,c=1)\",\"iter(m=1,n=0,a=1,c=1)\",1,1,Pass,") !=
        std::string::npos);
}

TEST_CASE("exit 2: domain and numeric errors") {
  const auto bracket = cli("integral transition --alpha exp --beta \"iter(m=1,n=0,a=3,c=1)\" "
                           "--krange 4:6");
  CHECK(bracket.code == 2);
  CHECK(bracket.out.empty());
  CHECK(bracket.err.find("BadBracket") != std::string::npos);
  const auto circle = cli("nevanlinna --model \"rat(zeros=[];poles=[1,3];scale=1)\" --r 3");
  CHECK(circle.code == 2);
  CHECK(circle.out.empty());
  // Tabulated scales only live in double range; the default grid leaves it.
  const auto tab = cli("indicators --alpha exp --beta \"tab(1:3,2:20,3:100,10:1e5)\"");
  CHECK(tab.code == 2);
  CHECK(tab.err.find("NonLevelZero") != std::string::npos);
  CHECK(cli("indicators --alpha \"iter(m=0,n=0,a=1,c=1)\" --beta \"tab(1:3,2:20,3:100,10:1e5)\" "
            "--grid 0:2:0.5:32").code == 0);
}

TEST_CASE("exit 3: parse and usage errors") {
  const auto bad = cli("indicators --alpha " + kExp + " --beta \"iter(m=1,n=0\"");
  CHECK(bad.code == 3);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("ParseError") != std::string::npos);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);
  CHECK(cli("").code == 3);
  CHECK(cli("catalog --format xml").code == 3);
  CHECK(cli("catalog --no-such-flag").code == 3);
  CHECK(cli("integral classify --alpha exp --beta exp").code == 3);
  CHECK(cli("integral transition --alpha exp --beta exp --krange 1").code == 3);
  CHECK(cli("nevanlinna --model \"poly(1,\" --r 1").code == 3);
  CHECK(cli("verify --config /no/such/file.cfg").code == 3);
  const auto cfg = cli("verify --config " + data("tests/data/indicators.cfg"));
  CHECK(cfg.code == 3);
  CHECK(cfg.out.empty());
}

TEST_CASE("help exits 0") {
  const auto r = cli("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("config files feed flags, and flags win") {
  const auto r = cli("indicators --config " + data("tests/data/indicators.cfg"));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("indicator,value", 0) == 0);
  const auto json = cli("indicators --config " + data("tests/data/indicators.cfg") +
                        " --format json");
  CHECK(json.out == golden("indicators_regular.json"));
  CHECK(cli("catalog --config " + data("tests/data/indicators.cfg")).code == 3);
}

TEST_CASE("--out and --stamp leave the checked output untouched") {
  const fs::path out = scratch("report.json");
  const auto r = cli("catalog --out \"" + out.string() + "\" --stamp");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(out) == golden("catalog.json"));
  CHECK(r.err.rfind("# generated ", 0) == 0);
  fs::remove(out);
}

TEST_CASE("CSV and JSON carry the same digits") {
  const auto json = golden("verify_standard.json");
  const auto csv = golden("verify_standard.csv");
  // Every CSV numeric field of the sinlog row appears verbatim in the JSON.
  const auto start = csv.find("\nsinlog,");
  REQUIRE(start != std::string::npos);
  const std::string line = csv.substr(start + 1, csv.find('\n', start + 1) - start - 1);
  std::stringstream fields(line);
  std::string field;
  int checked = 0;
  while (std::getline(fields, field, ',')) {
    if (!field.empty() && (std::isdigit(static_cast<unsigned char>(field[0])) || field[0] == '-') &&
        field.find('.') != std::string::npos) {
      CHECK_MESSAGE(json.find(field) != std::string::npos, field);
      ++checked;
    }
  }
  CHECK(checked >= 10);
}
