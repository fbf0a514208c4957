#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bifrac/frft.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
  const char* p = std::getenv("BIFRAC_CLI");
  REQUIRE_MESSAGE(p != nullptr, "BIFRAC_CLI must point at the binary");
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t count_lines(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if (c == '\n')
      ++n;
  return n;
}

const std::string kTmp = "/tmp/bifrac_cli_test";

} // namespace

TEST_CASE("kernel command tabulates the quarter-turn kernel") {
  std::system(("mkdir -p " + kTmp).c_str());
  const std::string out = kTmp + "/kernel.csv";
  REQUIRE(run("kernel --theta 1.5707963267948966 --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("# bifrac config-hash=", 0) == 0);
  CHECK(text.find("x,y,re,im\n") != std::string::npos);
  // spot value at x=y=1: exp(i)/sqrt(2 pi)
  std::istringstream lines(text);
  std::string line;
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.rfind("1,1,", 0) == 0) {
      double re = 0.0, im = 0.0;
      REQUIRE(std::sscanf(line.c_str(), "1,1,%lf,%lf", &re, &im) == 2);
      CHECK(std::abs(re - std::cos(1.0) / std::sqrt(2.0 * bifrac::kPi)) < 1e-12);
      CHECK(std::abs(im - std::sin(1.0) / std::sqrt(2.0 * bifrac::kPi)) < 1e-12);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("kernel refuses delta-limit angles with exit code 2") {
  CHECK(run("kernel --theta 0") == 2);
}

TEST_CASE("afunction emits a full deterministic table") {
  const std::string cfg = kTmp + "/af.cfg";
  {
    std::ofstream c(cfg);
    c << "state = vacuum\nfock_dim = 16\nwindow = 8\npoints = 33\n"
      << "theta1 = 1.0471975511965976\ntheta2 = 0.62831853071795862\n";
  }
  const std::string out1 = kTmp + "/af1.csv";
  const std::string out2 = kTmp + "/af2.csv";
  REQUIRE(run("afunction --config " + cfg + " --out " + out1) == 0);
  REQUIRE(run("afunction --config " + cfg + " --out " + out2) == 0);
  const std::string t1 = slurp(out1);
  CHECK(t1 == slurp(out2)); // byte-identical reruns
  CHECK(count_lines(t1) == 2 + 33 * 33);
  CHECK(t1.find("alpha,beta,re,im\n") != std::string::npos);
}

TEST_CASE("moments of the vacuum at the wigner pair") {
  const std::string out = kTmp + "/mom.csv";
  REQUIRE(run("moments --state vacuum --fock-dim 16 --theta1 "
              "1.5707963267948966 --theta2 1.5707963267948966 --out " +
              out) == 0);
  const std::string text = slurp(out);
  double ma = 0, mb = 0, da = 0, db = 0, pur = 0;
  const size_t header = text.find("mean_alpha");
  REQUIRE(header != std::string::npos);
  const size_t eol = text.find('\n', header);
  REQUIRE(std::sscanf(text.c_str() + eol + 1, "%lf,%lf,%lf,%lf,%lf", &ma, &mb,
                      &da, &db, &pur) == 5);
  CHECK(std::abs(da - 1.0 / std::sqrt(2.0)) < 1e-5);
  CHECK(std::abs(db - 1.0 / std::sqrt(2.0)) < 1e-5);
  CHECK(std::abs(pur - 1.0) < 1e-10);
}

TEST_CASE("ufrac dumps the displacement at zero angles") {
  const std::string out = kTmp + "/u.csv";
  REQUIRE(run("ufrac --fock-dim 8 --theta1 0 --theta2 0 --alpha 0 --beta 0 "
              "--out " +
              out) == 0);
  const std::string text = slurp(out);
  CHECK(count_lines(text) == 2 + 8 * 8);
  CHECK(text.find("m,n,re,im\n") != std::string::npos);
  CHECK(text.find("0,0,1,") != std::string::npos); // identity at the origin
}

TEST_CASE("fig3 table is symmetric in the mixing weight") {
  const std::string out = kTmp + "/fig3.csv";
  REQUIRE(run("fig3 --fock-dim 24 --resolution 3 --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("p,delta_alpha,delta_beta,product,masked\n") !=
        std::string::npos);
  std::istringstream lines(text);
  std::string line;
  std::vector<double> products;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'p')
      continue;
    double p, da, db, prod;
    int masked;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &p, &da, &db,
                        &prod, &masked) == 5);
    products.push_back(prod);
  }
  REQUIRE(products.size() == 3);
  CHECK(std::abs(products.front() - products.back()) < 1e-6);
}

TEST_CASE("verify runs a quick suite and reports json") {
  const std::string out = kTmp + "/verify.json";
  const int code =
      run("verify --suite frft --quick --fock-dim 16 --out " + out);
  CHECK(code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"suite\": \"frft\"") != std::string::npos);
  CHECK(text.find("\"pass\": true") != std::string::npos);
  CHECK(text.find("additivity_random_pairs") != std::string::npos);
}

TEST_CASE("verify flags an undersized truncation with exit code 1") {
  // fock_dim 8 trips the cutoff guards in the state-heavy suites
  const std::string out = kTmp + "/verify8.json";
  const int code =
      run("verify --suite quasiprob --quick --fock-dim 8 --out " + out);
  CHECK(code == 1);
  const std::string text = slurp(out);
  CHECK(text.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected with exit code 2") {
  const std::string cfg = kTmp + "/bad.cfg";
  {
    std::ofstream c(cfg);
    c << "no_such_key = 1\n";
  }
  CHECK(run("moments --config " + cfg) == 2);
}
