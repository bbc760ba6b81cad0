#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ckn/cli.hpp"
#include "ckn/csv.hpp"
#include "doctest.h"

using namespace ckn;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ckn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  return v;
}

// Data rows (non-comment lines after the column header).
std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> r;
  bool header = false;
  for (const auto& line : lines(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    r.push_back(split(line, ','));
  }
  return r;
}

// Arguments recorded in the `# command:` header line.
std::vector<std::string> recorded_command(const std::string& text) {
  for (const auto& line : lines(text)) {
    const std::string tag = "# command: ckn ";
    if (line.rfind(tag, 0) == 0) {
      std::vector<std::string> args;
      std::istringstream is(line.substr(tag.size()));
      for (std::string tok; is >> tok;) args.push_back(tok);
      return args;
    }
  }
  FAIL("no command header");
  return {};
}

}  // namespace

TEST_CASE("every output starts with the version and command header") {
  const auto r = invoke({"curves", "--N", "4", "--a-points", "3"});
  REQUIRE(r.code == cli::kSuccess);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() > 2);
  CHECK(ls[0] == std::string("# ckn ") + CKN_VERSION);
  CHECK(ls[1].rfind("# command: ckn curves --N 4", 0) == 0);
}

TEST_CASE("headers reproduce their output bit for bit") {
  const std::vector<std::vector<std::string>> commands{
      {"curves", "--N", "5", "--lambda", "-0.3", "--a-min", "-1", "--a-max", "0.5", "--a-points", "4", "--j", "1,3"},
      {"spectrum", "--N", "5", "--a", "0.4", "--b", "0.6", "--lambda", "-1", "--n", "2000", "--L", "30"},
      {"groundstate", "--N", "4", "--a", "0.1", "--b", "0.3", "--lambda", "0.2", "--n", "500"},
      {"gamma", "--N", "4", "--b", "0.3", "--k", "rational:0,1", "--mu-min", "0.01", "--mu-max", "100", "--mu-points", "7"},
      {"regions", "--N", "4", "--a-points", "3", "--b-points", "3", "--n", "1500"},
      {"reduce", "--N", "4", "--b", "0.3", "--n", "2000", "--L", "30", "--eps", "0.01,0.005", "--mu-points", "3",
       "--mu-min", "0.5", "--mu-max", "2"},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    const auto first = invoke(args);
    REQUIRE(first.code == cli::kSuccess);
    const auto again = invoke(recorded_command(first.out));
    CHECK(again.code == cli::kSuccess);
    CHECK(again.out == first.out);
  }
}

TEST_CASE("thread count does not change the output") {
  const std::vector<std::string> base{"reduce", "--N", "4", "--b", "0.3", "--n", "2000", "--L", "30",
                                      "--mu-points", "5", "--mu-min", "0.2", "--mu-max", "5"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  CHECK(invoke(one).out == invoke(four).out);
}

TEST_CASE("curves") {
  const auto r = invoke({"curves", "--N", "6", "--a-min", "0", "--a-max", "0", "--a-points", "1"});
  REQUIRE(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 5);
  CHECK(std::fabs(std::stod(data[0][2])) <= 1e-15);
  for (std::size_t i = 1; i < data.size(); ++i) CHECK(std::stod(data[i][2]) < std::stod(data[i - 1][2]));
  for (const auto& row : data) {
    CHECK(std::stod(row[4]) == 0.0);
    CHECK(std::stod(row[5]) == 1.0);
  }
  // close to a = (N-2)/2 with lambda < 0 the curve stays finite
  const auto edge = invoke({"curves", "--N", "4", "--lambda", "-1", "--a-min", "0.999", "--a-max", "0.999", "--a-points", "1"});
  REQUIRE(edge.code == 0);
  for (const auto& row : rows(edge.out)) CHECK(std::isfinite(std::stod(row[2])));
  CHECK(invoke({"curves", "--j", "0"}).code == cli::kDomainError);
  CHECK(invoke({"curves", "--a-min", "1", "--a-max", "0"}).code == cli::kDomainError);
}

TEST_CASE("regions classify the two sides of the curve") {
  const auto r = invoke({"regions", "--N", "4", "--a-min", "-1", "--a-max", "0.5", "--a-points", "2", "--b-points", "9"});
  REQUIRE(r.code == 0);
  bool saw_break = false, saw_keep = false;
  for (const auto& row : rows(r.out)) {
    const double a = std::stod(row[0]), b = std::stod(row[1]);
    if (a == -1 && std::fabs(b + 0.9) < 1e-12) saw_break = row[4] == "breaks";
    if (a == 0.5 && std::fabs(b - 0.9) < 1e-12) saw_keep = row[4] != "breaks";
    CHECK(row[9] == "true");
  }
  CHECK(saw_break);
  CHECK(saw_keep);
}

TEST_CASE("spectrum of the standard tuple") {
  const auto r = invoke({"spectrum", "--N", "4", "--a", "0", "--b", "0", "--lambda", "0"});
  CHECK(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 2);
  CHECK(std::stod(data[0][1]) == -4.0);
  CHECK(std::stod(data[1][1]) == -1.0);
  CHECK(std::fabs(std::stod(data[0][2]) + 4.0) <= 1e-6);
  CHECK(std::fabs(std::stod(data[1][2]) + 1.0) <= 1e-6);
  CHECK(r.out.find("nondegenerate=false") != std::string::npos);
}

TEST_CASE("groundstate certificate") {
  const auto r = invoke({"groundstate", "--N", "5", "--a", "0.4", "--b", "0.6", "--lambda", "-1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("convention=t=ln(r)") != std::string::npos);
}

TEST_CASE("gamma reports the metadata") {
  const auto r = invoke({"gamma", "--N", "4", "--k", "rational:0,1", "--mu-points", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("gamma2_0=") != std::string::npos);
  CHECK(rows(r.out).size() == 3);
}

TEST_CASE("solve finds the certified critical point") {
  const auto r = invoke({"solve", "--N", "4", "--a", "0", "--b", "0.3", "--lambda", "0", "--k", "gaussian-bump:1,0,1",
                         "--eps", "0.01", "--mu-min", "0.05", "--mu-max", "20", "--mu-points", "25"});
  CHECK(r.code == cli::kSuccess);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 1);
  CHECK(std::fabs(std::log(std::stod(data[0][1]))) <= 1e-6);
  CHECK(std::stod(data[0][3]) <= 1e-6);
  CHECK(data[0][6] == "true");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"spectrum", "--N", "4", "--b", "1.5"}).code == cli::kDomainError);
  CHECK(invoke({"spectrum", "--N", "2"}).code == cli::kDomainError);
  CHECK(invoke({"spectrum", "--bogus", "1"}).code == cli::kDomainError);
  CHECK(invoke({}).code == cli::kDomainError);
  CHECK(invoke({"--help"}).code == cli::kSuccess);
  CHECK(invoke({"--version"}).code == cli::kSuccess);
  // degenerate tuple: the reduction refuses
  const auto deg = invoke({"reduce", "--N", "4", "--mu-points", "3"});
  CHECK(deg.code == cli::kDomainError);
  CHECK(deg.err.find("degenerate") != std::string::npos);
  CHECK(invoke({"reduce", "--N", "4", "--b", "0.3", "--k", "nope:1"}).code == cli::kDomainError);
  CHECK(invoke({"reduce", "--N", "4", "--b", "0.3", "--eps", "0.5", "--mu-points", "3"}).code == cli::kDomainError);
  // an impossibly tight spectrum check on a coarse grid fails its certificate
  CHECK(invoke({"spectrum", "--N", "4", "--n", "100", "--L", "5"}).code == cli::kCertificateFailure);
}

TEST_CASE("--out writes the file instead of stdout") {
  const auto path = std::filesystem::temp_directory_path() / "ckn_test_curves.csv";
  const auto r = invoke({"curves", "--N", "4", "--a-points", "2", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == invoke({"curves", "--N", "4", "--a-points", "2"}).out);
  std::filesystem::remove(path);
  CHECK(invoke({"curves", "--out", "/nonexistent/dir/x.csv"}).code == cli::kDomainError);
}
