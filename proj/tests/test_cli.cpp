#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

#include "besum/factoradic.hpp"
#include "cli.hpp"

using namespace besum;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "besum");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "besum_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("log schedule") {
  CHECK(cli::log_schedule(1) == std::vector<std::uint64_t>{1});
  CHECK(cli::log_schedule(100) == std::vector<std::uint64_t>{1, 2, 5, 10, 20, 50, 100});
  CHECK(cli::log_schedule(7) == std::vector<std::uint64_t>{1, 2, 5, 7});
}

TEST_CASE("sum emits a provenance header and the row schema") {
  const auto r = invoke({"sum", "--f", "n2", "--alpha", "1/2", "--N", "4", "--schedule", "every:1"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.rfind("# besum ", 0) == 0);
  CHECK(r.out.find("# config_hash=") != std::string::npos);
  CHECK(r.out.find("empirical_sup") != std::string::npos);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "alpha_num,alpha_den,N,re,im,modulus,sup_modulus,sup_at");
  CHECK(lines[4] == "1,2,4,2,0,2,2,2");
}

TEST_CASE("identical configs give identical bytes") {
  const std::vector<std::string> args{"sup-sweep", "--f", "n2", "--qmax", "7", "--N", "500"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  CHECK(invoke(threaded).out == a.out);
  CHECK(data_lines(a.out).size() == 1 + 17);
  for (const auto& line : data_lines(a.out)) CHECK(line.find("false") == std::string::npos);
}

TEST_CASE("dry run validates without computing") {
  const auto r = invoke({"sum", "--f", "n2", "--alpha", "1/3", "--N", "1000000000", "--dry-run"});
  REQUIRE(r.code == 0);
  const auto plan = Json::parse(r.out);
  CHECK(plan["dry_run"] == true);
  CHECK(plan["config"]["N"] == 1000000000);
  CHECK(plan["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("config errors exit with code 2 and name the field") {
  auto r = invoke({"sum", "--f", "n9", "--alpha", "1/3", "--N", "10"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("--f") != std::string::npos);
  CHECK(r.err.find("n2") != std::string::npos);
  r = invoke({"sum", "--alpha", "3/2", "--N", "10"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("--alpha") != std::string::npos);
  r = invoke({"sum", "--N", "10"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"mass-check", "--s", "2"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"nonsense"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"membership", "--alpha-digits", "/nonexistent/file"});
  CHECK(r.code == cli::kExitConfig);
  r = invoke({"mass-check", "--format", "csv"});
  CHECK(r.code == cli::kExitConfig);
}

TEST_CASE("resource and depth failures have their own exit codes") {
  auto r = invoke({"construct", "af", "--f", "n2", "--nmax", "5000"});
  CHECK(r.code == cli::kExitResource);

  const auto digits = scratch("shallow.fac");
  {
    std::ofstream file(digits);
    write_digit_file(file, FactoradicReal(std::vector<std::uint32_t>(20, 1), TailPolicy::kUnknown));
  }
  r = invoke({"sum", "--f", "n2", "--alpha-digits", digits.string(), "--N", "30"});
  CHECK(r.code == cli::kExitDepth);
}

TEST_CASE("bit budget can be lowered from the environment") {
  setenv("BESUM_BIT_BUDGET", "20", 1);
  const auto r = invoke({"construct", "af", "--f", "n2", "--nmax", "4"});
  unsetenv("BESUM_BIT_BUDGET");
  CHECK(r.code == cli::kExitResource);
  CHECK(invoke({"construct", "af", "--f", "n2", "--nmax", "4"}).code == 0);
}

TEST_CASE("factoradic encode writes a digit file decode can read") {
  const auto path = scratch("third.fac");
  auto r = invoke({"factoradic", "encode", "--x", "1/3", "--depth", "6", "--out", path.string()});
  REQUIRE(r.code == 0);
  const FactoradicReal f = read_digit_file(path.string());
  CHECK(f.depth() == 6);
  r = invoke({"factoradic", "decode", "--digits", path.string()});
  REQUIRE(r.code == 0);
  const auto doc = Json::parse(r.out);
  CHECK(doc["result"]["lower"] == "1/3");
  CHECK(doc["result"]["tail"] == "ZERO");
}

TEST_CASE("factoradic sum, membership and samples") {
  const auto dir = scratch("samples");
  std::filesystem::remove_all(dir);
  auto r = invoke({"sample-e", "--f", "n2", "--a", "n2", "--depth", "60", "--seed", "3", "--count", "2",
                   "--digits-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(data_lines(r.out).size() == 3);
  const auto sample = (dir / "sample_0.fac").string();
  r = invoke({"membership", "--f", "n2", "--a", "n2", "--alpha-digits", sample});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["membership"] == "in");
  r = invoke({"sum", "--f", "n2", "--alpha-digits", sample, "--N", "7", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = Json::parse(r.out);
  CHECK(doc["result"]["columns"][0] == "alpha_digits_file");
  CHECK(doc["result"]["columns"].back() == "phase_error");
  CHECK(doc["provenance"]["seed"] == 1);
}

TEST_CASE("report verbs emit their JSON schema") {
  auto r = invoke({"mass-check", "--f", "n2", "--a", "n2", "--s", "0.5", "--i0", "3", "--imax", "6", "--samples", "8"});
  REQUIRE(r.code == 0);
  auto doc = Json::parse(r.out)["result"];
  for (const char* key : {"s", "i0", "i_max", "a_constant", "violations"}) CHECK(doc.contains(key));
  CHECK(doc["violations"].empty());

  r = invoke({"dimension", "--f", "n2", "--a", "n2", "--jmax", "10"});
  REQUIRE(r.code == 0);
  doc = Json::parse(r.out)["result"];
  CHECK(doc["series"].size() == 9);

  r = invoke({"cond-ii", "--f", "n2", "--eps", "0.5", "--imax", "100", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["attained_at"] == 4);

  r = invoke({"bound", "--f", "n2", "--a", "n2", "--alpha", "1/3", "--N", "100"});
  REQUIRE(r.code == 0);
  for (const auto& line : data_lines(r.out)) CHECK(line.find("false") == std::string::npos);

  r = invoke({"qn-demo", "--q", "3", "--alpha", "1/3", "--N", "300", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["empirical_sup"] == 100.0);
}

TEST_CASE("periodicity and sector verbs read coefficient streams") {
  const auto path = scratch("block.coeffs");
  {
    std::ofstream file(path);
    file << "coeffs v1\nalphabet 0 1\n0";
    for (int k = 0; k < 400; ++k) file << " 1 0 0";
    file << "\n";
  }
  auto r = invoke({"periodicity", "--coeffs", path.string(), "--max-period", "10", "--max-preperiod", "10"});
  REQUIRE(r.code == 0);
  const auto doc = Json::parse(r.out)["result"];
  CHECK(doc["period"]["K"] == 0);
  CHECK(doc["period"]["q"] == 3);
  CHECK(doc["collapse"] == false);

  r = invoke({"sector-eval", "--coeffs", path.string(), "--theta1", "0.3", "--theta2", "0.4", "--radii", "0.5",
              "0.9", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["argmax_radius"] == 0.9);

  r = invoke({"periodicity", "--coeffs", path.string(), "--max-period", "1000"});
  CHECK(r.code == cli::kExitDepth);
}

TEST_CASE("config files feed option values") {
  const auto path = scratch("run.toml");
  {
    std::ofstream file(path);
    file << "[construct]\nnmax = 3\nf = \"id\"\n";
  }
  const auto r = invoke({"--config", path.string(), "construct", "af"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[3] == "3,9");
}

TEST_CASE("the installed binary maps exit codes") {
  const std::string bin = BESUM_CLI_PATH;
  auto status = std::system((bin + " --version > /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 0);
  status = std::system((bin + " sum --alpha 0/1 --N 3 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
