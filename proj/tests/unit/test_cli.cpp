#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/app.hpp"

namespace fs = std::filesystem;
using ldpustat::cli::run;

namespace {

const std::string kData = LDPUSTAT_TEST_DATA;

struct Outcome {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ldpustat_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("ustat eval on the three-site worked example") {
  const auto r = invoke({"ustat", "eval", "--matrix", kData + "/complete3.csv", "--data", kData + "/worked_data.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["u_n"].get<double>() == doctest::Approx(-2.0 / 9.0).epsilon(1e-11));
  CHECK(r.json()["v_n"].get<double>() == doctest::Approx(-2.0 / 9.0).epsilon(1e-11));
  const auto tree = invoke({"ustat", "eval", "--matrix", kData + "/complete3.csv", "--data",
                            kData + "/worked_data.csv", "--tree"});
  CHECK(tree.json()["v_n"].get<double>() == doctest::Approx(-2.0 / 9.0).epsilon(1e-11));
  const auto field = invoke({"ustat", "field", "--matrix", kData + "/complete3.csv", "--data",
                             kData + "/worked_data.csv", "--site", "2"});
  REQUIRE(field.code == 0);
  CHECK(field.json()["field"][1].get<double>() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("kernel subcommands") {
  const auto zero = invoke({"kernel", "cutnorm", "--matrix", kData + "/zero.csv"});
  REQUIRE(zero.code == 0);
  CHECK(zero.json()["cut_norm"].get<double>() == 0.0);

  const auto assumptions = invoke({"kernel", "assumptions", "--wn", kData + "/qn.csv", "--w", kData + "/w.csv",
                                   "--motif", kData + "/k3.txt", "--q", "2"});
  REQUIRE(assumptions.code == 0);
  const auto flags = assumptions.json()["report"]["flags"];
  CHECK(flags["holder_pq"].get<bool>());
  CHECK(flags.contains("degree_sup"));

  const auto norms = invoke({"kernel", "norms", "--w", kData + "/w.csv", "--r", "1,2,inf"});
  REQUIRE(norms.code == 0);
  CHECK(norms.json()["norms"]["inf"].get<double>() == doctest::Approx(1.2));

  const auto dist = invoke({"kernel", "cutdist", "--matrix", kData + "/qn.csv", "--w", kData + "/w.csv"});
  REQUIRE(dist.code == 0);
  CHECK(dist.json()["exact"].get<bool>());

  const auto weak = invoke({"kernel", "weakcut", "--matrix", kData + "/qn.csv", "--matrix2", kData + "/qn.csv"});
  REQUIRE(weak.code == 0);
  CHECK(weak.json()["weak_cut_upper_bound"].get<double>() == 0.0);

  const auto deg = invoke({"kernel", "degrees", "--w", kData + "/w.csv"});
  REQUIRE(deg.code == 0);
  CHECK(deg.json()["values"].size() == 2);
}

TEST_CASE("input errors exit with code 2") {
  CHECK(invoke({"kernel", "cutnorm", "--matrix", kData + "/missing.csv"}).code == 2);
  const auto bad = invoke({"kernel", "cutnorm", "--matrix", kData + "/malformed.csv"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(invoke({"kernel", "cutnorm", "--matrix", kData + "/ragged.csv"}).code == 2);
  CHECK(invoke({"solve", "zlimit"}).code == 2);
  CHECK(invoke({"solve", "zlimit", "--theta", "abc"}).code == 2);
  CHECK(invoke({"solve", "zlimit", "--theta", "1", "--family", "xy"}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("solve subcommands") {
  const auto potts = invoke({"solve", "zlimit", "--family", "potts", "--c", "3", "--theta", "0"});
  REQUIRE(potts.code == 0);
  CHECK(potts.json()["z_value"].get<double>() == 0.0);

  const auto cw = invoke({"solve", "zlimit", "--theta", "1"});
  REQUIRE(cw.code == 0);
  CHECK(cw.json()["z_value"].get<double>() == doctest::Approx(0.326523887427).epsilon(1e-11));
  CHECK(cw.json()["optimizers"].size() == 2);

  const auto dir = scratch("rate");
  const auto rate = invoke({"solve", "rate", "--grid", "0:1.5:4", "--out", dir.string()});
  REQUIRE(rate.code == 0);
  CHECK(slurp(dir / "rate.csv").rfind("theta,t,rate,z,flagged\n", 0) == 0);

  const auto con = invoke({"solve", "constrained", "--t", "0.25", "--out", dir.string()});
  REQUIRE(con.code == 0);
  CHECK(con.json()["rate"].get<double>() == doctest::Approx(0.130812035941).epsilon(1e-9));
  CHECK(con.json()["witness"].get<std::string>() == "witness.csv");
  CHECK(fs::exists(dir / "witness.csv"));
}

TEST_CASE("gibbs subcommands") {
  const auto exact = invoke({"gibbs", "exact", "--family", "ising", "--n", "10", "--theta", "1", "--no-twins"});
  REQUIRE(exact.code == 0);
  const auto complete = invoke({"gibbs", "complete", "--family", "ising", "--n", "10", "--theta", "1"});
  REQUIRE(complete.code == 0);
  CHECK(exact.json()["z_n"].get<double>() == doctest::Approx(complete.json()["z_n"].get<double>()).epsilon(1e-11));

  const auto matrix = invoke({"gibbs", "exact", "--matrix", kData + "/complete3.csv", "--theta", "0"});
  REQUIRE(matrix.code == 0);
  CHECK(matrix.json()["z_n"].get<double>() == 0.0);

  const auto tail = invoke({"gibbs", "tail", "--family", "ising", "--t", "0.25", "--n-list", "4,8"});
  REQUIRE(tail.code == 0);
  CHECK(tail.json()["points"].size() == 2);
}

TEST_CASE("chain output is byte-identical across runs with the same seed") {
  const auto a = scratch("chain_a"), b = scratch("chain_b");
  const std::vector<std::string> base = {"gibbs", "chain", "--family", "potts", "--c", "3", "--n", "12", "--theta",
                                         "1", "--sweeps", "200", "--burnin", "10", "--blocks", "3", "--seed", "5"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  const std::string csv = slurp(a / "chain.csv");
  CHECK(csv == slurp(b / "chain.csv"));
  CHECK(csv.rfind("sweep,u_n,block_mean_1,block_mean_2,block_mean_3,color_frac_1", 0) == 0);
  CHECK(slurp(a / "chain_meta.json") == slurp(b / "chain_meta.json"));
}

TEST_CASE("verify reports pass and fail through the exit code") {
  const auto dir = scratch("verify");
  const auto ok = invoke({"verify", "legendre-consistency", "--grid", "0.6:1.2:6", "--out", dir.string()});
  CHECK(ok.code == 0);
  CHECK(ok.json()["passed"].get<bool>());
  CHECK(fs::exists(dir / "verify_summary.json"));
  CHECK(fs::exists(dir / "legendre.csv"));
  // an impossible bound must fail the check, not the program
  const auto strict = invoke({"verify", "ldp-tail", "--n-list", "8,12", "--tolerance", "1e-9"});
  CHECK(strict.code == 1);
  CHECK_FALSE(strict.json()["passed"].get<bool>());
}

TEST_CASE("configuration file supplies defaults and flags win") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "theta = 0.4\nfamily = \"ising\"\n";
  }
  const auto from_file = invoke({"solve", "zlimit", "--config", (dir / "run.toml").string()});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.json()["theta"].get<double>() == 0.4);
  const auto flag_wins = invoke({"solve", "zlimit", "--config", (dir / "run.toml").string(), "--theta", "1"});
  REQUIRE(flag_wins.code == 0);
  CHECK(flag_wins.json()["theta"].get<double>() == 1.0);
}
