#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "saigo/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = saigo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json call_json(const std::vector<std::string>& args) {
  const Result r = call(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return json::parse(r.out);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("saigo_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("eval commands") {
  CHECK(call_json({"eval", "kbessel", "--v", "0", "--c", "1", "--k", "1", "--z", "0"})["value"] ==
        1.0);
  const json p = call_json({"eval", "pfq", "--upper", "2", "--lower", "", "--z", "0.5"});
  CHECK(rel(p["value"].get<double>(), 4.0) <= 1e-13);
  CHECK(p["converged"] == true);
  // 1Psi1[(1,1); (2,1); z] = (e^z - 1) / z.
  const json w = call_json({"eval", "wright", "--upper", "1:1", "--lower", "2:1", "--z", "0.7"});
  CHECK(rel(w["value"].get<double>(), std::expm1(0.7) / 0.7) <= 1e-14);
  const json g = call_json({"eval", "gamma_k", "--z", "3.5", "--k", "1.5"});
  CHECK(rel(g["value"].get<double>(), std::pow(1.5, 3.5 / 1.5 - 1) * std::tgamma(3.5 / 1.5)) <=
        1e-14);

  const Result text = call({"eval", "kbessel", "--v", "1", "--z", "2", "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("terms_used") != std::string::npos);
  const Result csv = call({"eval", "kbessel", "--v", "1", "--z", "2", "--format", "csv"});
  CHECK(csv.out.rfind("kind,value,terms_used,trunc_estimate,converged\n", 0) == 0);
}

TEST_CASE("eval errors map to exit code 2") {
  CHECK(call({"eval", "pfq", "--upper", "1,1", "--lower", "1", "--z", "1.5"}).code == 2);
  CHECK(call({"eval", "wright", "--upper", "1", "--lower", "2:1", "--z", "0.7"}).code == 2);
  CHECK(call({"eval", "kbessel", "--v", "0", "--z", "1", "--tol", "0.5"}).code == 2);
  CHECK(call({"eval", "kbessel", "--v", "0", "--z", "1", "--tol", "0"}).code == 2);
  CHECK(call({"eval", "kbessel", "--v", "0.5", "--z", "-1"}).code == 2);
  CHECK(call({"eval", "kbessel", "--z", "1"}).code == 2);
  CHECK(call({"eval", "nothing"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"eval", "gamma_k", "--z", "0", "--k", "1"}).code == 2);
  const Result help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("transform commands") {
  const json a = call_json({"transform", "--family", "saigo", "--side", "left", "--alpha", "1",
                            "--beta", "0", "--eta", "0", "--monomial", "1", "--x", "2"});
  CHECK(rel(a["quadrature"]["value"].get<double>(), 1.0) <= 1e-12);
  CHECK(rel(a["closed_form"]["value"].get<double>(), 1.0) <= 1e-15);

  const json b = call_json({"transform", "--family", "rl", "--side", "left", "--alpha", "2",
                            "--monomial", "1", "--x", "2"});
  CHECK(rel(b["quadrature"]["value"].get<double>(), 2.0) <= 1e-12);

  const json c =
      call_json({"transform", "--family", "saigo", "--side", "left", "--alpha", "0.8", "--beta",
                 "0.2", "--eta", "1.0", "--kbessel", "0.5", "1", "1", "--x", "1"});
  CHECK(c["relative_difference"].get<double>() <= 1e-5);
  CHECK(c["closed_form"]["source"] == "theorem 2.1");
  CHECK(c["closed_form"]["spec"]["series"]["kind"] == "wright");

  const json d =
      call_json({"transform", "--family", "ek", "--side", "right", "--alpha", "0.6", "--eta", "1.2",
                 "--kbessel", "0.4", "1", "1.5", "--lambda", "0.1", "--reciprocal", "--x", "2"});
  CHECK(d["closed_form"]["source"] == "theorem cor2.6");
  CHECK(d["relative_difference"].get<double>() <= 1e-5);
}

TEST_CASE("transform errors") {
  CHECK(call({"transform", "--family", "rl", "--alpha", "1", "--beta", "0.3", "--monomial", "1",
              "--x", "1"})
            .code == 2);
  CHECK(
      call({"transform", "--alpha", "1", "--monomial", "1", "--kbessel", "0", "1", "1", "--x", "1"})
          .code == 2);
  CHECK(call({"transform", "--alpha", "1", "--x", "1"}).code == 2);
  CHECK(call({"transform", "--alpha", "-1", "--monomial", "1", "--x", "1"}).code == 2);
  CHECK(
      call({"transform", "--family", "weyl", "--alpha", "1", "--monomial", "1", "--x", "1"}).code ==
      2);
  CHECK(call({"transform", "--alpha", "1", "--monomial", "-1", "--x", "1"}).code == 2);
  const Result acc = call({"transform", "--alpha", "0.8", "--beta", "0.2", "--eta", "1.0",
                           "--kbessel", "0.5", "1", "1", "--x", "1", "--tol", "1e-18"});
  CHECK(acc.code == 3);
  CHECK(acc.err.find("best estimate") != std::string::npos);
}

TEST_CASE("verify command") {
  const std::vector<std::string> args = {"verify", "--theorems", "2.1",   "--n", "5",
                                         "--seed", "7",          "--tol", "1e-5"};
  const Result a = call(args);
  CHECK(a.code == 0);
  const json j = json::parse(a.out);
  CHECK(j["records"].size() == 15);
  CHECK(j["summary"]["all_pass"] == true);
  CHECK_FALSE(j.contains("wall_time_seconds"));

  const std::vector<std::string> twice = {"verify", "--theorems", "2.1,3.1", "--n",
                                          "3",      "--seed",     "1"};
  const Result b1 = call(twice), b2 = call(twice);
  CHECK(b1.code == 0);
  CHECK(b1.out == b2.out);
  auto threaded = twice;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(call(threaded).out == b1.out);

  CHECK(call({"verify", "--theorems", "bogus"}).code == 2);
  CHECK(call({"verify", "--theorems", "2.4", "--x-points", "0.25,1"}).code == 2);
  CHECK(call({"verify", "--theorems", "2.1", "--n", "0"}).code == 2);
  CHECK(call({"verify", "--theorems", "2.1", "--format", "xml"}).code == 2);

  const Result text = call({"verify", "--theorems", "cor2.5", "--n", "2", "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("ALL PASS") != std::string::npos);
  const Result csv = call({"verify", "--theorems", "cor2.5", "--n", "2", "--format", "csv"});
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 7);

  const json timed = call_json({"verify", "--theorems", "2.1", "--n", "1", "--include-timing"});
  CHECK(timed.contains("wall_time_seconds"));
}

TEST_CASE("output files, report directory and report command") {
  const fs::path dir = scratch_dir("out");
  ::setenv(saigo::cli::kReportDirEnv, dir.c_str(), 1);
  const Result w =
      call({"verify", "--theorems", "2.4,cor3.6", "--n", "2", "--output", "sub/report.json"});
  ::unsetenv(saigo::cli::kReportDirEnv);
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  const fs::path file = dir / "sub" / "report.json";
  REQUIRE(fs::exists(file));

  const Result again = call({"report", "--input", file.string()});
  CHECK(again.code == 0);
  std::ifstream in(file);
  std::stringstream original;
  original << in.rdbuf();
  CHECK(again.out == original.str());
  const Result text = call({"report", "--input", file.string(), "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("cor3.6") != std::string::npos);

  json j = json::parse(original.str());
  j["records"][0]["pass"] = false;
  j["summary"]["passed"] = j["summary"]["passed"].get<int>() - 1;
  j["summary"]["failed"] = 1;
  j["summary"]["all_pass"] = false;
  const fs::path failing = dir / "failing.json";
  std::ofstream(failing) << j.dump();
  CHECK(call({"report", "--input", failing.string()}).code == 3);

  j["summary"]["records"] = 1;
  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << j.dump();
  CHECK(call({"report", "--input", broken.string()}).code == 2);
  std::ofstream(dir / "garbage.json") << "{not json";
  CHECK(call({"report", "--input", (dir / "garbage.json").string()}).code == 2);
  CHECK(call({"report", "--input", (dir / "missing.json").string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("config file supplies defaults; flags win") {
  const fs::path dir = scratch_dir("config");
  const fs::path cfg = dir / "verify.cfg";
  std::ofstream(cfg) << "# defaults\ntheorems = 2.1,cor2.2\nn=2\nseed=11\n"
                        "include-timing=false\nformat=json\n";
  const json a = call_json({"verify", "--config", cfg.string()});
  CHECK(a["records"].size() == 12);
  CHECK(a["seed"] == 11);
  const json b = call_json({"verify", "--config", cfg.string(), "--n", "1"});
  CHECK(b["records"].size() == 6);

  const fs::path tcfg = dir / "transform.cfg";
  std::ofstream(tcfg) << "alpha=0.8\nbeta=0.2\neta=1.0\nkbessel=0.5 1 1\nx=1\n";
  const json t = call_json({"transform", "--config", tcfg.string()});
  CHECK(t["relative_difference"].get<double>() <= 1e-5);

  std::ofstream(dir / "bad.cfg") << "no equals sign\n";
  CHECK(call({"verify", "--config", (dir / "bad.cfg").string()}).code == 2);
  std::ofstream(dir / "unknown.cfg") << "theorems=2.1\nbogus-key=1\n";
  CHECK(call({"verify", "--config", (dir / "unknown.cfg").string()}).code == 2);
  CHECK(call({"verify", "--config", (dir / "none.cfg").string()}).code == 2);
  fs::remove_all(dir);
}
