#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "subprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using testutil::run_command;

namespace {

std::string cli() { return std::string(LPMLAB_CLI_PATH); }

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("lpmlab_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const fs::path& p) {
  testutil::CommandResult r = run_command("cat " + q(p));
  REQUIRE(r.exit_code == 0);
  return r.output;
}

void spit(const fs::path& p, const std::string& body) {
  FILE* f = std::fopen(p.c_str(), "wb");
  REQUIRE(f != nullptr);
  REQUIRE(std::fwrite(body.data(), 1, body.size(), f) == body.size());
  std::fclose(f);
}

// Stderr is routed to /dev/null so test output stays readable; exit codes and
// files carry the assertions.
std::string quiet(const std::string& args) { return cli() + " " + args + " 2>/dev/null"; }

}  // namespace

TEST_CASE("help and version exit cleanly") {
  const auto help = run_command(quiet("--help"));
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("sample") != std::string::npos);
  CHECK(help.output.find("fit") != std::string::npos);
  CHECK(help.output.find("exp") != std::string::npos);

  const auto version = run_command(quiet("--version"));
  CHECK(version.exit_code == 0);
  CHECK(version.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_command(quiet("")).exit_code == 2);                  // subcommand required
  CHECK(run_command(quiet("orbit")).exit_code == 2);             // unknown subcommand
  CHECK(run_command(quiet("sample --model rect")).exit_code == 2);  // missing required flags
  CHECK(run_command(quiet("sample --model dodeca --link poly:C=2,a=1 --n 5 --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(
            quiet("sample --model rect --link poly:C=2,a=1 --n 0 --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(
            quiet("sample --model rect --link poly:C=2,b=1 --n 5 --out /tmp/x.json"))
            .exit_code == 2);
}

TEST_CASE("sample writes deterministic graph documents") {
  const fs::path a = work_dir() / "a.json";
  const fs::path b = work_dir() / "b.json";
  const std::string base =
      "sample --model rect --d 1 --p 1 --link poly:C=2,a=1 --n 20 --seed 5 --out ";
  CHECK(run_command(quiet(base + q(a))).exit_code == 0);
  CHECK(run_command(quiet(base + q(b))).exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  const json doc = json::parse(slurp(a));
  CHECK(doc.at("schema_version").get<std::string>() == "1.0");
  CHECK(doc.at("meta").at("model").get<std::string>() == "rect:d=1,p=1");
  CHECK(doc.at("meta").at("link").get<std::string>() == "poly:C=2,a=1");
  CHECK(doc.at("meta").at("n").get<int>() == 20);
  CHECK(doc.at("meta").at("seed").get<int>() == 5);
  CHECK(doc.at("positions").size() == 20);
  CHECK(doc.at("arrivals").size() == 20);

  // A different seed changes the document.
  const fs::path c = work_dir() / "c.json";
  CHECK(run_command(
            quiet("sample --model rect --d 1 --p 1 --link poly:C=2,a=1 --n 20 --seed 6 --out " +
                  q(c)))
            .exit_code == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("rcm is rectangular shorthand with pinned d and p") {
  const fs::path a = work_dir() / "rcm.json";
  const fs::path b = work_dir() / "rect11.json";
  CHECK(run_command(quiet("sample --model rcm --link poly:C=2,a=1 --n 15 --seed 9 --out " + q(a)))
            .exit_code == 0);
  CHECK(run_command(
            quiet("sample --model rect --d 1 --p 1 --link poly:C=2,a=1 --n 15 --seed 9 --out " +
                  q(b)))
            .exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  CHECK(run_command(
            quiet("sample --model rcm --d 2 --link poly:C=2,a=1 --n 15 --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(
            quiet("sample --model rcm --p 0.5 --link poly:C=2,a=1 --n 15 --out /tmp/x.json"))
            .exit_code == 2);
}

TEST_CASE("family-specific flags are rejected elsewhere") {
  CHECK(run_command(quiet("sample --model rect --sigma2 2 --link poly:C=2,a=1 --n 10 "
                          "--out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(quiet("sample --model gauss --p 0.5 --link logexp:tau=1 --n 10 "
                          "--out /tmp/x.json"))
            .exit_code == 2);
  // Scaled links belong to sgraphon models, and only there.
  CHECK(run_command(quiet("sample --model gauss --link 'sgraphon:p=0.5;logexp:tau=1' --n 10 "
                          "--out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(quiet("sample --model sgraphon --link logexp:tau=1 --n 10 "
                          "--out /tmp/x.json"))
            .exit_code == 2);

  const fs::path ok = work_dir() / "sg.json";
  CHECK(run_command(
            quiet("sample --model sgraphon --d 2 --sigma2 1 --link 'sgraphon:p=0.5;logexp:tau=1' "
                  "--n 12 --seed 2 --out " +
                  q(ok)))
            .exit_code == 0);
  const json doc = json::parse(slurp(ok));
  CHECK(doc.at("meta").at("model").get<std::string>() == "sgraphon:d=2,sigma2=1");
}

TEST_CASE("conditioning on the last arrival applies only to rectangular models") {
  const fs::path out = work_dir() / "cond.json";
  CHECK(run_command(
            quiet("sample --model rect --d 1 --p 1 --T 30 --link poly:C=2,a=1 --n 10 --seed 4 "
                  "--out " +
                  q(out)))
            .exit_code == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc.at("meta").at("T").get<double>() == 30.0);
  const auto arrivals = doc.at("arrivals").get<std::vector<double>>();
  REQUIRE(arrivals.size() == 10);
  CHECK(arrivals.back() == 30.0);

  CHECK(run_command(quiet("sample --model gauss --T 30 --link logexp:tau=1 --n 10 "
                          "--out /tmp/x.json"))
            .exit_code == 2);
}

TEST_CASE("sample can emit a companion edge list") {
  const fs::path out = work_dir() / "el.json";
  const fs::path edges = work_dir() / "el.txt";
  CHECK(run_command(quiet("sample --model rcm --link poly:C=1.2,a=1 --n 30 --seed 1 --out " +
                          q(out) + " --edge-list " + q(edges)))
            .exit_code == 0);
  const json doc = json::parse(slurp(out));
  const std::string listing = slurp(edges);
  std::size_t lines = 0;
  for (const char ch : listing) lines += ch == '\n';
  CHECK(lines == doc.at("edges").size());
  if (!doc.at("edges").empty()) {
    const auto first = doc.at("edges")[0];
    const std::string expected =
        std::to_string(first[0].get<int>()) + " " + std::to_string(first[1].get<int>());
    CHECK(listing.rfind(expected, 0) == 0);
  }
}

TEST_CASE("fit recovers a configuration and reports errors against the truth") {
  const fs::path graph = work_dir() / "fit_in.json";
  const fs::path out = work_dir() / "fit_out.json";
  REQUIRE(run_command(
              quiet("sample --model rect --d 1 --p 1 --link poly:C=2,a=2 --n 16 --seed 3 --out " +
                    q(graph)))
              .exit_code == 0);

  CHECK(run_command(quiet("fit --graph " + q(graph) + " --max-iters 200 --out " + q(out)))
            .exit_code == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc.at("fit").at("z_hat").size() == 16);
  CHECK(doc.at("fit").at("restarts_used").get<int>() == 1);
  CHECK(doc.at("config").at("dim").get<int>() == 1);
  // Default cap for this model at n = 16: 2 * sqrt(1) * 16^{1/1}.
  CHECK(doc.at("config").at("G").get<double>() == 32.0);
  REQUIRE(doc.contains("errors"));
  CHECK(doc.at("errors").at("pos_err").get<double>() >= 0.0);
  CHECK(doc.at("errors").at("dist_err").get<double>() >= 0.0);
  CHECK(doc.at("errors").at("prob_err").get<double>() >= 0.0);
  CHECK(doc.at("errors").at("dyad_scale").get<double>() == 16.0);  // n^{2-p}

  // Reruns are byte-identical.
  const fs::path out2 = work_dir() / "fit_out2.json";
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --max-iters 200 --out " + q(out2)))
            .exit_code == 0);
  CHECK(slurp(out) == slurp(out2));
}

TEST_CASE("fit flag validation exits with 2") {
  const fs::path graph = work_dir() / "fit_in.json";  // created above
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --G nonsense --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --G 5x --out /tmp/x.json")).exit_code ==
        2);
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --G -2 --out /tmp/x.json")).exit_code ==
        2);
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --init annealed --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --restarts 0 --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --grad-tol 0 --out /tmp/x.json"))
            .exit_code == 2);
  CHECK(run_command(quiet("fit --graph " + q(graph) + " --link poly:C=0.5,a=1 "
                          "--out /tmp/x.json"))
            .exit_code == 2);
}

TEST_CASE("fit distinguishes broken files from bad flags") {
  const fs::path missing = work_dir() / "absent.json";
  CHECK(run_command(quiet("fit --graph " + q(missing) + " --out /tmp/x.json")).exit_code == 1);

  const fs::path truncated = work_dir() / "trunc.json";
  spit(truncated, "{\"schema_version\": ");
  CHECK(run_command(quiet("fit --graph " + q(truncated) + " --out /tmp/x.json")).exit_code == 1);

  const fs::path graph = work_dir() / "fit_in.json";
  json doc = json::parse(slurp(graph));

  json future = doc;
  future["schema_version"] = "9.0";
  const fs::path future_path = work_dir() / "future.json";
  spit(future_path, future.dump());
  CHECK(run_command(quiet("fit --graph " + q(future_path) + " --out /tmp/x.json")).exit_code ==
        1);

  // No link on record and none passed: the user can fix the invocation.
  json unlinked = doc;
  unlinked["meta"].erase("link");
  const fs::path unlinked_path = work_dir() / "unlinked.json";
  spit(unlinked_path, unlinked.dump());
  CHECK(run_command(quiet("fit --graph " + q(unlinked_path) + " --out /tmp/x.json")).exit_code ==
        2);
  const fs::path relinked_out = work_dir() / "relinked.json";
  CHECK(run_command(quiet("fit --graph " + q(unlinked_path) +
                          " --link poly:C=2,a=2 --max-iters 50 --out " + q(relinked_out)))
            .exit_code == 0);

  // A corrupt recorded link is the file's fault, not the invocation's.
  json badlink = doc;
  badlink["meta"]["link"] = "poly:C=2,z=9";
  const fs::path badlink_path = work_dir() / "badlink.json";
  spit(badlink_path, badlink.dump());
  CHECK(run_command(quiet("fit --graph " + q(badlink_path) + " --out /tmp/x.json")).exit_code ==
        1);
}

TEST_CASE("exp runs a plan and writes the report triple") {
  const fs::path plan_path = work_dir() / "plan.json";
  const std::string prefix = (work_dir() / "runs" / "exp1").string();
  json plan{{"kind", "sparsity"},
            {"models", json::array({json{{"model", "rect:d=1,p=1"}, {"link", "poly:C=2,a=1"}}})},
            {"n_grid", {6, 9, 12}},
            {"replicates", 30},
            {"seed", 2},
            {"output", prefix}};
  spit(plan_path, plan.dump());

  CHECK(run_command(quiet("exp sparsity --plan " + q(plan_path))).exit_code == 0);
  CHECK(fs::exists(prefix + "_raw.csv"));
  CHECK(fs::exists(prefix + "_plot.csv"));
  CHECK(fs::exists(prefix + "_summary.json"));
  const json summary = json::parse(slurp(prefix + "_summary.json"));
  CHECK(summary.at("kind").get<std::string>() == "sparsity");
  CHECK(summary.at("summary").at("arms").size() == 1);

  // --out overrides the plan's prefix.
  const std::string other = (work_dir() / "runs" / "other").string();
  CHECK(run_command(quiet("exp sparsity --plan " + q(plan_path) + " --out '" + other + "'"))
            .exit_code == 0);
  CHECK(fs::exists(other + "_summary.json"));
}

TEST_CASE("exp rejects mismatched or malformed plans with 2") {
  const fs::path plan_path = work_dir() / "plan.json";  // sparsity plan from above
  CHECK(run_command(quiet("exp regularity --plan " + q(plan_path))).exit_code == 2);
  CHECK(run_command(quiet("exp cadence --plan " + q(plan_path))).exit_code == 2);

  const fs::path broken = work_dir() / "broken_plan.json";
  spit(broken, "{\"kind\": ");
  CHECK(run_command(quiet("exp sparsity --plan " + q(broken))).exit_code == 2);

  const fs::path invalid = work_dir() / "invalid_plan.json";
  json bad{{"kind", "sparsity"},
           {"models", json::array({json{{"model", "rect:d=1,p=1"}, {"link", "poly:C=2,a=1"}}})},
           {"n_grid", {6}},
           {"replicates", 3},
           {"output", (work_dir() / "x").string()}};
  spit(invalid, bad.dump());
  CHECK(run_command(quiet("exp sparsity --plan " + q(invalid))).exit_code == 2);

  // No output prefix anywhere.
  json noout{{"kind", "sparsity"},
             {"models", json::array({json{{"model", "rect:d=1,p=1"}, {"link", "poly:C=2,a=1"}}})},
             {"n_grid", {6, 9, 12}},
             {"replicates", 30}};
  const fs::path noout_path = work_dir() / "noout_plan.json";
  spit(noout_path, noout.dump());
  CHECK(run_command(quiet("exp sparsity --plan " + q(noout_path))).exit_code == 2);

  CHECK(run_command(quiet("exp sparsity --plan " + q(work_dir() / "nope.json"))).exit_code == 1);
}

TEST_CASE("results do not depend on the worker count") {
  const fs::path one = work_dir() / "threads1.json";
  const fs::path eight = work_dir() / "threads8.json";
  const std::string args =
      "sample --model gauss --d 2 --sigma2 1 --link logexp:tau=1 --n 60 --seed 77 --out ";
  CHECK(run_command("LPM_LAB_THREADS=1 " + quiet(args + q(one))).exit_code == 0);
  CHECK(run_command("LPM_LAB_THREADS=8 " + quiet(args + q(eight))).exit_code == 0);
  CHECK(slurp(one) == slurp(eight));

  const fs::path fit1 = work_dir() / "tfit1.json";
  const fs::path fit8 = work_dir() / "tfit8.json";
  const std::string fit_args = "fit --graph " + q(one) + " --max-iters 60 --out ";
  CHECK(run_command("LPM_LAB_THREADS=1 " + quiet(fit_args + q(fit1))).exit_code == 0);
  CHECK(run_command("LPM_LAB_THREADS=8 " + quiet(fit_args + q(fit8))).exit_code == 0);
  CHECK(slurp(fit1) == slurp(fit8));
}
