#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "support/fixtures.hpp"

// End-to-end checks through the installed binary. The path is baked in at
// compile time so the tests run from any working directory.
#ifndef SEMSHIFT_CLI_PATH
#error "SEMSHIFT_CLI_PATH must point at the semshift binary"
#endif

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int rc = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static const fs::path scratch = fixtures::fresh_temp_dir("cli-io");
  static std::atomic<unsigned> seq{0};
  unsigned n = seq.fetch_add(1);
  fs::path out_file = scratch / ("out-" + std::to_string(n));
  fs::path err_file = scratch / ("err-" + std::to_string(n));
  std::string cmd = std::string(SEMSHIFT_CLI_PATH) + " " + args + " >" +
                    out_file.string() + " 2>" + err_file.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = fixtures::slurp(out_file);
  r.err = fixtures::slurp(err_file);
  return r;
}

bool contains(const std::string& hay, std::string_view needle) {
  return hay.find(needle) != std::string::npos;
}

fixtures::Workspace quick_workspace(const std::string& tag) {
  fixtures::WorkspaceSpec spec;
  spec.n_samples = 2;
  return fixtures::make_workspace(tag, spec);
}

}  // namespace

TEST_CASE("cli: --help exits 0 and lists the subcommands") {
  auto r = run_cli("--help");
  CHECK(r.rc == 0);
  for (const char* sub :
       {"validate", "render", "run", "score", "correlate", "characterize"}) {
    CHECK(contains(r.out, sub));
  }
}

TEST_CASE("cli: a missing subcommand or manifest is a usage error") {
  CHECK(run_cli("").rc != 0);
  CHECK(run_cli("validate").rc != 0);       // --manifest is required
  CHECK(run_cli("frobnicate --manifest x").rc != 0);
}

TEST_CASE("cli: validate, run, score, and render on a mock workspace") {
  auto w = quick_workspace("cliflow");
  std::string mflag = "--manifest " + w.manifest_path.string();

  auto v = run_cli("validate " + mflag);
  CHECK(v.rc == 0);
  CHECK(contains(v.out, "dimension: total=23 identical=7 different=16"));

  // Scoring before running tells the user what is missing.
  auto early = run_cli("score " + mflag);
  CHECK(early.rc == 3);
  CHECK(contains(early.err, "run 'run' first"));

  auto run1 = run_cli("run " + mflag);
  CHECK(run1.rc == 0);
  CHECK(contains(run1.out, "run directory: "));
  CHECK(contains(run1.out, "(0 cached, 18 new)"));

  auto run2 = run_cli("run " + mflag + " --resume");
  CHECK(run2.rc == 0);
  CHECK(contains(run2.out, "(18 cached, 0 new)"));

  auto s = run_cli("score " + mflag);
  CHECK(s.rc == 0);
  CHECK(contains(s.out, "1.00±.00"));

  auto rend = run_cli("render " + mflag +
                      " --pole relation --method rhetoric --id rel-01");
  CHECK(rend.rc == 0);
  CHECK(contains(rend.out, "--- query ---"));
  CHECK(contains(rend.out, "*battle*"));

  auto c = run_cli("correlate " + mflag + " --only pole=relation");
  CHECK(c.rc == 0);
  CHECK(contains(c.out, "wrote "));

  auto ch = run_cli("characterize " + mflag);
  CHECK(ch.rc == 0);
  CHECK(contains(ch.out, "battle\tmetaphorization"));
}

TEST_CASE("cli: exit codes separate data, config, and incomplete states") {
  auto w = quick_workspace("clicodes");
  std::string mflag = "--manifest " + w.manifest_path.string();

  // Config: manifest file does not exist.
  auto missing = run_cli("validate --manifest /nonexistent/manifest.json");
  CHECK(missing.rc == 2);
  CHECK(contains(missing.err, "error: "));

  // Config: bad --only filter.
  auto filt = run_cli("validate " + mflag + " --only item=rel-01");
  CHECK(filt.rc == 2);

  // Config: unknown pole on render.
  auto pole = run_cli("render " + mflag +
                      " --pole frequency --method cot --id dim-01");
  CHECK(pole.rc == 2);
  CHECK(contains(pole.err, "unknown pole"));

  // Data: a malformed dataset line, reported with its line number.
  {
    std::ofstream app(w.dir / "data" / "relation.jsonl", std::ios::app);
    app << "{broken\n";
  }
  auto bad = run_cli("validate " + mflag);
  CHECK(bad.rc == 1);
  CHECK(contains(bad.err, "relation.jsonl:14:"));
}
