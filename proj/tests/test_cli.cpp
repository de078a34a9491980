// Copyright 2026 The percspin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks driving the installed binary through popen. Artifacts
// go to stdout, summaries to stderr, so dropping stderr isolates the
// machine-readable part.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#ifndef PERCSPIN_CLI_PATH
#error "PERCSPIN_CLI_PATH must point at the CLI binary"
#endif
#ifndef PERCSPIN_GOLDEN_DIR
#error "PERCSPIN_GOLDEN_DIR must point at the golden directory"
#endif

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, bool keep_stderr = false) {
  const std::string cmd = std::string(PERCSPIN_CLI_PATH) + " " + args +
                          (keep_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kLambdaArgs = "lambda --p 0 --tau 1,0 --m 200 --trials 10 --seed 7";
const std::string kLambdaCsv =
    "p,beta,tau_x,tau_y,m,trials,discarded,mean,std_error,extrapolated\n"
    "0,inf,1,0,200,10,0,1.005,0,1.005\n";

}  // namespace

TEST_CASE("help lists every subcommand and exits cleanly") {
  const CliResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"sample", "clusters", "crossing", "scan", "distance", "lambda", "phi",
        "sweep", "channels", "strongchannels", "percentage", "energy",
        "groundstate", "rigidity", "interface"}) {
    INFO("subcommand ", name);
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("the lambda artifact is pinned, repeatable and jobs-invariant") {
  const CliResult a = run_cli(kLambdaArgs);
  CHECK(a.exit_code == 0);
  CHECK(a.out == kLambdaCsv);
  const CliResult b = run_cli(kLambdaArgs);
  CHECK(b.out == a.out);
  const CliResult c = run_cli(kLambdaArgs + " --jobs 3");
  CHECK(c.out == a.out);
}

TEST_CASE("--output moves the artifact to a file and the summary to stdout") {
  const std::string tmp = "cli_lambda_artifact.csv";
  const CliResult r = run_cli(kLambdaArgs + " -o " + tmp);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "lambda mean 1.005 se 0 (discarded 0/10)\n");
  CHECK(read_file(tmp) == kLambdaCsv);
  std::remove(tmp.c_str());
}

TEST_CASE("crossing at p=1 reports an exact zero frequency") {
  const CliResult r =
      run_cli("crossing --p 1 --width 33 --height 32 --trials 10");
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "p,width,height,trials,direction,frequency,se\n"
        "1,33,32,10,lr,0,0\n");
}

TEST_CASE("json artifacts parse and carry the same numbers") {
  const CliResult r = run_cli(
      "crossing --p 1 --width 33 --height 32 --trials 10 --format json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("p").get<double>() == 1.0);
  CHECK(j.at("width").get<std::int64_t>() == 33);
  CHECK(j.at("height").get<std::int64_t>() == 32);
  CHECK(j.at("trials").get<std::int64_t>() == 10);
  CHECK(j.at("direction").get<std::string>() == "lr");
  CHECK(j.at("frequency").get<double>() == 0.0);
  CHECK(j.at("se").get<double>() == 0.0);
}

TEST_CASE("the weak-only halves ground state is two flat blocks") {
  const CliResult r = run_cli("groundstate --p 0 --n 16 --bc halves --seed 1");
  CHECK(r.exit_code == 0);
  std::string expect;
  for (int row = 0; row < 8; ++row) expect += std::string(16, '-') + "\n";
  for (int row = 0; row < 8; ++row) expect += std::string(16, '+') + "\n";
  expect +=
      "{\"finite\": true, \"value\": 16, \"broken_weak\": 16, "
      "\"broken_strong\": 0}\n";
  CHECK(r.out == expect);
}

TEST_CASE("argument errors exit with code two") {
  CHECK(run_cli("crossing --p 1.5 --width 8 --height 8 --trials 2").exit_code ==
        2);
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
  CHECK(run_cli("distance --p 0 --width 8 --height 8 --from 0,0 --to 3,0")
            .exit_code == 2);  // not a dual midpoint
}

TEST_CASE("estimates that discard every trial exit with code three") {
  const CliResult r =
      run_cli("lambda --p 0.75 --tau 1,0 --m 8 --trials 2", true);
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("error:") != std::string::npos);
}

TEST_CASE("recorded artifacts stay byte-identical") {
  struct Golden {
    const char* file;
    const char* args;
  };
  const std::vector<Golden> goldens = {
      {"scan_64.csv",
       "scan --width 64 --height 63 --pmin 0.3 --pmax 0.7 --steps 5 "
       "--trials 40 --seed 11"},
      {"channels_rot.csv",
       "channels --p 0.2 --nu 3,4 --delta 0.5 --n 20 --seed 3"},
      {"sweep_16.csv",
       "sweep --p 0.7 --nu 0,1 --m 16 --betas 1,4 --trials 6 --seed 9"},
      {"groundstate_8.txt", "groundstate --p 0.15 --n 8 --seed 5 --bc halves"},
  };
  for (const Golden& g : goldens) {
    INFO("golden ", g.file);
    const CliResult r = run_cli(g.args);
    CHECK(r.exit_code == 0);
    CHECK(r.out == read_file(std::string(PERCSPIN_GOLDEN_DIR) + "/" + g.file));
  }
}
