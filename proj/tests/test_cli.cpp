// Copyright (c) 2026 The homsum Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "homsum/cli.hpp"
#include "homsum/kernel_io.hpp"
#include "oracles.hpp"

using namespace homsum;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/homsum_test_" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("kernel file parsing and defaults") {
  const io::KernelFile file = io::parse_kernel_text(
      R"({"q":2,"N":2,"lambda":[2.0,2.0],"entries":[{"idx":[1,2],"val":0.5}]})");
  CHECK(file.kernel.order() == 2);
  CHECK(file.kernel.value({1, 2}) == 0.5);
  CHECK(file.weights.lambda(1) == 2.0);

  const io::KernelFile defaulted =
      io::parse_kernel_text(R"({"q":1,"N":3,"entries":[{"idx":[2],"val":1.0}]})");
  CHECK(defaulted.weights.size() == 3);
  CHECK(defaulted.weights.lambda(3) == 1.0);

  CHECK_THROWS_AS(io::parse_kernel_text(
                      R"({"q":2,"N":2,"entries":[{"idx":[2,2],"val":1.0}]})"),
                  RepeatedIndexError);
  CHECK_THROWS_AS(io::parse_kernel_text("{"), ParseError);
  CHECK_THROWS_AS(io::parse_kernel_text(R"({"q":2,"entries":[]})"), ParseError);
  CHECK_THROWS_AS(io::parse_kernel_text(
                      R"({"q":2,"N":2,"lambda":[1.0],"entries":[]})"),
                  ParseError);
  CHECK_THROWS_AS(io::parse_kernel_text(
                      R"({"q":2,"N":2,"entries":[{"idx":[1,2]}]})"),
                  ParseError);
}

TEST_CASE("kernel files round trip through serialization") {
  RngStream rng(51, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int q = 1 + static_cast<int>(rng.next_u64() % 3);
    const SymmetricKernel f = oracles::random_kernel(rng, q, 6, 6);
    const WeightVector w = oracles::random_weights(rng, 6, 0.5, 4.0);
    const std::string text = io::serialize_kernel(f, w);
    const io::KernelFile back = io::parse_kernel_text(text);
    CHECK(back.kernel.order() == f.order());
    CHECK(back.kernel.size() == f.size());
    CHECK(back.kernel.entries() == f.entries());
    CHECK(back.weights.values() == w.values());
    // Canonical files are a fixed point of parse-then-serialize.
    CHECK(io::serialize_kernel(back.kernel, back.weights) == text);
  }
}

TEST_CASE("cli subcommands produce headered reports") {
  const std::string path = write_temp(
      "k1.json", R"({"q":2,"N":2,"lambda":[2.0,2.0],"entries":[{"idx":[1,2],"val":0.5}]})");

  const CliResult contract = run_cli({"contract", "--kernel", path});
  CHECK(contract.code == 0);
  CHECK(contract.out.rfind("# quantity\tr\tl\tvalue\n", 0) == 0);
  CHECK(contract.out.find("g4_integral\t-\t-\t0.03125\n") != std::string::npos);

  const CliResult diag = run_cli({"diagnose", "--kernel", path, "--provider", "poisson"});
  CHECK(diag.code == 0);
  CHECK(diag.out.find("m4_exact\t12.25\n") != std::string::npos);
  CHECK(diag.out.find("method\tboth\n") != std::string::npos);

  const CliResult moments =
      run_cli({"moments", "--kernel", path, "--provider", "rademacher"});
  CHECK(moments.code == 0);
  CHECK(moments.out.find("m4_bruteforce\t1\n") != std::string::npos);
  CHECK(moments.out.find("gap\t-2\n") != std::string::npos);

  const CliResult product = run_cli({"product-check", "--kernel", path});
  CHECK(product.code == 0);
  CHECK(product.out.find("rel_error\t0\n") != std::string::npos);
}

TEST_CASE("cli validation and exit codes") {
  const CliResult unknown = run_cli({"frobnicate"});
  CHECK(unknown.code == 1);

  const CliResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("universality") != std::string::npos);

  const CliResult sub_help = run_cli({"simulate", "--help"});
  CHECK(sub_help.code == 0);

  const CliResult missing = run_cli({"contract"});
  CHECK(missing.code == 1);

  const std::string bad = write_temp("bad.json", R"({"q":2,"N":2,"entries":[{"idx":[2,2],"val":1.0}]})");
  const CliResult invalid = run_cli({"contract", "--kernel", bad});
  CHECK(invalid.code == 1);
  CHECK(invalid.err.find("repeated index") != std::string::npos);

  const CliResult structured_misuse = run_cli(
      {"moments", "--kernel", bad, "--provider", "gaussian", "--method", "structured"});
  CHECK(structured_misuse.code == 1);
}

TEST_CASE("cli budget errors exit with code two") {
  std::ostringstream big;
  big << R"({"q":2,"N":6000,"entries":[)";
  for (int s = 2; s <= 6000; ++s) {
    if (s > 2) big << ",";
    big << R"({"idx":[1,)" << s << R"(],"val":1.0})";
  }
  big << "]}";
  const std::string path = write_temp("big.json", big.str());
  const CliResult r = run_cli({"moments", "--kernel", path, "--provider", "gaussian",
                               "--method", "bruteforce"});
  CHECK(r.code == 2);
}

TEST_CASE("cli universality output is byte-identical across runs and thread counts") {
  const std::vector<std::string> base{
      "universality", "--family", "pair-partition", "--providers",
      "gaussian,rademacher,poisson", "--grid", "2,8", "--samples", "4000",
      "--seed", "42", "--streams", "8"};
  auto with_threads = [&](const std::string& t) {
    std::vector<std::string> args = base;
    args.push_back("--threads");
    args.push_back(t);
    return run_cli(args);
  };
  const CliResult a = with_threads("1");
  const CliResult b = with_threads("1");
  const CliResult c = with_threads("8");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.rfind("# family\t", 0) == 0);
}

TEST_CASE("cli writes reports to a file when asked") {
  const std::string kpath = write_temp(
      "k2.json", R"({"q":1,"N":1,"entries":[{"idx":[1],"val":1.0}]})");
  const std::string opath = "/tmp/homsum_test_out.tsv";
  std::remove(opath.c_str());
  const CliResult r =
      run_cli({"diagnose", "--kernel", kpath, "--provider", "poisson", "--out", opath});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(opath);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# key\tvalue");
}

TEST_CASE("cli vector-diagnose wires kernels and the covariance target") {
  const std::string k1 = write_temp(
      "v1.json", R"({"q":2,"N":4,"entries":[{"idx":[1,2],"val":0.5}]})");
  const std::string k2 = write_temp(
      "v2.json", R"({"q":2,"N":4,"entries":[{"idx":[3,4],"val":0.5}]})");
  const std::string cov = write_temp("cov.json", "[[1.0, 0.0], [0.0, 1.0]]");
  const CliResult r =
      run_cli({"vector-diagnose", "--kernel", k1, "--kernel", k2, "--cov", cov});
  CHECK(r.code == 0);
  CHECK(r.out.find("# i\tj\tcross_cov\ttarget\tresidual") == 0);
  CHECK(r.out.find("# j\tq\tvar_exact\tm4\tgap_vs_target") != std::string::npos);
}
