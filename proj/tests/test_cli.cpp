#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "opml/io.hpp"

#ifndef OPML_CLI_PATH
#error "OPML_CLI_PATH must name the CLI binary"
#endif

using namespace opml;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + OPML_CLI_PATH + "\" " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void put(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("gen writes the labeled synthetic set") {
  REQUIRE(run("gen --seed 0 --out cli_gen.csv") == 0);
  const io::Dataset d = io::read_csv(std::filesystem::path("cli_gen.csv"), true);
  CHECK(d.X.n() == 1200);
  CHECK(d.X.d() == 2);
  REQUIRE(run("gen --seed 0 --out cli_gen2.csv") == 0);
  CHECK(slurp("cli_gen.csv") == slurp("cli_gen2.csv"));
}

TEST_CASE("embed with an identity selection keeps the leading columns") {
  put("cli_identity.model", "3 2 45\n1,0\n0,1\n0,0\n0,0\n0,0\n0,0\n");
  put("cli_points.csv", "1.5,-2,7\n0.25,3,-1\n");
  REQUIRE(run("embed --model cli_identity.model --input cli_points.csv --out cli_embedded.csv") == 0);
  CHECK(slurp("cli_embedded.csv") == "1.5,-2\n0.25,3\n");
}

TEST_CASE("eval of the truth against itself") {
  put("cli_truth.txt", "0\n0\n1\n1\n2\n-1\n2\n");
  REQUIRE(run("eval --input cli_truth.txt --labels cli_truth.txt --out cli_report.txt") == 0);
  const std::string report = slurp("cli_report.txt");
  CHECK(report.find("nmi 1\n") != std::string::npos);
  CHECK(report.find("f_measure 1\n") != std::string::npos);
}

TEST_CASE("train then embed then eval") {
  put("cli_train.cfg", "embedding_dim=1\nrcgd_maxiter=3\nstochastic=false\n");
  put("cli_train.csv", "0,0,0\n0.1,0,1\n0,0.1,0\n5,5,1\n5.1,5,0\n5,5.1,1\n");
  put("cli_train_labels.txt", "0\n0\n0\n1\n1\n1\n");
  REQUIRE(run("train --input cli_train.csv --labels cli_train_labels.txt --config cli_train.cfg --out cli.model "
              "--trace cli_trace.csv") == 0);
  CHECK(slurp("cli_trace.csv").rfind("iter,objective,gradnorm,step\n", 0) == 0);
  REQUIRE(run("embed --model cli.model --input cli_train.csv --out cli_train_emb.csv") == 0);
  REQUIRE(run("eval --input cli_train_emb.csv --labels cli_train_labels.txt --k 1 --out cli_train_report.txt") == 0);
  CHECK(slurp("cli_train_report.txt").find("recall_at_1 ") != std::string::npos);
}

TEST_CASE("errors exit nonzero with one diagnostic line") {
  CHECK(run("cluster --input does_not_exist.csv --out x.txt 2> cli_err.txt") != 0);
  const std::string err = slurp("cli_err.txt");
  CHECK(err.rfind("error [cli-io]", 0) == 0);
  CHECK(std::count(err.begin(), err.end(), '\n') == 1);

  put("cli_bad.cfg", "no_such_key=1\n");
  CHECK(run("cluster --input cli_points.csv --config cli_bad.cfg --out x.txt 2> /dev/null") != 0);
  CHECK(run("embed --model cli_identity.model --input cli_embedded.csv --out x.csv 2> /dev/null") != 0);
  CHECK(run("frobnicate 2> /dev/null") != 0);
}
