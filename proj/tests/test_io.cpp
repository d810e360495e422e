#include "doctest.h"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "opml/error.hpp"
#include "opml/io.hpp"
#include "opml/pipeline.hpp"
#include "opml/synthetic.hpp"

using namespace opml;

TEST_CASE("csv round trip is exact") {
  Rng rng(81);
  const FeatureMatrix X = testing::random_features(rng, 10, 4, 1e3);
  std::vector<int> labels{0, 1, 2, -1, 5, 0, 0, 1, 1, 2};
  std::stringstream ss;
  io::write_csv(ss, X.data(), &labels);
  const io::Dataset back = io::read_csv(ss, true);
  CHECK(back.X.data() == X.data());
  CHECK(back.labels == labels);

  std::stringstream plain;
  io::write_csv(plain, X.data());
  CHECK(io::read_csv(plain, false).X.data() == X.data());
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("csv parsing") {
  std::istringstream ok(" 1, 2.5 ,+3\n\n4,5,6\r\n");
  const io::Dataset d = io::read_csv(ok, false);
  CHECK(d.X.n() == 2);
  CHECK(d.X.data()(0, 2) == 3.0);
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv(ragged, false), ParseError);
  std::istringstream text("1,abc\n");
  CHECK_THROWS_AS(io::read_csv(text, false), ParseError);
  std::istringstream bad_label("1,2,0.5\n");
  CHECK_THROWS_AS(io::read_csv(bad_label, true), ParseError);
  std::istringstream one_col("1\n");
  CHECK_THROWS_AS(io::read_csv(one_col, true), ParseError);
  std::istringstream inf("1,inf\n");
  CHECK_THROWS_AS(io::read_csv(inf, false), InvalidArgument);
  CHECK_THROWS_AS(io::read_csv(std::filesystem::path("/nonexistent/x.csv"), false), ParseError);
}

TEST_CASE("labels files") {
  std::stringstream ss;
  io::write_labels(ss, {3, -1, 0});
  CHECK(ss.str() == "3\n-1\n0\n");
  CHECK(io::read_labels(ss) == std::vector<int>{3, -1, 0});
  std::istringstream bad("1\nx\n");
  CHECK_THROWS_AS(io::read_labels(bad), ParseError);
}

TEST_CASE("config parsing") {
  std::istringstream is(
      "# comment\n"
      "alpha_degrees = 30\n"
      "embedding_dim=4   # trailing\n"
      "rcgd_maxiter=7\n"
      "stochastic=false\n"
      "gamma=50\n"
      "k_graph=10\n"
      "seed=12\n");
  const TrainConfig c = parse_config(is);
  CHECK(c.alpha_degrees == 30.0);
  CHECK(c.embedding_dim == 4);
  CHECK(c.rcgd_maxiter == 7);
  CHECK(!c.stochastic);
  CHECK(c.aas.gamma == 50.0);
  CHECK(c.aas.k_graph == 10);
  CHECK(c.seed == 12);
  CHECK(c.batch_size == 120);

  std::istringstream unknown("gama=3\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream no_eq("alpha_degrees 3\n");
  CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
  std::istringstream bad_value("epochs=two\n");
  CHECK_THROWS_AS(parse_config(bad_value), ConfigError);
  std::istringstream out_of_range("alpha_degrees=95\n");
  CHECK_THROWS_AS(parse_config(out_of_range), ConfigError);
  std::istringstream bad_bool("normalize=yes\n");
  CHECK_THROWS_AS(parse_config(bad_bool), ConfigError);
}

TEST_CASE("feature matrix checks") {
  RowMatrix M(2, 2);
  M << 1, 2, std::numeric_limits<double>::quiet_NaN(), 0;
  CHECK_THROWS_AS(FeatureMatrix{M}, InvalidArgument);
  RowMatrix A(3, 2);
  A << 1, 2, 3, 4, 5, 6;
  const FeatureMatrix X(A);
  const FeatureMatrix S = X.select_rows({2, 0});
  CHECK(S.data().row(0) == A.row(2));
  CHECK(S.data().row(1) == A.row(0));
}

TEST_CASE("l2 normalization") {
  RowMatrix M(2, 2);
  M << 3, 4, 0, -2;
  const FeatureMatrix N = l2_normalize(FeatureMatrix(M));
  CHECK(N.data()(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(N.data()(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(N.data()(1, 1) == -1.0);
  CHECK(N.normalized());
  CHECK((l2_normalize(N).data() - N.data()).cwiseAbs().maxCoeff() <= 1e-15);

  Rng rng(82);
  const FeatureMatrix R = l2_normalize(testing::random_features(rng, 50, 7, 10.0));
  for (Index i = 0; i < R.n(); ++i) CHECK(std::abs(R.row(i).norm() - 1.0) <= 1e-12);

  M.row(1).setZero();
  try {
    l2_normalize(FeatureMatrix(M));
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("scaling to the unit ball") {
  RowMatrix M(3, 2);
  M << 3, 4, 1, 0, 0, 0;
  const FeatureMatrix S = scale_to_unit_ball(FeatureMatrix(M));
  CHECK(S.data()(0, 0) == doctest::Approx(0.6));
  CHECK(S.data()(1, 0) == doctest::Approx(0.2));
  CHECK(S.data().rowwise().norm().maxCoeff() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(scale_to_unit_ball(FeatureMatrix(RowMatrix::Zero(2, 2))), InvalidArgument);
}

TEST_CASE("synthetic set counts and determinism") {
  const SyntheticSet s = gen_synthetic(0);
  CHECK(s.X.n() == 1200);
  CHECK(s.X.d() == 2);
  std::map<int, int> hist;
  for (const int l : s.labels) ++hist[l];
  CHECK(hist == std::map<int, int>{{-1, 300}, {0, 150}, {1, 150}, {2, 150}, {3, 150}, {4, 150}, {5, 150}});
  CHECK(gen_synthetic(0).X.data() == s.X.data());
  CHECK(gen_synthetic(1).X.data() != s.X.data());

  std::stringstream a, b;
  io::write_csv(a, s.X.data(), &s.labels);
  const SyntheticSet t = gen_synthetic(0);
  io::write_csv(b, t.X.data(), &t.labels);
  CHECK(a.str() == b.str());

  const SyntheticSet lifted = gen_synthetic_lifted(0, 3, 1.5);
  CHECK(lifted.X.d() == 5);
  CHECK(lifted.X.data().leftCols(2) == s.X.data());
  CHECK(lifted.labels == s.labels);
}

TEST_CASE("synthetic class centroids") {
  // Recomputed from the layout: crescent c spans ring angles [120c, 120c + 180]
  // around the ring point at 120c; Gaussians sit at 60 + 120c.
  const SyntheticLayout L;
  const double deg = std::numbers::pi / 180.0;
  std::vector<std::array<double, 2>> expected;
  for (int c = 0; c < 3; ++c) {
    const double a = 120.0 * c * deg, b = a + 90.0 * deg;
    const double off = 2.0 / std::numbers::pi * L.crescent_radius;
    expected.push_back({L.ring_radius * std::cos(a) + off * std::cos(b), L.ring_radius * std::sin(a) + off * std::sin(b)});
  }
  for (int c = 0; c < 3; ++c) {
    const double a = (60.0 + 120.0 * c) * deg;
    expected.push_back({L.ring_radius * std::cos(a), L.ring_radius * std::sin(a)});
  }
  const auto got = synthetic_class_centroids(L);
  REQUIRE(got.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(got[i][0] == doctest::Approx(expected[i][0]).epsilon(1e-12));
    CHECK(got[i][1] == doctest::Approx(expected[i][1]).epsilon(1e-12));
    for (std::size_t j = i + 1; j < 6; ++j)
      CHECK(std::hypot(expected[i][0] - expected[j][0], expected[i][1] - expected[j][1]) >= 1.5);
  }

  // sample means land near the computed centroids
  const SyntheticSet s = gen_synthetic(3);
  for (int c = 0; c < 6; ++c) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < s.labels.size(); ++i)
      if (s.labels[i] == c) {
        mx += s.X.data()(static_cast<Index>(i), 0) / 150.0;
        my += s.X.data()(static_cast<Index>(i), 1) / 150.0;
      }
    CHECK(std::hypot(mx - expected[static_cast<std::size_t>(c)][0], my - expected[static_cast<std::size_t>(c)][1]) <= 0.15);
  }
}
