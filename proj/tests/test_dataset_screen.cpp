#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bmd/dataset.hpp"
#include "bmd/screen.hpp"

using namespace bmd;

namespace {

QuantalDataset cumene() {
  return make_dataset({0, 125, 250, 500}, {4, 31, 42, 46}, {50, 50, 50, 50});
}

}  // namespace

TEST_CASE("dataset rescales doses to a unit maximum") {
  const auto d = cumene();
  CHECK(d.dose_scale == doctest::Approx(500.0));
  CHECK(d.doses[0] == 0.0);
  CHECK(d.doses[1] == doctest::Approx(0.25));
  CHECK(d.doses[3] == 1.0);
}

TEST_CASE("dataset validation rejects malformed input") {
  CHECK_THROWS_AS(make_dataset({0}, {1}, {10}), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset({1, 2}, {1, 2}, {10, 10}), std::invalid_argument);  // d1 != 0
  CHECK_THROWS_AS(make_dataset({0, 1, 1}, {1, 2, 3}, {10, 10, 10}), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset({0, 1}, {11, 2}, {10, 10}), std::invalid_argument);  // Y > N
  CHECK_THROWS_AS(make_dataset({0, 1}, {-1, 2}, {10, 10}), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset({0, 1}, {1, 2}, {0, 10}), std::invalid_argument);
}

TEST_CASE("csv loader parses and sorts rows") {
  const char* path = "/tmp/bmd_test_load.csv";
  {
    std::ofstream f(path);
    f << "dose,responders,n\n500,46,50\n0,4,50\n250,42,50\n125,31,50\n";
  }
  const auto d = load_dataset(path);
  CHECK(d.groups() == 4);
  CHECK(d.responders[0] == 4);
  CHECK(d.responders[3] == 46);
  CHECK(d.dose_scale == doctest::Approx(500.0));
  std::remove(path);

  {
    std::ofstream f(path);
    f << "dose,responders,n\n0,4,fifty\n";
  }
  CHECK_THROWS(load_dataset(path));
  std::remove(path);
  CHECK_THROWS(load_dataset("/nonexistent/file.csv"));
}

TEST_CASE("empirical extra risk and the trend screen") {
  const auto d = cumene();
  const auto re = empirical_extra_risk(d);
  CHECK(re[0] == 0.0);
  CHECK(re[1] == doctest::Approx((31.0 / 50 - 4.0 / 50) / (1 - 4.0 / 50)).epsilon(1e-12));

  const auto s = screen(d);
  CHECK(s.passed);
  CHECK(s.s_max == doctest::Approx(2.347826).epsilon(1e-5));
  CHECK(s.argmax_index == 2);
}

TEST_CASE("screen fails flat and decreasing data") {
  const auto flat = make_dataset({0, 1, 2}, {5, 5, 5}, {50, 50, 50});
  CHECK(!screen(flat).passed);
  const auto dec = make_dataset({0, 1, 2}, {20, 10, 5}, {50, 50, 50});
  CHECK(!screen(dec).passed);
}

TEST_CASE("screen ties resolve to the smallest dose index") {
  // extra risks proportional to dose at the first two nonzero doses
  const auto d = make_dataset({0, 1, 2}, {0, 10, 20}, {100, 100, 100});
  const auto s = screen(d);
  CHECK(s.passed);
  CHECK(s.argmax_index == 2);  // slope 0.2 at both; tie -> earlier dose
}

TEST_CASE("saturated background throws") {
  const auto d = make_dataset({0, 1}, {50, 50}, {50, 50});
  CHECK_THROWS_AS(empirical_extra_risk(d), std::domain_error);
}
