#include <doctest.h>

#include <cmath>
#include <vector>

#include "heatex/rng.hpp"
#include "heatex/stats.hpp"

using namespace heatex;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  CounterStream a(1, 0), b(1, 0), c(1, 1), d(2, 0);
  std::vector<std::uint32_t> va, vb, vc, vd;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(CounterStream(0, 0)() == 0x6627e8d5u);
}

TEST_CASE("uniform and normal variates have the right moments") {
  CounterStream rng(3, 0);
  int const n = 200000;
  double su = 0, suu = 0, sn = 0, snn = 0;
  double umin = 1, umax = 0;
  for (int i = 0; i < n; ++i) {
    double const u = rng.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    su += u;
    suu += u * u;
    double const z = rng.normal();
    sn += z;
    snn += z * z;
  }
  CHECK(umin > 0.0);
  CHECK(umax < 1.0);
  CHECK(std::abs(su / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(suu / n - 1.0 / 3) < 0.005);
  CHECK(std::abs(sn / n) < 4 / std::sqrt(double(n)));
  CHECK(std::abs(snn / n - 1.0) < 4 * std::sqrt(2.0 / n));
}

TEST_CASE("jackknife mean on iid data matches the naive standard error") {
  CounterStream rng(4, 0);
  std::vector<double> x(50000);
  for (double& v : x) v = 2.0 + 3.0 * rng.normal();
  Estimate const e = jackknife_mean(x);
  double m = 0;
  for (double v : x) m += v;
  m /= double(x.size());
  CHECK(e.mean == doctest::Approx(m).epsilon(1e-14));
  CHECK(e.std_error == doctest::Approx(3.0 / std::sqrt(50000.0)).epsilon(0.2));
}

TEST_CASE("jackknife degenerate inputs") {
  std::vector<double> c(1000, 1.5);
  CHECK(jackknife_mean(c).mean == 1.5);
  CHECK(jackknife_mean(c).std_error == 0.0);
  std::vector<double> small{1.0, 2.0, 3.0};  // fewer samples than blocks
  Estimate const e = jackknife_mean(small);
  CHECK(e.mean == doctest::Approx(2.0));
  CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(3.0)));
  std::vector<double> one{4.0};
  CHECK(jackknife_mean(one).mean == 4.0);
}

TEST_CASE("jackknife of a nonlinear function of the mean") {
  CounterStream rng(5, 0);
  std::vector<double> x(40000);
  for (double& v : x) v = 1.0 + 0.1 * rng.normal();
  Estimate const e = jackknife_of_mean(x, [](double m) { return std::log(m); });
  CHECK(std::abs(e.mean) < 4 * e.std_error + 1e-12);
  CHECK(e.std_error == doctest::Approx(0.1 / std::sqrt(40000.0)).epsilon(0.2));
}

TEST_CASE("effective sample size") {
  std::vector<double> w(100, 2.0);
  CHECK(effective_sample_size(w) == doctest::Approx(100.0));
  w[0] = 1e6;
  CHECK(effective_sample_size(w) < 1.01);
}
