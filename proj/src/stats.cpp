#include "heatex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "heatex/errors.hpp"

namespace heatex {
namespace {

struct Blocks {
  std::vector<double> sums;
  std::vector<std::size_t> sizes;
  double total = 0.0;
};

Blocks block_sums(std::span<double const> x, int blocks) {
  std::size_t const n = x.size();
  std::size_t const b = std::clamp<std::size_t>(std::size_t(blocks), 1, n);
  Blocks out;
  out.sums.assign(b, 0.0);
  out.sizes.assign(b, 0);
  for (std::size_t k = 0; k < b; ++k) {
    std::size_t const begin = n * k / b;
    std::size_t const end = n * (k + 1) / b;
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += x[i];
    out.sums[k] = s;
    out.sizes[k] = end - begin;
  }
  for (double s : out.sums) out.total += s;
  return out;
}

}  // namespace

Estimate jackknife_of_mean(std::span<double const> x,
                           std::function<double(double)> const& f,
                           int blocks) {
  if (x.empty()) throw DomainError("jackknife of an empty sample");
  std::size_t const n = x.size();
  Blocks const bs = block_sums(x, blocks);
  std::size_t const b = bs.sums.size();
  Estimate e;
  e.mean = f(bs.total / double(n));
  if (b < 2) return e;
  std::vector<double> loo(b);
  double loo_mean = 0.0;
  for (std::size_t k = 0; k < b; ++k) {
    loo[k] = f((bs.total - bs.sums[k]) / double(n - bs.sizes[k]));
    loo_mean += loo[k];
  }
  loo_mean /= double(b);
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  e.std_error = std::sqrt(double(b - 1) / double(b) * ss);
  return e;
}

Estimate jackknife_mean(std::span<double const> x, int blocks) {
  return jackknife_of_mean(x, [](double m) { return m; }, blocks);
}

double effective_sample_size(std::span<double const> w) {
  double s = 0.0, s2 = 0.0;
  for (double v : w) {
    s += v;
    s2 += v * v;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

}  // namespace heatex
