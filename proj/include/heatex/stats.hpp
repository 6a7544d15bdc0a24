#pragma once
//! \file stats.hpp
//! Block jackknife and effective sample size.

#include <functional>
#include <span>

namespace heatex {

inline constexpr int kJackknifeBlocks = 100;

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

//! Mean with a jackknife error over `blocks` contiguous blocks (clamped to
//! the sample count). Sums run in index order.
Estimate jackknife_mean(std::span<double const> x,
                        int blocks = kJackknifeBlocks);

//! Jackknife estimate of f(mean(x)); the central value is f(mean).
Estimate jackknife_of_mean(std::span<double const> x,
                           std::function<double(double)> const& f,
                           int blocks = kJackknifeBlocks);

//! (sum w)^2 / sum w^2.
double effective_sample_size(std::span<double const> w);

}  // namespace heatex
