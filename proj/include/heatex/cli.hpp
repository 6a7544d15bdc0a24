#pragma once
//! \file cli.hpp
//! Command-line driver. Exit codes: 0 all asserted verdicts pass, 1 any
//! fail (or inconclusive without --allow-inconclusive), 2 config/usage/IO.

#include <iosfwd>

namespace heatex {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

//! Output directory env var, used when neither --out nor output.directory is set.
inline constexpr char const* kOutputDirEnv = "HEATEX_OUTPUT_DIR";

int run_cli(int argc, char const* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace heatex
