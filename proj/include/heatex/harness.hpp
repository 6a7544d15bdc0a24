#pragma once
//! \file harness.hpp
//! Experiment orchestration and verdicts.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heatex/classical.hpp"
#include "heatex/config.hpp"
#include "heatex/quantum.hpp"

namespace heatex {

//! `skipped` marks a measured-only record (non-conserving defect, or a
//! check that does not apply); it never decides the exit status.
enum class Verdict { pass, fail, inconclusive, skipped };
char const* to_string(Verdict v);

struct IdentityRow {
  double z = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;  //!< |ln lhs - ln rhs| (quantum) or distance in sigma
  Verdict verdict = Verdict::pass;
  // Classical only.
  double lhs_stderr = 0.0;
  double rhs_stderr = 0.0;
  double lhs_ess = 0.0;
  double rhs_ess = 0.0;
  std::vector<std::string> flags;  //!< e.g. "ess"
  std::string note;
};

struct ScalarCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct MomentRow {
  int n = 0;
  double ordered = 0.0;  //!< ordered trace (quantum) or Renyi-side estimate
  double direct = 0.0;   //!< moment of P(Q) or of the ensemble heats
  double ordered_stderr = 0.0;
  double direct_stderr = 0.0;
  double defect = 0.0;  //!< relative error (quantum) or distance in sigma
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct SweepRow {
  double coupling = 0.0;
  double defect = 0.0;  //!< quantum: max_z identity defect; classical: |LHS(1) - 1|
  double defect_stderr = 0.0;
  double via_defect = 0.0;  //!< classical: mean |q_via_b - q_via_a|
  Verdict verdict = Verdict::pass;
  std::vector<std::string> flags;
  std::string note;
};

struct CharFnRow {
  double u = 0.0;
  Complex g;
  Complex fourier;
  double defect = 0.0;
};

struct Report {
  std::string command;
  ExperimentConfig config;
  std::vector<IdentityRow> identity;
  std::vector<ScalarCheck> checks;
  std::vector<MomentRow> moments;
  std::vector<SweepRow> sweep;
  std::vector<CharFnRow> charfn;
  std::vector<HeatDistribution> distributions;
  std::optional<TrajectoryEnsemble> ensemble;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::pair<std::string, double>> timings;  //!< seconds

  //! Every verdict in fixed order.
  std::vector<Verdict> verdicts() const;
  std::size_t count(Verdict v) const;
};

struct RunOptions {
  unsigned workers = 1;
  bool defect_mode = false;  //!< non-conserving identity rows become measurements
};

//! Identity rows plus all applicable scalar checks and moments.
Report run_experiment(ExperimentConfig const& config, RunOptions const& opts = {});
Report coupling_sweep(ExperimentConfig const& config, RunOptions const& opts = {});
Report moment_check(ExperimentConfig const& config, RunOptions const& opts = {});
Report charfn_check(ExperimentConfig const& config, RunOptions const& opts = {});
Report distribution_report(ExperimentConfig const& config,
                           RunOptions const& opts = {});
//! Classical ensemble with equipartition and bookkeeping checks.
Report sample_report(ExperimentConfig const& config, RunOptions const& opts = {});

//! |a - b| <= rtol * max(|a|, |b|) or |a - b| <= atol.
bool moments_agree(double a, double b, double rtol, double atol);

}  // namespace heatex
