#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "prio/instance.hpp"
#include "prio/pnwst_solver.hpp"
#include "prio/pst_solvers.hpp"

namespace prio {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// Rounds to 12 significant digits.
double round_sig(double x);

struct ReportExtras {
  std::optional<double> opt;      // exact optimum, when an oracle ran
  std::optional<double> time_ms;  // wall time, only when requested
};

/// Guarantee multiplier for a solver tag ("alg1", "alg2", "krho", "best:*", "pnwst*").
double bound_factor(const std::string& solver, int terminal_count, int levels);

/// The feasibility flag is recomputed here from the instance.
Json make_report(const PstInstance& inst, const PstRunReport& run, const ReportExtras& extras = {});
Json make_report(const PnwstInstance& inst, const PnwstRunReport& run, const ReportExtras& extras = {});

/// Two-space indented dump with a trailing newline.
std::string dump_report(const Json& report);

struct BenchRow {
  std::string instance;
  std::string solver;
  double weight = 0.0;
  std::optional<double> opt;
  double bound_factor = 0.0;
  double time_ms = 0.0;
};

std::string csv_header();
std::string csv_row(const BenchRow& row);

}  // namespace prio
