#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riccikit/config.hpp"
#include "riccikit/report.hpp"

namespace rk {

// Command dispatch: curvature | conformal | atp | flow | report-all.
// Throws rk::config_error for unknown commands or configs missing what the
// command needs; check failures are reported in the Report, never thrown.
Report run_command(const std::string& command, const RunConfig& cfg);
std::vector<std::string> command_names();

Report cmd_curvature(const RunConfig& cfg);
Report cmd_conformal(const RunConfig& cfg);
Report cmd_atp(const RunConfig& cfg);
Report cmd_flow(const RunConfig& cfg);
Report cmd_report_all(const RunConfig& cfg);

// Acceptance-criteria groups.  Each appends its checks (prefixed c1_..c8_)
// with pinned tolerances; cmd_report_all and the acceptance runner share
// these.  Group 9 (byte-identical reruns) is exercised externally by running
// report-all twice.
void criterion_flatness(Report& rep, std::uint64_t seed);         // 1
void criterion_conformal_chain(Report& rep, std::uint64_t seed);  // 2
void criterion_plane_example(Report& rep, std::uint64_t seed);    // 3
void criterion_cone_example(Report& rep, std::uint64_t seed);     // 4
void criterion_sigma_recovery(Report& rep, std::uint64_t seed);   // 5
void criterion_pregeodesic(Report& rep, std::uint64_t seed);      // 6
void criterion_null_ode(Report& rep, std::uint64_t seed);         // 7
void criterion_riccati(Report& rep, std::uint64_t seed);          // 8

}  // namespace rk
