// Machine-readable output: protocol reports, sweep tables, branch tables.
// All writers are deterministic (fixed field order, shortest round-trip or
// 17-significant-digit numbers, no timestamps).

#pragma once

#include <string>
#include <vector>

#include "linopt/measurement.hpp"
#include "linopt/protocols.hpp"

namespace linopt {

std::string target_kind_name(TargetKind kind);

std::string report_to_json(const ProtocolReport& r);
std::string report_to_text(const ProtocolReport& r);
// One header line plus one row per branch.
std::string report_to_csv(const ProtocolReport& r);

// Columns: alpha,p_success,p_predicted,input_entropy_ebits,output_entropy_ebits
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);
std::string sweep_to_text(const std::vector<SweepRow>& rows);

// [{"outcome": {"3":"H","4p":"V"}, "probability": p, "conditional_state": "<text form>"}, ...]
std::string branches_to_json(const std::vector<Branch>& branches);

// printf("%.17g")
std::string format_g17(double v);

}  // namespace linopt
