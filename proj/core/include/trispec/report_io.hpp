#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "trispec/verify.hpp"

namespace trispec {

/// Run configuration echoed verbatim into a report, in insertion order.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// JSON document with context, policy, rows and verdict.
void write_report_json(const VerificationReport& report, std::ostream& out,
                       const ConfigEcho& config = {});

/// CSV with header tau1,tau2,tau3,measured,predicted,rel_error.
void write_report_csv(const VerificationReport& report, std::ostream& out);

}  // namespace trispec
