#pragma once

#include <ostream>
#include <string>

#include "zlab/run_config.hpp"

namespace zlab {

/// Process-level controls that do not belong in the config.
struct RunControl {
    std::string resume;                 // checkpoint to continue from
    long stop_after = -1;               // exit after this many new work units (testing)
    double checkpoint_interval = 30.0;  // seconds of work between checkpoint writes
};

/// Exit status used when stop_after interrupts a run.
inline constexpr int kInterruptedExit = 75;

FunctionSpec spec_from_config(const RunConfig& c);

/// Runs one subcommand.  Results go to c.out when set (and a summary line
/// to `out`), otherwise to `out`.  Library errors propagate.
void run_command(const RunConfig& c, const RunControl& ctl, std::ostream& out);

} // namespace zlab
