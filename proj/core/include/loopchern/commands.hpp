#pragma once

// Subcommands of the driver. Each returns a report whose pass() decides the exit code.

#include "loopchern/report.hpp"

namespace loopchern {

/// Refuses the float backend (ContractError): the identities are checked exactly.
Report cmd_verify_algebra(const RunConfig& cfg);
Report cmd_evaluate(const RunConfig& cfg, bool oracle = false);
Report cmd_invariance(const RunConfig& cfg);
Report cmd_lemma(const RunConfig& cfg);
Report cmd_all(const RunConfig& cfg, bool oracle = false);

}  // namespace loopchern
