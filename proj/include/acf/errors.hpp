// Usable under the terms in the Apache License, Version 2.0.
#pragma once

#include <stdexcept>

namespace acf {

// Caller broke an operation's precondition.
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Internal cross-structure invariant no longer holds (table/dictionary drift).
struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Rebuild could not find a working configuration within the attempt cap.
struct rebuild_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An adversary strategy exceeded its declared query budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace acf
