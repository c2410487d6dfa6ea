#pragma once

#include "config.hpp"
#include "table.hpp"

namespace xifm::cli {

Table run_simulate(const RunConfig& config);
Table run_sweep(const RunConfig& config);
Table run_design(const RunConfig& config);
Table run_characterize(const RunConfig& config);

struct ValidationReport {
  Table table;
  bool passed = true;
};

ValidationReport run_validate(const RunConfig& config);

}  // namespace xifm::cli
