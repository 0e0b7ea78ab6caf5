#pragma once

#include "job.hpp"
#include "report.hpp"

namespace curvhom::cli {

Report run(const JobConfig& job);

/// The full oracle and identity suite for the job's family.
void run_verify(const JobConfig& job, Report& rep);

}  // namespace curvhom::cli
