#pragma once

#include <iosfwd>
#include <string>

#include "pmelab/experiments.hpp"

namespace pmelab {

/// 17 significant digits, '.' decimal point, independent of the C locale.
std::string format_number(double x);

/// Header `time,functional,value`, rows sorted by time then functional name,
/// LF line endings.
std::string format_report_csv(const ExperimentReport& report);

/// Writes format_report_csv to path; I/O failures throw std::runtime_error
/// naming the path.
void emit_csv(const ExperimentReport& report, const std::string& path);

/// Worker pool size: PMELAB_THREADS when set (positive integer), else the
/// hardware concurrency, never more than jobs.
std::size_t worker_count(std::size_t jobs);

/// Entry point of the pmelab tool. Returns 0 on success or PASS, 1 when a
/// criterion fails, 2 on usage, configuration or module errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmelab
