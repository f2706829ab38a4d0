#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mohanet/cloud_channel.hpp"
#include "mohanet/compartmental.hpp"
#include "mohanet/epidemic.hpp"
#include "mohanet/plume_channel.hpp"
#include "mohanet/reception.hpp"

namespace mohanet {

/// Shortest decimal that round-trips to the same double. Non-finite values
/// raise DomainError so they never reach disk.
std::string format_number(double value);

void write_trajectory_csv(std::ostream& out, const CloudTrajectory& trajectory);
void write_dose_csv(std::ostream& out, const std::vector<DoseTimeline>& timelines,
                    const std::vector<double>& thresholds);
void write_field_csv(std::ostream& out, const std::vector<FieldPoint>& field);
void write_timeseries_csv(std::ostream& out, const std::vector<Counts>& series);
void write_snapshots_jsonl(std::ostream& out, const std::vector<Snapshot>& snapshots);
void write_curves_csv(std::ostream& out, const std::vector<CompartmentPoint>& curves);
void write_kernel_csv(std::ostream& out, const DoseKernel& kernel);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& content);

}  // namespace mohanet
