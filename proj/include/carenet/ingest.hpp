#pragma once

#include <string>

#include "carenet/instance.hpp"

namespace carenet {

struct InstanceFiles {
    std::string network;
    std::string facilities;
    std::string blockgroups;
    std::string visits;
};

// Reads and validates the four ingestion CSVs. Facilities whose capacity
// cell is empty get an estimated capacity from observed demand.
Instance ingest_instance(const InstanceFiles& files, const ModelParams& params);

// Writes an instance back out in the ingestion schema, deterministic
// column and row order.
void emit_instance(const Instance& instance, const InstanceFiles& files);

} // namespace carenet
