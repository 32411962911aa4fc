#pragma once

#include "gbary/metric_graph.hpp"
#include "gbary/partition.hpp"

#include <span>

namespace gbary {

/// Upscale projection: an observation stands for the representative of its cluster.
/// Throws DataError if `y` has no cluster.
NodeId project_upscale(NodeId y, const Partition& p, std::span<const NodeId> representatives);

/// Multiscale projection: observations in the central cluster are kept,
/// the others map to their cluster representative.
NodeId project_multiscale(NodeId y, const Partition& p, ClusterId central, std::span<const NodeId> representatives);

} // namespace gbary
