#include "gbary/projection.hpp"

#include "gbary/error.hpp"

namespace gbary {

namespace {

ClusterId cluster_or_throw(NodeId y, const Partition& p)
{
    if (y >= p.node_count())
        throw DataError("observation " + std::to_string(y) + " is not assigned to a cluster");
    return p.cluster_of(y);
}

} // namespace

NodeId project_upscale(NodeId y, const Partition& p, std::span<const NodeId> representatives)
{
    return representatives[cluster_or_throw(y, p)];
}

NodeId project_multiscale(NodeId y, const Partition& p, ClusterId central, std::span<const NodeId> representatives)
{
    const ClusterId c = cluster_or_throw(y, p);
    return c == central ? y : representatives[c];
}

} // namespace gbary
