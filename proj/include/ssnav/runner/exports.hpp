#pragma once

#include "ssnav/frontier/frontier.hpp"
#include "ssnav/frontier/gcm.hpp"
#include "ssnav/objects/object_map.hpp"
#include "ssnav/region/partition.hpp"
#include "ssnav/scg/polyhedron.hpp"

#include <map>
#include <string>

namespace ssnav {

// Deterministic JSON documents (sorted keys, no wall-clock content).

// {nodes:[{id, seed, centroid, vertices:[{pos,kind}], faces, region_id}],
//  edges:[{a,b,kind,weight}], regions:[{id, members, description, visited}]}
std::string exportScg(const SpatialConnectivityGraph& scg, const std::map<int, Region>& regions);

// {objects:[{id, label, position, size, anchor_node, region_id}]} with the
// same 3-decimal position/size form the reasoner sees
std::string exportObjects(const ObjectMap& objects, const SpatialConnectivityGraph& scg);

// {frontiers:[{id, centroid, voxel_count, viewpoint{pos,yaw}, gain,
//  region_id}], gcm:[{cell_index, unknown_count, visited}]}
std::string exportFrontiers(const FrontierMap& frontiers, const GlobalCoverageMask& gcm,
                            const SpatialConnectivityGraph& scg);

}  // namespace ssnav
