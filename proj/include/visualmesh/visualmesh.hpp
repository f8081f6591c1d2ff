#ifndef VISUALMESH_VISUALMESH_HPP
#define VISUALMESH_VISUALMESH_HPP

// Umbrella header for the core library. Serialization lives in visualmesh/io/ and is included
// separately because it pulls in the JSON and PNG dependencies.

#include "camera.hpp"
#include "engine.hpp"
#include "geometry.hpp"
#include "image.hpp"
#include "lens.hpp"
#include "mesh.hpp"
#include "node.hpp"
#include "onscreen.hpp"
#include "oracle.hpp"
#include "projection.hpp"

#endif  // VISUALMESH_VISUALMESH_HPP
