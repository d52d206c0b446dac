#pragma once

#include <map>
#include <optional>
#include <string>

#include "flowres/geo.hpp"
#include "flowres/graph_store.hpp"

namespace flowres {

/// On-disk bundle: graph.ttl (interoperability export) plus canonical CSV
/// sidecars that the load path reads back.
struct Workspace {
  GraphStore store;
  AdjacencyIndex adjacency;
  std::map<std::string, Geometry> geometries;
};

void save_workspace(const Workspace& ws, const std::string& dir);
Workspace load_workspace(const std::string& dir);

}  // namespace flowres
