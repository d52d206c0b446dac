#pragma once

// Namespace bindings used by the Turtle export. The cfs:/cfsf: IRIs are
// project placeholders; the rest are the usual public vocabularies.

namespace flowres::ns {

inline constexpr const char* kCfs = "http://example.org/cfs-geokg/ontology#";
inline constexpr const char* kCfsf = "http://example.org/cfs-geokg/function#";
inline constexpr const char* kKwgOnt = "http://stko-kwg.geog.ucsb.edu/lod/ontology#";
inline constexpr const char* kGn = "http://www.geonames.org/ontology#";
inline constexpr const char* kGeo = "http://www.opengis.net/ont/geosparql#";
inline constexpr const char* kTime = "http://www.w3.org/2006/time#";

}  // namespace flowres::ns
