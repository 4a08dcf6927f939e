#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "kframe/core.hpp"
#include "kframe/frames.hpp"
#include "kframe/opcore.hpp"

// JSON documents for operators, frames and subspaces. Complex scalars are
// stored as [re, im] pairs; doubles round-trip bit-exactly through the
// shortest-representation serializer.

namespace kframe {

nlohmann::json operator_to_json(const Mat& a);
Mat operator_from_json(const nlohmann::json& doc);

nlohmann::json frame_to_json(const FrameSystem& f);
FrameSystem frame_from_json(const nlohmann::json& doc);

nlohmann::json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const nlohmann::json& doc);

/// Parses a file and checks its "kind" tag against the expected one.
nlohmann::json load_document(const std::string& path, const std::string& kind);

void save_document(const nlohmann::json& doc, const std::string& path);

/// Canonical serialization used everywhere (2-space indent, ordered keys,
/// trailing newline) so identical documents are identical bytes.
std::string dump_document(const nlohmann::json& doc);

Mat load_operator(const std::string& path);
FrameSystem load_frame(const std::string& path);
Subspace load_subspace(const std::string& path);

}  // namespace kframe
