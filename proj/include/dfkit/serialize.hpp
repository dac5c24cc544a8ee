// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file serialize.hpp
 * @brief JSON documents for representations, lambda reports, estimator
 *        statistics, optimizer traces and configuration.
 *
 * Matrices are nested row-major arrays. Every document carries
 * `schema_version`.
 */

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dfkit/lcu.hpp"
#include "dfkit/measure.hpp"
#include "dfkit/rcdf.hpp"
#include "dfkit/xdf.hpp"

namespace dfkit {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json to_json(const DFRepresentation& rep);
/// Throws ParseError on missing fields or inconsistent shapes.
DFRepresentation representation_from_json(const Json& j);

Json to_json(const LambdaReport& r);
Json to_json(const EstimatorStats& s);
Json to_json(const TraceRecord& r);

/// Overrides the fields present in `j`; unknown keys are a ParseError.
void apply_json(const Json& j, OptimizerConfig& opt);
void apply_json(const Json& j, RegularizationConfig& reg);

Json parse_json_file(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dfkit
