// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "absa/features.hpp"
#include "absa/parameter.hpp"

namespace absa {

struct NamedArray {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major
  friend bool operator==(const NamedArray&, const NamedArray&) = default;
};

/// Serialized trained model.
///
/// File layout: the 8 magic bytes "ABSABNDL", a little-endian uint64 header
/// length, a compact JSON header, then every array's doubles as
/// little-endian IEEE-754 binary64 in header order. The header carries
/// format_version, kind, hyperparams, config, vocabulary and the array
/// directory (name, rows, cols).
struct ModelBundle {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint32_t format_version = kFormatVersion;
  std::string kind;
  HyperParams hyper;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::string> vocabulary;
  std::vector<NamedArray> arrays;

  const NamedArray& array(const std::string& name) const;
  std::size_t parameter_count() const;
};

void write_bundle(std::ostream& out, const ModelBundle& bundle);
/// Throws DataError on a bad magic, a version mismatch, a truncated payload
/// or an array whose length disagrees with its shape.
ModelBundle read_bundle(std::istream& in);
void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_bundle(const std::filesystem::path& path);

nlohmann::ordered_json hyperparams_to_json(const HyperParams& hp);
HyperParams hyperparams_from_json(const nlohmann::ordered_json& j);

/// Copies parameter values into the bundle in order.
void store_parameters(ModelBundle& bundle, std::span<const Parameter* const> params);
/// Fills parameters by name; throws DataError on a missing name or a shape
/// mismatch.
void restore_parameters(const ModelBundle& bundle, std::span<Parameter* const> params);

}  // namespace absa
