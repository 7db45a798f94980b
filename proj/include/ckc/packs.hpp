#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ckc/registry.hpp"

namespace ckc {

struct PackManifest {
  std::string id;
  std::string description;
  std::vector<std::string> languages;
  std::vector<std::string> conceptions;
  std::vector<std::string> problems;
  std::vector<std::string> translations;
  std::string reference;
  /// Expected results, each a compact JSON object with a `kind` of solve,
  /// relation, path, partition or egypt.
  std::vector<std::string> fixtures;
  std::string_view source;  // the pack text
};

/// addition, fractions and triangle, in that order.
const std::vector<PackManifest>& builtin_packs();
const PackManifest& builtin_pack(std::string_view name);
Registry load_builtin(std::string_view name);

/// `builtin:<name>` or a file path.
Registry load_pack_spec(std::string_view spec);

struct FixtureOutcome {
  std::size_t index = 0;
  std::string kind;
  bool passed = false;
  std::string detail;
};

/// Re-runs every fixture against the engine on the manifest's own registry.
std::vector<FixtureOutcome> replay_fixtures(const PackManifest& manifest);

/// Greedy unit-fraction decomposition of 0 < q <= 1: the unit fractions
/// 1/ceil(d/n), largest first. Throws std::domain_error out of range.
std::vector<Rational> egypt_decompose(const Rational& q);

}  // namespace ckc
