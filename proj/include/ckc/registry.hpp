#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckc/conception.hpp"

namespace ckc {

/// A named registry problem, stated in one language.
struct Problem {
  std::string id;
  std::string language;
  Term term;
};

struct PackInfo {
  std::string id;
  std::string description;
};

struct ValidationIssue {
  std::string id;        // offending item, or "" for the file itself
  std::string location;  // JSON-ish path into the pack
  std::string reason;
};

/// Load failure carrying every problem found. Loading is all-or-nothing.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Thrown by lookups of unknown ids.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Languages, translations, conceptions and problems from one or more packs.
/// Immutable once loaded; conception addresses are stable for its lifetime.
class Registry {
 public:
  const std::vector<LanguagePtr>& languages() const noexcept { return languages_; }
  const std::vector<Translation>& translations() const noexcept { return translations_; }
  const std::vector<Conception>& conceptions() const noexcept { return conceptions_; }
  const std::vector<Problem>& problems() const noexcept { return problems_; }
  /// Designated reference conceptions (one per pack that names one).
  const std::vector<std::string>& references() const noexcept { return references_; }
  const std::vector<PackInfo>& packs() const noexcept { return packs_; }

  bool is_reference(std::string_view conception_id) const;

  LanguagePtr language(std::string_view id) const;
  const Conception& conception(std::string_view id) const;
  const Problem& problem(std::string_view id) const;
  const Problem* find_problem(std::string_view id) const;
  const Conception* find_conception(std::string_view id) const;
  std::optional<std::size_t> conception_index(std::string_view id) const;

  /// A declared translation id, `id:<language>` for an identity, or a
  /// comma-separated chain `f,g` meaning g after f.
  Translation translation(std::string_view spec) const;

  /// Declared translations from `source` to `target` in declaration order.
  std::vector<const Translation*> translations_between(std::string_view source,
                                                       std::string_view target) const;

  /// A route from `source` to `target`: identity when equal, else the first
  /// declared direct translation, else the first declared two-step chain.
  std::optional<Translation> route(std::string_view source, std::string_view target) const;

  /// Union of several registries. Duplicate ids of the same kind are rejected.
  static Registry merge(const std::vector<Registry>& parts);

 private:
  friend Registry load_pack_text(std::string_view text, std::string_view origin);

  std::vector<LanguagePtr> languages_;
  std::vector<Translation> translations_;
  std::vector<Conception> conceptions_;
  std::vector<Problem> problems_;
  std::vector<std::string> references_;
  std::vector<PackInfo> packs_;
};

/// Parses and validates a pack (JSON object with `languages`, `translations`,
/// `conceptions`, `problems`, `c_mu`). Throws ValidationError.
Registry load_pack_text(std::string_view text, std::string_view origin = "<memory>");
Registry load_pack(const std::filesystem::path& file);

}  // namespace ckc
