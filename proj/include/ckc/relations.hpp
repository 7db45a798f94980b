#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckc/registry.hpp"
#include "ckc/solver.hpp"

namespace ckc {

enum class RelationKind { Generality, Falsity, SameObject };

std::string to_string(RelationKind k);
RelationKind parse_relation_kind(std::string_view s);

/// A prototype that made a relation fail, and why.
struct Counterexample {
  std::string conception;  // owner of the prototype
  std::string prototype;
  Term term;
  std::optional<Term> translated;
  std::string reason;
};

/// The tuple (p, r, sigma, sigma') that makes C false from the point of view
/// of C', with every intermediate term.
struct FalsityWitness {
  std::string prototype;
  Term problem;
  /// Operator applications from `problem` to `rewritten`; length 1 unless the
  /// sequence extension is enabled.
  std::vector<WitnessStep> steps;
  Term rewritten;
  std::string sigma;
  Term translated;
  std::string sigma_prime;
};

struct TranslationFailure {
  std::string prototype;
  Term term;
  std::string reason;
};

/// Every relation report names the translations it is relative to.
struct RelationReport {
  RelationKind relation = RelationKind::Generality;
  bool holds = false;
  std::vector<std::string> translations_used;
  std::optional<Counterexample> counterexample;
  std::optional<FalsityWitness> witness;
  std::vector<TranslationFailure> skipped;
};

/// C is more general than C' relative to f: L' -> L when every prototype of
/// P' translates into a member of P. Membership patterns of P' are not
/// subsumed symbolically. Throws std::invalid_argument on a language mismatch.
RelationReport more_general(const Conception& c, const Conception& c_prime, const Translation& f);

struct FalsityOptions {
  /// Length of the operator sequence r; 1 follows the definition literally.
  int max_sequence = 1;
};

/// Searches prototypes p of C and applications r of C's operators for a
/// state its step controls judge valid whose translation C' judges invalid.
/// Untranslatable candidates are recorded in `skipped`, not counted as false.
RelationReport falsity(const Conception& c, const Conception& c_prime, const Translation& f,
                       const FalsityOptions& options = {});

/// Re-executes a falsity witness and checks valid-then-invalid.
bool replay_falsity(const Conception& c, const Conception& c_prime, const Translation& f,
                    const FalsityWitness& w);

/// C and C' have the same object w.r.t. C_a when their translated prototype
/// sets coincide. f: L -> L_a, f_prime: L' -> L_a.
RelationReport same_object(const Conception& c, const Conception& c_prime, const Conception& c_a,
                           const Translation& f, const Translation& f_prime);

struct ConceptMember {
  std::string conception;
  std::string translation;  // route into the reference language, "" if none
};

struct ConceptClass {
  std::string id;
  std::vector<ConceptMember> members;
  /// Reference conception, empty for "unrelated, no translation" singletons.
  std::string reference;
  bool unrelated = false;
};

/// Union-find over all non-reference conceptions under same_object with
/// respect to each conception's reference. A conception is routed to the
/// first reference its language reaches (identity, declared translation or a
/// declared two-step chain); conceptions reaching none form flagged
/// singletons. Pair checks run in parallel; the reduction is in pair order.
std::vector<ConceptClass> concept_partition(const Registry& reg);

namespace serial {
std::vector<ConceptClass> concept_partition(const Registry& reg);
}

class KnowingError : public Error {
 public:
  using Error::Error;
};

struct Knowing {
  std::string label;
  std::string subject;
  std::vector<std::string> members;
  std::string concept_class;
};

/// Validates that `members` lie in one concept class of the partition.
Knowing define_knowing(const Registry& reg, std::string label, std::string subject,
                       std::vector<std::string> members);

}  // namespace ckc
