#include "ckc/registry.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ckc {

using nlohmann::json;

namespace {

std::string summarize(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  os << issues.size() << " validation error" << (issues.size() == 1 ? "" : "s");
  for (const auto& i : issues) os << "\n  " << i.location << ": " << i.reason;
  return os.str();
}

bool valid_id(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') return false;
  return true;
}

/// Collects issues while walking the pack JSON.
class Loader {
 public:
  explicit Loader(std::string_view origin) : origin_(origin) {}

  std::vector<ValidationIssue> issues;

  void fail(std::string id, std::string location, std::string reason) {
    issues.push_back({std::move(id), std::move(location), std::move(reason)});
  }

  std::optional<std::string> str(const json& obj, const char* key, const std::string& id,
                                 const std::string& loc, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(id, loc, std::string("missing field '") + key + "'");
      return std::nullopt;
    }
    if (!it->is_string()) {
      fail(id, loc + "." + key, "expected a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  const json* array(const json& obj, const char* key, const std::string& id, const std::string& loc) {
    auto it = obj.find(key);
    if (it == obj.end()) return nullptr;
    if (!it->is_array()) {
      fail(id, loc + "." + key, "expected an array");
      return nullptr;
    }
    return &*it;
  }

  std::optional<Term> ground(const std::string& text, const std::string& id, const std::string& loc) {
    try {
      return parse_term(text);
    } catch (const SyntaxError& e) {
      fail(id, loc, std::string("syntax error: ") + e.what());
      return std::nullopt;
    }
  }

  std::optional<Term> pattern(const std::string& text, const std::string& id,
                              const std::string& loc, bool allow_eval) {
    try {
      Term p = parse_pattern(text);
      if (!check_evals(p, allow_eval, id, loc)) return std::nullopt;
      return p;
    } catch (const SyntaxError& e) {
      fail(id, loc, std::string("syntax error: ") + e.what());
      return std::nullopt;
    }
  }

  std::optional<PredExpr> guard(const json& obj, const std::string& id, const std::string& loc) {
    auto text = str(obj, "guard", id, loc, false);
    if (!text) return PredExpr();
    try {
      return PredExpr::parse(*text);
    } catch (const SyntaxError& e) {
      fail(id, loc + ".guard", std::string("syntax error: ") + e.what());
    } catch (const EvalError& e) {
      fail(id, loc + ".guard", e.what());
    }
    return std::nullopt;
  }

  void check_scope(const Term& binder, std::initializer_list<const std::set<std::string>*> uses,
                   const std::string& id, const std::string& loc) {
    const auto bound = variables_of(binder);
    std::set<std::string> reported;
    for (const auto* used : uses)
      for (const auto& v : *used)
        if (!bound.contains(v) && reported.insert(v).second)
          fail(id, loc, "unbound variable " + v);
  }

  void check_heads(const Language& lang, const Term& p, const std::string& id, const std::string& loc) {
    for (const auto& h : foreign_heads(lang, p))
      fail(id, loc, "head " + h + " not in language " + lang.id);
  }

  const std::string& origin() const { return origin_; }

 private:
  bool check_evals(const Term& t, bool allow_eval, const std::string& id, const std::string& loc) {
    bool ok = true;
    if (t.kind() == TermKind::EvalCall) {
      if (!allow_eval) {
        fail(id, loc, "eval call @" + t.name() + " not allowed in a pattern");
        ok = false;
      } else if (!is_arith_op(t.name())) {
        fail(id, loc, "unknown eval operator @" + t.name());
        ok = false;
      }
    }
    if (t.kind() == TermKind::Compound || t.kind() == TermKind::EvalCall)
      for (const auto& a : t.args()) ok = check_evals(a, allow_eval, id, loc) && ok;
    return ok;
  }

  std::string origin_;
};

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

bool Registry::is_reference(std::string_view conception_id) const {
  for (const auto& r : references_)
    if (r == conception_id) return true;
  return false;
}

LanguagePtr Registry::language(std::string_view id) const {
  for (const auto& l : languages_)
    if (l->id == id) return l;
  throw NotFound("unknown language '" + std::string(id) + "'");
}

const Conception* Registry::find_conception(std::string_view id) const {
  for (const auto& c : conceptions_)
    if (c.id == id) return &c;
  return nullptr;
}

const Conception& Registry::conception(std::string_view id) const {
  if (const auto* c = find_conception(id)) return *c;
  throw NotFound("unknown conception '" + std::string(id) + "'");
}

std::optional<std::size_t> Registry::conception_index(std::string_view id) const {
  for (std::size_t i = 0; i < conceptions_.size(); ++i)
    if (conceptions_[i].id == id) return i;
  return std::nullopt;
}

const Problem* Registry::find_problem(std::string_view id) const {
  for (const auto& p : problems_)
    if (p.id == id) return &p;
  return nullptr;
}

const Problem& Registry::problem(std::string_view id) const {
  if (const auto* p = find_problem(id)) return *p;
  throw NotFound("unknown problem '" + std::string(id) + "'");
}

Translation Registry::translation(std::string_view spec) const {
  std::optional<Translation> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto part = spec.substr(start, comma == std::string_view::npos ? spec.size() - start : comma - start);
    std::optional<Translation> next;
    if (part.starts_with("id:")) {
      next = Translation::identity(language(part.substr(3)));
    } else {
      for (const auto& t : translations_)
        if (t.id() == part) next = t;
      if (!next) throw NotFound("unknown translation '" + std::string(part) + "'");
    }
    out = out ? compose(*out, *next) : std::move(*next);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return *out;
}

std::vector<const Translation*> Registry::translations_between(std::string_view source,
                                                               std::string_view target) const {
  std::vector<const Translation*> out;
  for (const auto& t : translations_)
    if (t.source().id == source && t.target().id == target) out.push_back(&t);
  return out;
}

std::optional<Translation> Registry::route(std::string_view source, std::string_view target) const {
  if (source == target) return Translation::identity(language(source));
  if (auto direct = translations_between(source, target); !direct.empty()) return *direct.front();
  for (const auto& first : translations_) {
    if (first.source().id != source) continue;
    if (auto second = translations_between(first.target().id, target); !second.empty())
      return compose(first, *second.front());
  }
  return std::nullopt;
}

Registry Registry::merge(const std::vector<Registry>& parts) {
  Registry out;
  std::vector<ValidationIssue> issues;
  std::set<std::string> langs, trans, concs, probs;
  for (const auto& r : parts) {
    for (const auto& l : r.languages_) {
      if (!langs.insert(l->id).second) issues.push_back({l->id, "languages", "duplicate language id " + l->id});
      out.languages_.push_back(l);
    }
    for (const auto& t : r.translations_) {
      if (!trans.insert(t.id()).second) issues.push_back({t.id(), "translations", "duplicate translation id " + t.id()});
      out.translations_.push_back(t);
    }
    for (const auto& c : r.conceptions_) {
      if (!concs.insert(c.id).second) issues.push_back({c.id, "conceptions", "duplicate conception id " + c.id});
      out.conceptions_.push_back(c);
    }
    for (const auto& p : r.problems_) {
      if (!probs.insert(p.id).second) issues.push_back({p.id, "problems", "duplicate problem id " + p.id});
      out.problems_.push_back(p);
    }
    out.references_.insert(out.references_.end(), r.references_.begin(), r.references_.end());
    out.packs_.insert(out.packs_.end(), r.packs_.begin(), r.packs_.end());
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return out;
}

Registry load_pack_text(std::string_view text, std::string_view origin) {
  Loader ld(origin);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError({{"", std::string(origin), std::string("malformed pack: ") + e.what()}});
  }
  if (!doc.is_object()) throw ValidationError({{"", std::string(origin), "pack must be a JSON object"}});

  Registry reg;
  PackInfo info;
  info.id = doc.value("pack", std::string(origin));
  info.description = doc.value("description", std::string());
  reg.packs_.push_back(info);

  // Languages.
  std::set<std::string> seen;
  if (const json* arr = ld.array(doc, "languages", "", "languages")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const json& lj = (*arr)[i];
      const std::string loc = "languages[" + std::to_string(i) + "]";
      auto id = ld.str(lj, "id", "", loc);
      if (!id) continue;
      if (!valid_id(*id)) ld.fail(*id, loc, "invalid id");
      if (!seen.insert(*id).second) ld.fail(*id, loc, "duplicate language id " + *id);
      auto lang = std::make_shared<Language>();
      lang->id = *id;
      if (const json* sig = ld.array(lj, "signature", *id, loc)) {
        for (const auto& entry : *sig) {
          const std::string s = entry.is_string() ? entry.get<std::string>() : std::string();
          const auto slash = s.rfind('/');
          const std::string head = slash == std::string::npos ? "" : s.substr(0, slash);
          std::size_t arity = 0;
          bool ok = slash != std::string::npos && is_identifier(head) && slash + 1 < s.size();
          if (ok) {
            try {
              std::size_t used = 0;
              arity = std::stoul(s.substr(slash + 1), &used);
              ok = used == s.size() - slash - 1;
            } catch (const std::exception&) {
              ok = false;
            }
          }
          if (!ok) {
            ld.fail(*id, loc + ".signature", "expected \"head/arity\", got " + entry.dump());
            continue;
          }
          if (!lang->signature.emplace(head, arity).second)
            ld.fail(*id, loc + ".signature", "duplicate head " + head);
        }
      }
      if (const json* sorts = ld.array(lj, "atom_sorts", *id, loc)) {
        for (const auto& s : *sorts) {
          try {
            lang->atom_sorts.insert(parse_atom_sort(s.is_string() ? s.get<std::string>() : s.dump()));
          } catch (const std::invalid_argument& e) {
            ld.fail(*id, loc + ".atom_sorts", e.what());
          }
        }
      }
      if (lang->signature.empty() && lang->atom_sorts.empty())
        ld.fail(*id, loc, "language declares neither heads nor atom sorts");
      if (const json* cons = ld.array(lj, "constraints", *id, loc)) {
        for (std::size_t k = 0; k < cons->size(); ++k) {
          const std::string cloc = loc + ".constraints[" + std::to_string(k) + "]";
          auto ptext = ld.str((*cons)[k], "pattern", *id, cloc);
          if (!ptext) continue;
          auto pat = ld.pattern(*ptext, *id, cloc + ".pattern", false);
          auto g = ld.guard((*cons)[k], *id, cloc);
          if (!pat || !g) continue;
          const auto gv = g->variables();
          ld.check_scope(*pat, {&gv}, *id, cloc);
          lang->constraints.push_back({*pat, *g});
        }
      }
      reg.languages_.push_back(std::move(lang));
    }
  }

  auto find_lang = [&](const std::string& id) -> LanguagePtr {
    for (const auto& l : reg.languages_)
      if (l->id == id) return l;
    return nullptr;
  };

  auto load_rule = [&](const json& rj, const std::string& owner, const std::string& loc,
                       const Language* lhs_lang, const Language* rhs_lang,
                       const char* lhs_key, const char* rhs_key) -> std::optional<RewriteRule> {
    auto lt = ld.str(rj, lhs_key, owner, loc);
    auto rt = ld.str(rj, rhs_key, owner, loc);
    if (!lt || !rt) return std::nullopt;
    auto lhs = ld.pattern(*lt, owner, loc + "." + lhs_key, false);
    auto rhs = ld.pattern(*rt, owner, loc + "." + rhs_key, true);
    auto g = ld.guard(rj, owner, loc);
    if (!lhs || !rhs || !g) return std::nullopt;
    const auto rv = variables_of(*rhs);
    const auto gv = g->variables();
    ld.check_scope(*lhs, {&gv, &rv}, owner, loc);
    if (lhs_lang) ld.check_heads(*lhs_lang, *lhs, owner, loc + "." + lhs_key);
    if (rhs_lang) ld.check_heads(*rhs_lang, *rhs, owner, loc + "." + rhs_key);
    return RewriteRule{*lhs, *g, *rhs};
  };

  // Translations.
  seen.clear();
  if (const json* arr = ld.array(doc, "translations", "", "translations")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const json& tj = (*arr)[i];
      const std::string loc = "translations[" + std::to_string(i) + "]";
      auto id = ld.str(tj, "id", "", loc);
      if (!id) continue;
      if (!valid_id(*id) || id->starts_with("id:")) ld.fail(*id, loc, "invalid id");
      if (!seen.insert(*id).second) ld.fail(*id, loc, "duplicate translation id " + *id);
      auto src = ld.str(tj, "source", *id, loc);
      auto dst = ld.str(tj, "target", *id, loc);
      LanguagePtr sl = src ? find_lang(*src) : nullptr;
      LanguagePtr tl = dst ? find_lang(*dst) : nullptr;
      if (src && !sl) ld.fail(*id, loc + ".source", "unknown language " + *src);
      if (dst && !tl) ld.fail(*id, loc + ".target", "unknown language " + *dst);
      std::vector<RewriteRule> rules;
      if (const json* rs = ld.array(tj, "rules", *id, loc)) {
        for (std::size_t k = 0; k < rs->size(); ++k) {
          auto r = load_rule((*rs)[k], *id, loc + ".rules[" + std::to_string(k) + "]", sl.get(),
                             tl.get(), "lhs", "rhs");
          if (r) rules.push_back(std::move(*r));
        }
      }
      if (sl && tl) reg.translations_.emplace_back(*id, sl, tl, std::move(rules));
    }
  }

  // Conceptions.
  seen.clear();
  if (const json* arr = ld.array(doc, "conceptions", "", "conceptions")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const json& cj = (*arr)[i];
      const std::string loc = "conceptions[" + std::to_string(i) + "]";
      auto id = ld.str(cj, "id", "", loc);
      if (!id) continue;
      if (!valid_id(*id)) ld.fail(*id, loc, "invalid id");
      if (!seen.insert(*id).second) ld.fail(*id, loc, "duplicate conception id " + *id);
      Conception c;
      c.id = *id;
      c.description = cj.value("description", std::string());
      auto lname = ld.str(cj, "language", *id, loc);
      c.language = lname ? find_lang(*lname) : nullptr;
      if (lname && !c.language) ld.fail(*id, loc + ".language", "unknown language " + *lname);
      const Language* lang = c.language.get();

      const json empty = json::object();
      const json& pj = cj.contains("problems") ? cj["problems"] : empty;
      if (const json* ms = ld.array(pj, "membership", *id, loc + ".problems")) {
        for (std::size_t k = 0; k < ms->size(); ++k) {
          const std::string mloc = loc + ".problems.membership[" + std::to_string(k) + "]";
          auto ptext = ld.str((*ms)[k], "pattern", *id, mloc);
          if (!ptext) continue;
          auto pat = ld.pattern(*ptext, *id, mloc + ".pattern", false);
          auto g = ld.guard((*ms)[k], *id, mloc);
          if (!pat || !g) continue;
          const auto gv = g->variables();
          ld.check_scope(*pat, {&gv}, *id, mloc);
          if (lang) ld.check_heads(*lang, *pat, *id, mloc + ".pattern");
          c.problems.membership.push_back({*pat, *g});
        }
      }
      std::set<std::string> proto_names;
      if (const json* ps = ld.array(pj, "prototypes", *id, loc + ".problems")) {
        for (std::size_t k = 0; k < ps->size(); ++k) {
          const std::string ploc = loc + ".problems.prototypes[" + std::to_string(k) + "]";
          auto name = ld.str((*ps)[k], "name", *id, ploc);
          auto text = ld.str((*ps)[k], "term", *id, ploc);
          if (!name || !text) continue;
          if (!proto_names.insert(*name).second) ld.fail(*id, ploc, "duplicate prototype name " + *name);
          auto t = ld.ground(*text, *id, ploc + ".term");
          if (!t) continue;
          if (lang && !conforms(*lang, *t))
            ld.fail(*id, ploc + ".term", "prototype " + to_string(*t) + " does not conform to language " + lang->id);
          if (!c.problems.membership.empty()) {
            ProblemSet patterns_only{{}, c.problems.membership};
            if (!membership(patterns_only, *t))
              ld.fail(*id, ploc + ".term", "prototype " + to_string(*t) + " satisfies no membership pattern");
          }
          c.problems.prototypes.push_back({*name, *t});
        }
      }
      std::set<std::string> op_ids;
      if (const json* os = ld.array(cj, "operators", *id, loc)) {
        for (std::size_t k = 0; k < os->size(); ++k) {
          const std::string oloc = loc + ".operators[" + std::to_string(k) + "]";
          auto oid = ld.str((*os)[k], "id", *id, oloc);
          if (!oid) continue;
          if (!valid_id(*oid)) ld.fail(*id, oloc, "invalid operator id");
          if (!op_ids.insert(*oid).second) ld.fail(*id, oloc, "duplicate operator id " + *oid);
          auto r = load_rule((*os)[k], *id, oloc, lang, lang, "lhs", "rhs");
          if (r) c.operators.push_back({*oid, r->lhs, r->guard, r->rhs});
        }
      }
      std::set<std::string> control_ids;
      if (const json* cs = ld.array(cj, "controls", *id, loc)) {
        for (std::size_t k = 0; k < cs->size(); ++k) {
          const std::string kloc = loc + ".controls[" + std::to_string(k) + "]";
          const json& kj = (*cs)[k];
          auto kid = ld.str(kj, "id", *id, kloc);
          auto scope = ld.str(kj, "scope", *id, kloc);
          auto verdict = ld.str(kj, "verdict", *id, kloc);
          auto ptext = ld.str(kj, "pattern", *id, kloc);
          if (!kid || !scope || !verdict || !ptext) continue;
          if (!valid_id(*kid)) ld.fail(*id, kloc, "invalid control id");
          if (!control_ids.insert(*kid).second) ld.fail(*id, kloc, "duplicate control id " + *kid);
          Control ctl;
          ctl.id = *kid;
          try {
            ctl.scope = parse_control_scope(*scope);
            ctl.verdict = parse_verdict(*verdict);
          } catch (const std::invalid_argument& e) {
            ld.fail(*id, kloc, e.what());
            continue;
          }
          if (ctl.verdict == Verdict::Undecided)
            ld.fail(*id, kloc + ".verdict", "a control cannot emit undecided");
          if (ctl.scope == ControlScope::Step && ctl.verdict == Verdict::Solved)
            ld.fail(*id, kloc + ".verdict", "step controls emit valid or invalid only");
          auto pat = ld.pattern(*ptext, *id, kloc + ".pattern", false);
          auto g = ld.guard(kj, *id, kloc);
          if (!pat || !g) continue;
          const auto gv = g->variables();
          ld.check_scope(*pat, {&gv}, *id, kloc);
          if (lang) ld.check_heads(*lang, *pat, *id, kloc + ".pattern");
          ctl.pattern = *pat;
          ctl.guard = *g;
          c.controls.push_back(std::move(ctl));
        }
      }
      if (c.language) reg.conceptions_.push_back(std::move(c));
    }
  }

  // Translation rhs conformance over prototypes in the source language.
  for (const auto& t : reg.translations_) {
    for (const auto& c : reg.conceptions_) {
      if (c.language->id != t.source().id) continue;
      for (const auto& p : c.problems.prototypes) {
        try {
          translate(t, p.term);
        } catch (const TranslationError& e) {
          if (e.kind() == TranslationError::Kind::TargetViolation)
            ld.fail(t.id(), "translations", std::string(e.what()) + " (prototype " + p.name + " of " + c.id + ")");
        } catch (const EvalError& e) {
          ld.fail(t.id(), "translations",
                  std::string("evaluation error on prototype ") + p.name + " of " + c.id + ": " + e.what());
        }
      }
    }
  }

  // Problems.
  seen.clear();
  if (const json* arr = ld.array(doc, "problems", "", "problems")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string loc = "problems[" + std::to_string(i) + "]";
      auto id = ld.str((*arr)[i], "id", "", loc);
      auto lname = ld.str((*arr)[i], "language", id.value_or(""), loc);
      auto text = ld.str((*arr)[i], "term", id.value_or(""), loc);
      if (!id || !lname || !text) continue;
      if (!valid_id(*id)) ld.fail(*id, loc, "invalid id");
      if (!seen.insert(*id).second) ld.fail(*id, loc, "duplicate problem id " + *id);
      LanguagePtr lang = find_lang(*lname);
      if (!lang) ld.fail(*id, loc + ".language", "unknown language " + *lname);
      auto t = ld.ground(*text, *id, loc + ".term");
      if (!t) continue;
      if (lang && !conforms(*lang, *t))
        ld.fail(*id, loc + ".term", "problem " + to_string(*t) + " does not conform to language " + *lname);
      reg.problems_.push_back({*id, *lname, *t});
    }
  }

  if (auto it = doc.find("c_mu"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) {
      ld.fail("", "c_mu", "expected a conception id");
    } else {
      const auto ref = it->get<std::string>();
      bool found = false;
      for (const auto& c : reg.conceptions_) found = found || c.id == ref;
      if (!found) ld.fail(ref, "c_mu", "unknown conception " + ref);
      reg.references_.push_back(ref);
    }
  }

  if (!ld.issues.empty()) throw ValidationError(std::move(ld.issues));
  return reg;
}

Registry load_pack(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError({{"", file.string(), "cannot open pack file"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_pack_text(buf.str(), file.string());
}

}  // namespace ckc
