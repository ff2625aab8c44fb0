#include "kgf/onto/lint.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace kgf::onto {

namespace {

// Transitive closure of the subclass relation as sub -> set of supers.
std::map<std::string, std::set<std::string>> superclass_closure(
    const Vocabulary& v) {
  std::map<std::string, std::set<std::string>> direct;
  for (const auto& [sub, super] : v.subclass_edges) direct[sub].insert(super);

  std::map<std::string, std::set<std::string>> closure = direct;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [sub, supers] : closure) {
      std::set<std::string> next = supers;
      for (const auto& mid : supers) {
        auto it = closure.find(mid);
        if (it == closure.end()) continue;
        next.insert(it->second.begin(), it->second.end());
      }
      if (next.size() != supers.size()) {
        supers = std::move(next);
        changed = true;
      }
    }
  }
  return closure;
}

std::set<std::string> all_properties(const Vocabulary& v) {
  std::set<std::string> props = v.object_properties;
  props.insert(v.datatype_properties.begin(), v.datatype_properties.end());
  props.insert(v.untyped_properties.begin(), v.untyped_properties.end());
  return props;
}

}  // namespace

std::string severity_name(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "info";
}

std::vector<LintFinding> lint(const Vocabulary& vocab) {
  std::vector<LintFinding> out;
  const auto closure = superclass_closure(vocab);
  const auto props = all_properties(vocab);

  // CYCLE-SUBCLASS: (X, X) in the transitive closure.
  for (const auto& [cls, supers] : closure) {
    if (supers.count(cls)) {
      out.push_back({"CYCLE-SUBCLASS", Severity::Error, cls,
                     "class participates in a subclass cycle"});
    }
  }

  // DUAL-PROPERTY-KIND: declared both object and datatype property.
  for (const auto& p : vocab.object_properties) {
    if (vocab.datatype_properties.count(p)) {
      out.push_back({"DUAL-PROPERTY-KIND", Severity::Error, p,
                     "property is declared both object and datatype property"});
    }
  }

  // DISJOINT-SUBCLASS: the class together with its transitive superclasses
  // contains a disjoint pair.
  for (const auto& cls : vocab.classes) {
    std::set<std::string> uppers{cls};
    auto it = closure.find(cls);
    if (it != closure.end())
      uppers.insert(it->second.begin(), it->second.end());
    bool clash = false;
    for (auto a = uppers.begin(); a != uppers.end() && !clash; ++a) {
      for (auto b = std::next(a); b != uppers.end(); ++b) {
        if (vocab.disjoint_pairs.count({*a, *b})) {
          out.push_back({"DISJOINT-SUBCLASS", Severity::Error, cls,
                         "class is a subclass of disjoint classes <" + *a +
                             "> and <" + *b + ">"});
          clash = true;
          break;
        }
      }
    }
  }

  // MISSING-DOMAIN / MISSING-RANGE: declared property without them.
  for (const auto& p : props) {
    if (!vocab.domains.count(p) || vocab.domains.at(p).empty()) {
      out.push_back({"MISSING-DOMAIN", Severity::Warning, p,
                     "property has no rdfs:domain"});
    }
    if (!vocab.ranges.count(p) || vocab.ranges.at(p).empty()) {
      out.push_back({"MISSING-RANGE", Severity::Warning, p,
                     "property has no rdfs:range"});
    }
  }

  // MISSING-LABEL: classes and properties without rdfs:label.
  auto needs_label = [&](const std::string& iri, const char* kind) {
    auto it = vocab.labels.find(iri);
    if (it == vocab.labels.end() || it->second.empty()) {
      out.push_back({"MISSING-LABEL", Severity::Info, iri,
                     std::string(kind) + " has no rdfs:label"});
    }
  };
  for (const auto& c : vocab.classes) needs_label(c, "class");
  for (const auto& p : props) needs_label(p, "property");

  // ORPHAN-CLASS: not referenced by any domain/range and by no subclass edge.
  std::set<std::string> used;
  for (const auto& [sub, super] : vocab.subclass_edges) {
    used.insert(sub);
    used.insert(super);
  }
  for (const auto& [p, ds] : vocab.domains) used.insert(ds.begin(), ds.end());
  for (const auto& [p, rs] : vocab.ranges) used.insert(rs.begin(), rs.end());
  for (const auto& c : vocab.classes) {
    if (!used.count(c)) {
      out.push_back({"ORPHAN-CLASS", Severity::Info, c,
                     "class is not used by any property or subclass edge"});
    }
  }

  std::sort(out.begin(), out.end(), [](const LintFinding& a,
                                       const LintFinding& b) {
    return std::tie(a.severity, a.code, a.subject, a.message) <
           std::tie(b.severity, b.code, b.subject, b.message);
  });
  return out;
}

std::string lint_report_json(const std::vector<LintFinding>& findings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : findings) {
    arr.push_back({{"code", f.code},
                   {"severity", severity_name(f.severity)},
                   {"subject", f.subject},
                   {"message", f.message}});
  }
  nlohmann::json doc{{"findings", arr}};
  std::size_t errors = 0, warnings = 0, infos = 0;
  for (const auto& f : findings) {
    if (f.severity == Severity::Error) ++errors;
    else if (f.severity == Severity::Warning) ++warnings;
    else ++infos;
  }
  doc["summary"] = {{"errors", errors}, {"warnings", warnings},
                    {"infos", infos}};
  return doc.dump(2) + "\n";
}

std::string lint_report_text(const std::vector<LintFinding>& findings) {
  std::string out;
  for (const auto& f : findings) {
    out += severity_name(f.severity);
    out += "  " + f.code + "  <" + f.subject + ">  " + f.message + "\n";
  }
  if (findings.empty()) out = "no findings\n";
  return out;
}

}  // namespace kgf::onto
