#pragma once

#include <compare>
#include <string>
#include <utility>

namespace kgf::rdf {

namespace ns {
inline constexpr const char* rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr const char* owl = "http://www.w3.org/2002/07/owl#";
inline constexpr const char* xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr const char* sh = "http://www.w3.org/ns/shacl#";
}  // namespace ns

namespace xsd {
inline const std::string string_ = "http://www.w3.org/2001/XMLSchema#string";
inline const std::string integer = "http://www.w3.org/2001/XMLSchema#integer";
inline const std::string decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline const std::string double_ = "http://www.w3.org/2001/XMLSchema#double";
inline const std::string boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline const std::string date = "http://www.w3.org/2001/XMLSchema#date";
inline const std::string dateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
}  // namespace xsd

inline const std::string rdf_langString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

enum class TermKind { Iri, Blank, Literal };

/// One RDF term. Literals carry an explicit datatype (xsd:string when the
/// source gave none); a nonempty language tag implies rdf:langString.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;     // IRI string, blank node label, or lexical form
  std::string datatype;  // literals only
  std::string language;  // literals only, lowercased

  static Term iri(std::string v) {
    return Term{TermKind::Iri, std::move(v), {}, {}};
  }
  static Term blank(std::string label) {
    return Term{TermKind::Blank, std::move(label), {}, {}};
  }
  static Term literal(std::string lexical, std::string datatype = xsd::string_) {
    return Term{TermKind::Literal, std::move(lexical), std::move(datatype), {}};
  }
  static Term lang_literal(std::string lexical, std::string lang);

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_blank() const { return kind == TermKind::Blank; }
  bool is_literal() const { return kind == TermKind::Literal; }

  auto operator<=>(const Term&) const = default;
};

inline Term Term::lang_literal(std::string lexical, std::string lang) {
  for (auto& c : lang)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return Term{TermKind::Literal, std::move(lexical), rdf_langString,
              std::move(lang)};
}

}  // namespace kgf::rdf
