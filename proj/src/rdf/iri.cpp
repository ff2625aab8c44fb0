#include "kgf/rdf/iri.hpp"

#include <cctype>

namespace kgf::rdf {

namespace {

// Splits an IRI into scheme, authority (with leading "//"), path, query
// (with "?"), fragment (with "#"). Empty string means "absent".
struct IriParts {
  std::string scheme;
  std::string authority;
  std::string path;
  std::string query;
  std::string fragment;
};

IriParts split_iri(const std::string& s) {
  IriParts p;
  std::size_t i = 0;
  // scheme
  if (!s.empty() && std::isalpha(static_cast<unsigned char>(s[0]))) {
    std::size_t j = 1;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '+' ||
            s[j] == '-' || s[j] == '.'))
      ++j;
    if (j < s.size() && s[j] == ':') {
      p.scheme = s.substr(0, j);
      i = j + 1;
    }
  }
  if (s.compare(i, 2, "//") == 0) {
    std::size_t j = i + 2;
    while (j < s.size() && s[j] != '/' && s[j] != '?' && s[j] != '#') ++j;
    p.authority = s.substr(i, j - i);
    i = j;
  }
  std::size_t j = i;
  while (j < s.size() && s[j] != '?' && s[j] != '#') ++j;
  p.path = s.substr(i, j - i);
  i = j;
  if (i < s.size() && s[i] == '?') {
    j = i;
    while (j < s.size() && s[j] != '#') ++j;
    p.query = s.substr(i, j - i);
    i = j;
  }
  if (i < s.size() && s[i] == '#') p.fragment = s.substr(i);
  return p;
}

std::string remove_dot_segments(const std::string& path) {
  std::string input = path;
  std::string output;
  while (!input.empty()) {
    if (input.rfind("../", 0) == 0)
      input.erase(0, 3);
    else if (input.rfind("./", 0) == 0)
      input.erase(0, 2);
    else if (input.rfind("/./", 0) == 0)
      input.replace(0, 3, "/");
    else if (input == "/.")
      input = "/";
    else if (input.rfind("/../", 0) == 0 || input == "/..") {
      input.replace(0, input == "/.." ? 3 : 4, "/");
      auto pos = output.find_last_of('/');
      output.erase(pos == std::string::npos ? 0 : pos);
    } else if (input == "." || input == "..")
      input.clear();
    else {
      std::size_t next = input.find('/', 1);
      output += input.substr(0, next);
      input.erase(0, next == std::string::npos ? input.size() : next);
    }
  }
  return output;
}

std::string merge_paths(const IriParts& base, const std::string& ref_path) {
  if (!base.authority.empty() && base.path.empty()) return "/" + ref_path;
  auto pos = base.path.find_last_of('/');
  if (pos == std::string::npos) return ref_path;
  return base.path.substr(0, pos + 1) + ref_path;
}

}  // namespace

bool is_absolute_iri(const std::string& iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0])))
    return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    char c = iri[i];
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return false;
  }
  return false;
}

std::string resolve_iri(const std::string& base, const std::string& reference) {
  IriParts r = split_iri(reference);
  IriParts b = split_iri(base);
  IriParts t;
  if (!r.scheme.empty()) {
    t = r;
    t.path = remove_dot_segments(r.path);
  } else {
    t.scheme = b.scheme;
    if (!r.authority.empty()) {
      t.authority = r.authority;
      t.path = remove_dot_segments(r.path);
      t.query = r.query;
    } else if (r.path.empty()) {
      t.authority = b.authority;
      t.path = b.path;
      t.query = r.query.empty() ? b.query : r.query;
    } else {
      t.authority = b.authority;
      t.path = r.path[0] == '/' ? remove_dot_segments(r.path)
                                : remove_dot_segments(merge_paths(b, r.path));
      t.query = r.query;
    }
  }
  t.fragment = r.fragment;
  std::string out;
  if (!t.scheme.empty()) out += t.scheme + ":";
  out += t.authority;
  out += t.path;
  out += t.query;
  out += t.fragment;
  return out;
}

}  // namespace kgf::rdf
