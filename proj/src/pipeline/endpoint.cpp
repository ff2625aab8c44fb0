#include "kgf/pipeline/endpoint.hpp"

#include <algorithm>
#include <cctype>

#include "httplib.h"

#include "kgf/error.hpp"
#include "kgf/query/parser.hpp"
#include "kgf/query/results.hpp"

namespace kgf::pipeline {

namespace {

/// First word of the query with comments and leading whitespace stripped,
/// uppercased; used to reject SPARQL Update requests before parsing.
std::string first_keyword(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  std::string word;
  while (i < text.size() &&
         (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_'))
    word += static_cast<char>(
        std::toupper(static_cast<unsigned char>(text[i++])));
  return word;
}

bool is_update_keyword(const std::string& keyword) {
  static const char* kUpdateVerbs[] = {"INSERT", "DELETE", "LOAD", "CLEAR",
                                       "CREATE", "DROP",   "MOVE", "COPY",
                                       "ADD",    "WITH"};
  return std::find(std::begin(kUpdateVerbs), std::end(kUpdateVerbs), keyword) !=
         std::end(kUpdateVerbs);
}

}  // namespace

struct SparqlEndpoint::Impl {
  httplib::Server server;
};

SparqlEndpoint::SparqlEndpoint(const store::TripleStore& store)
    : store_(store), impl_(std::make_unique<Impl>()) {
  auto answer = [this](const std::string& query_text, httplib::Response& res) {
    std::string keyword = first_keyword(query_text);
    if (is_update_keyword(keyword)) {
      res.status = 405;
      res.set_content("this endpoint is read-only; SPARQL Update is not "
                      "accepted",
                      "text/plain");
      return;
    }
    try {
      query::Query query = query::parse_query(query_text);
      query::QueryResult result = query::evaluate(query, store_);
      std::string body =
          query::serialize_result(result, query::ResultFormat::SparqlJson);
      res.set_content(body, result.form == query::QueryForm::Construct
                                ? "text/turtle"
                                : "application/sparql-results+json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  };

  impl_->server.Get("/sparql", [answer](const httplib::Request& req,
                                        httplib::Response& res) {
    if (!req.has_param("query")) {
      res.status = 400;
      res.set_content("missing query parameter", "text/plain");
      return;
    }
    answer(req.get_param_value("query"), res);
  });
  impl_->server.Post("/sparql", [answer](const httplib::Request& req,
                                         httplib::Response& res) {
    answer(req.body, res);
  });
  auto method_not_allowed = [](const httplib::Request&,
                               httplib::Response& res) {
    res.status = 405;
    res.set_content("this endpoint is read-only", "text/plain");
  };
  impl_->server.Put("/sparql", method_not_allowed);
  impl_->server.Delete("/sparql", method_not_allowed);
  impl_->server.Patch("/sparql", method_not_allowed);
}

SparqlEndpoint::~SparqlEndpoint() { stop(); }

bool SparqlEndpoint::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ < 0) return false;
  } else {
    if (!impl_->server.bind_to_port(host, port)) return false;
    port_ = port;
  }
  server_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return true;
}

void SparqlEndpoint::stop() {
  if (server_thread_.joinable()) {
    impl_->server.stop();
    server_thread_.join();
  }
}

}  // namespace kgf::pipeline
