#pragma once

#include <memory>
#include <string>
#include <thread>

#include "kgf/store/store.hpp"

namespace kgf::pipeline {

/// Read-only HTTP SPARQL endpoint over a triple store. Accepts GET /sparql
/// with a `query` parameter and POST /sparql with an application/sparql-query
/// body. SELECT and ASK answer application/sparql-results+json, CONSTRUCT
/// answers text/turtle. Malformed or unsupported queries get 400 with a
/// plain-text message; update verbs and write methods get 405.
class SparqlEndpoint {
 public:
  explicit SparqlEndpoint(const store::TripleStore& store);
  ~SparqlEndpoint();

  SparqlEndpoint(const SparqlEndpoint&) = delete;
  SparqlEndpoint& operator=(const SparqlEndpoint&) = delete;

  /// Binds and serves on a background thread. Returns false when the port
  /// cannot be bound. `port` 0 picks a free port (see port()).
  bool start(const std::string& host, int port);
  void stop();

  int port() const { return port_; }

 private:
  struct Impl;
  const store::TripleStore& store_;
  std::unique_ptr<Impl> impl_;
  std::thread server_thread_;
  int port_ = 0;
};

}  // namespace kgf::pipeline
