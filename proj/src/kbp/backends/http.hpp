#pragma once

// HTTP JSON clients for the backend contracts. Model endpoints are POST with
// UTF-8 JSON bodies:
//   /fill-mask {"prompt","top_n"}            -> {"results":[{"token","score"}]}
//   /entail    {"premise","hypothesis"}      -> {"entail","contradiction","neutral"}
//   /ner       {"text"}                      -> {"spans":[{"surface","label","start","end"}]}
//   /qa        {"question","context"}        -> {"answer","score","start","end"}
//   /relext    {"text"}                      -> {"triples":[{"subject","relation","object"}]}
//   /search    {"query","k"}                 -> {"results":[{"title","url","snippet"}]}
// The knowledge graph is a SPARQL endpoint queried with GET and JSON results.
//
// Transport failures (connection errors, 429, 5xx) are retried with
// exponential backoff and then surface as TransportError. Other non-2xx
// answers and malformed bodies are ContractError.

#include <chrono>
#include <map>
#include <thread>
#include <string>

#include <nlohmann/json.hpp>

#include "kbp/backends/backends.hpp"
#include "kbp/errors.hpp"

namespace kbp {

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  double multiplier = 2.0;
};

template <class F>
auto with_retry(const RetryPolicy& policy, F&& call) -> decltype(call()) {
  auto delay = policy.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return call();
    } catch (const TransportError&) {
      if (attempt >= policy.max_retries) throw;
    }
    std::this_thread::sleep_for(delay);
    delay = std::chrono::milliseconds(static_cast<long>(static_cast<double>(delay.count()) * policy.multiplier));
  }
}

struct HttpEndpoint {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::map<std::string, std::string> headers;
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
};

class HttpJsonClient {
 public:
  explicit HttpJsonClient(HttpEndpoint endpoint);

  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;
  nlohmann::json get(const std::string& path, const std::multimap<std::string, std::string>& params) const;
  const HttpEndpoint& endpoint() const { return endpoint_; }

 private:
  HttpEndpoint endpoint_;
  std::string origin_;
  std::string prefix_;
};

class HttpMaskFill final : public MaskFillBackend {
 public:
  explicit HttpMaskFill(HttpEndpoint ep) : client_(std::move(ep)) {}
  std::vector<MaskFillResult> fill_mask(std::string_view prompt, int top_n) const override;

 private:
  HttpJsonClient client_;
};

class HttpEntailment final : public EntailmentBackend {
 public:
  explicit HttpEntailment(HttpEndpoint ep) : client_(std::move(ep)) {}
  EntailmentLogits entail(std::string_view premise, std::string_view hypothesis) const override;

 private:
  HttpJsonClient client_;
};

class HttpNer final : public NerBackend {
 public:
  explicit HttpNer(HttpEndpoint ep) : client_(std::move(ep)) {}
  std::vector<NerSpan> ner(std::string_view text) const override;

 private:
  HttpJsonClient client_;
};

class HttpQa final : public QaBackend {
 public:
  explicit HttpQa(HttpEndpoint ep) : client_(std::move(ep)) {}
  QaAnswer qa(std::string_view question, std::string_view context) const override;

 private:
  HttpJsonClient client_;
};

class HttpRelationExtraction final : public RelationExtractionBackend {
 public:
  explicit HttpRelationExtraction(HttpEndpoint ep) : client_(std::move(ep)) {}
  std::vector<ExtractedTriple> extract_relations(std::string_view text) const override;

 private:
  HttpJsonClient client_;
};

class HttpSearch final : public SearchBackend {
 public:
  explicit HttpSearch(HttpEndpoint ep) : client_(std::move(ep)) {}
  std::vector<SearchHit> web_search(std::string_view query, int k) const override;

 private:
  HttpJsonClient client_;
};

/// SELECT ?y WHERE { ?y <typing predicate> <class> }. The class name is
/// inserted as given (IRI, CURIE or prefixed name); rdf: is always declared.
std::string build_sparql_query(std::string_view class_name, std::string_view typing_predicate = "rdf:type");

/// Labels from SPARQL JSON results: literal values as-is, IRIs reduced to
/// their local name.
std::vector<std::string> parse_sparql_labels(const nlohmann::json& results, const std::string& variable = "y");

class SparqlKnowledgeGraph final : public KnowledgeGraphBackend {
 public:
  SparqlKnowledgeGraph(HttpEndpoint ep, std::string typing_predicate = "rdf:type")
      : client_(std::move(ep)), predicate_(std::move(typing_predicate)) {}
  std::vector<std::string> sparql_instances(std::string_view class_name) const override;

 private:
  HttpJsonClient client_;
  std::string predicate_;
};

}  // namespace kbp
