#include "kbp/backends/http.hpp"

#include <regex>
#include <thread>

#include <httplib.h>

namespace kbp {

namespace {

using nlohmann::json;

json parse_body(const std::string& body, const std::string& what) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ContractError(what + ": response is not JSON: " + e.what());
  }
}

json check_result(const httplib::Result& res, const std::string& what) {
  if (!res) throw TransportError(what + ": " + httplib::to_string(res.error()));
  const int status = res->status;
  if (status == 429 || status >= 500) throw TransportError(what + ": HTTP " + std::to_string(status));
  if (status < 200 || status >= 300)
    throw ContractError(what + ": HTTP " + std::to_string(status) + ": " + res->body.substr(0, 200));
  return parse_body(res->body, what);
}

template <class T>
T field(const json& j, const char* name, const std::string& what) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ContractError(what + ": bad field '" + name + "': " + e.what());
  }
}

const json& array_field(const json& j, const char* name, const std::string& what) {
  if (!j.contains(name) || !j[name].is_array()) throw ContractError(what + ": missing list '" + name + "'");
  return j[name];
}

}  // namespace

HttpJsonClient::HttpJsonClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint_.base_url, m, kUrl)) throw ConfigError("invalid endpoint URL '" + endpoint_.base_url + "'");
  origin_ = m[1].str();
  prefix_ = m[2].matched ? m[2].str() : std::string{};
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

json HttpJsonClient::post(const std::string& path, const json& body) const {
  const std::string what = "POST " + origin_ + prefix_ + path;
  const std::string target = prefix_ + path;
  return with_retry(endpoint_.retry, [&] {
    httplib::Client cli(origin_);
    cli.set_connection_timeout(endpoint_.timeout);
    cli.set_read_timeout(endpoint_.timeout);
    httplib::Headers headers(endpoint_.headers.begin(), endpoint_.headers.end());
    return check_result(cli.Post(target.empty() ? "/" : target, headers, body.dump(), "application/json"), what);
  });
}

json HttpJsonClient::get(const std::string& path, const std::multimap<std::string, std::string>& params) const {
  const std::string what = "GET " + origin_ + prefix_ + path;
  const std::string target = prefix_ + path;
  return with_retry(endpoint_.retry, [&] {
    httplib::Client cli(origin_);
    cli.set_connection_timeout(endpoint_.timeout);
    cli.set_read_timeout(endpoint_.timeout);
    httplib::Headers headers(endpoint_.headers.begin(), endpoint_.headers.end());
    headers.emplace("Accept", "application/sparql-results+json");
    httplib::Params p(params.begin(), params.end());
    return check_result(cli.Get(target.empty() ? "/" : target, p, headers), what);
  });
}

std::vector<MaskFillResult> HttpMaskFill::fill_mask(std::string_view prompt, int top_n) const {
  check_mask_prompt(prompt);
  if (top_n < 1) throw ContractError("fill_mask top_n must be positive");
  const std::string what = "/fill-mask";
  const auto res = client_.post(what, {{"prompt", prompt}, {"top_n", top_n}});
  std::vector<MaskFillResult> out;
  for (const auto& r : array_field(res, "results", what))
    out.push_back({field<std::string>(r, "token", what), field<double>(r, "score", what)});
  check_fill_mask_results(out, top_n);
  return out;
}

EntailmentLogits HttpEntailment::entail(std::string_view premise, std::string_view hypothesis) const {
  require_non_empty(premise, "premise");
  require_non_empty(hypothesis, "hypothesis");
  const std::string what = "/entail";
  const auto res = client_.post(what, {{"premise", premise}, {"hypothesis", hypothesis}});
  EntailmentLogits out{field<double>(res, "entail", what), field<double>(res, "contradiction", what),
                       field<double>(res, "neutral", what)};
  check_logits(out);
  return out;
}

std::vector<NerSpan> HttpNer::ner(std::string_view text) const {
  require_non_empty(text, "NER text");
  const std::string what = "/ner";
  const auto res = client_.post(what, {{"text", text}});
  std::vector<NerSpan> out;
  for (const auto& s : array_field(res, "spans", what)) {
    const auto label = parse_ner_label(field<std::string>(s, "label", what));
    if (!label) throw ContractError(what + ": label must be PER, LOC or ORG");
    out.push_back({field<std::string>(s, "surface", what), *label, field<std::size_t>(s, "start", what),
                   field<std::size_t>(s, "end", what)});
  }
  check_ner_spans(text, out);
  return out;
}

QaAnswer HttpQa::qa(std::string_view question, std::string_view context) const {
  require_non_empty(question, "question");
  require_non_empty(context, "context");
  const std::string what = "/qa";
  const auto res = client_.post(what, {{"question", question}, {"context", context}});
  QaAnswer out{field<std::string>(res, "answer", what), field<double>(res, "score", what),
               field<long>(res, "start", what), field<long>(res, "end", what)};
  if (out.answer.empty()) out.start = out.end = -1;
  check_qa_answer(context, out);
  return out;
}

std::vector<ExtractedTriple> HttpRelationExtraction::extract_relations(std::string_view text) const {
  require_non_empty(text, "relation extraction text");
  const std::string what = "/relext";
  const auto res = client_.post(what, {{"text", text}});
  std::vector<ExtractedTriple> out;
  for (const auto& t : array_field(res, "triples", what))
    out.push_back({field<std::string>(t, "subject", what), field<std::string>(t, "relation", what),
                   field<std::string>(t, "object", what)});
  check_triples(out);
  return out;
}

std::vector<SearchHit> HttpSearch::web_search(std::string_view query, int k) const {
  if (k < 1) throw ContractError("web_search k must be positive");
  const std::string what = "/search";
  const auto res = client_.post(what, {{"query", query}, {"k", k}});
  std::vector<SearchHit> out;
  for (const auto& h : array_field(res, "results", what)) {
    if (static_cast<int>(out.size()) == k) break;
    out.push_back({h.value("title", std::string{}), h.value("url", std::string{}), field<std::string>(h, "snippet", what)});
  }
  return out;
}

std::string build_sparql_query(std::string_view class_name, std::string_view typing_predicate) {
  std::string q = "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n";
  q += "SELECT ?y WHERE { ?y ";
  q += typing_predicate;
  q += ' ';
  q += class_name;
  q += " }";
  return q;
}

std::vector<std::string> parse_sparql_labels(const json& results, const std::string& variable) {
  std::vector<std::string> labels;
  const std::string what = "SPARQL results";
  if (!results.contains("results") || !results["results"].contains("bindings"))
    throw ContractError(what + ": missing results.bindings");
  for (const auto& b : results["results"]["bindings"]) {
    if (!b.contains(variable)) continue;
    const auto& v = b[variable];
    auto value = field<std::string>(v, "value", what);
    if (v.value("type", std::string{}) == "uri") {
      const auto cut = value.find_last_of("/#");
      if (cut != std::string::npos && cut + 1 < value.size()) value = value.substr(cut + 1);
    }
    if (!value.empty()) labels.push_back(std::move(value));
  }
  return dedup_labels(std::move(labels));
}

std::vector<std::string> SparqlKnowledgeGraph::sparql_instances(std::string_view class_name) const {
  const auto res = client_.get("", {{"query", build_sparql_query(class_name, predicate_)}, {"format", "json"}});
  return parse_sparql_labels(res);
}

}  // namespace kbp
