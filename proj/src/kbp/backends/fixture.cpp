#include "kbp/backends/fixture.hpp"

#include <algorithm>
#include <fstream>

#include "kbp/errors.hpp"
#include "kbp/text.hpp"

namespace kbp {

namespace {

using nlohmann::json;

const json& empty_object() {
  static const json kEmpty = json::object();
  return kEmpty;
}

const json& section_of(const json& doc, const char* name) {
  return doc.contains(name) ? doc[name] : empty_object();
}

EntailmentLogits parse_logits(const json& j) {
  return {j.at("entail").get<double>(), j.at("contradiction").get<double>(), j.value("neutral", 0.0)};
}

// Code point offset of the first occurrence of needle in hay, or -1.
long find_codepoints(std::string_view hay, std::string_view needle) {
  const auto h = text::decode_utf8(hay);
  const auto n = text::decode_utf8(needle);
  const auto pos = h.find(n);
  return pos == std::u32string::npos ? -1 : static_cast<long>(pos);
}

}  // namespace

FixtureSearch::FixtureSearch(const json& section) {
  for (const auto& [query, hits] : section.items()) {
    auto& rows = table_[query];
    for (const auto& h : hits)
      rows.push_back({h.value("title", std::string{}), h.value("url", std::string{}), h.at("snippet").get<std::string>()});
  }
}

std::vector<SearchHit> FixtureSearch::web_search(std::string_view query, int k) const {
  if (k < 1) throw ContractError("web_search k must be positive");
  auto it = table_.find(query);
  if (it == table_.end()) return {};
  const auto n = std::min<std::size_t>(it->second.size(), static_cast<std::size_t>(k));
  return {it->second.begin(), it->second.begin() + static_cast<long>(n)};
}

FixtureMaskFill::FixtureMaskFill(const json& section) {
  for (const auto& [prompt, results] : section.items()) {
    auto& rows = table_[prompt];
    for (const auto& r : results) rows.push_back({r.at("token").get<std::string>(), r.at("score").get<double>()});
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  }
}

std::vector<MaskFillResult> FixtureMaskFill::fill_mask(std::string_view prompt, int top_n) const {
  check_mask_prompt(prompt);
  if (top_n < 1) throw ContractError("fill_mask top_n must be positive");
  auto it = table_.find(prompt);
  if (it == table_.end()) return {};
  const auto n = std::min<std::size_t>(it->second.size(), static_cast<std::size_t>(top_n));
  std::vector<MaskFillResult> out(it->second.begin(), it->second.begin() + static_cast<long>(n));
  check_fill_mask_results(out, top_n);
  return out;
}

FixtureEntailment::FixtureEntailment(const json& section) {
  if (section.contains("entries"))
    for (const auto& e : section["entries"])
      table_[{e.at("premise").get<std::string>(), e.at("hypothesis").get<std::string>()}] = parse_logits(e);
  if (section.contains("default")) default_ = parse_logits(section["default"]);
}

EntailmentLogits FixtureEntailment::entail(std::string_view premise, std::string_view hypothesis) const {
  require_non_empty(premise, "premise");
  require_non_empty(hypothesis, "hypothesis");
  auto it = table_.find({std::string(premise), std::string(hypothesis)});
  EntailmentLogits out;
  if (it != table_.end()) {
    out = it->second;
  } else if (premise == hypothesis) {
    out = {4.0, -4.0, 0.0};
  } else if (default_) {
    out = *default_;
  } else {
    throw FixtureKeyError("no entailment fixture for hypothesis '" + std::string(hypothesis) + "'");
  }
  check_logits(out);
  return out;
}

FixtureNer::FixtureNer(const json& section) {
  for (const auto& [txt, spans] : section.items()) {
    auto& rows = table_[txt];
    for (const auto& s : spans) {
      NerSpan span;
      span.surface = s.at("surface").get<std::string>();
      const auto label = parse_ner_label(s.at("label").get<std::string>());
      if (!label) throw ParseError("NER fixture label must be PER, LOC or ORG");
      span.label = *label;
      if (s.contains("start")) {
        span.start = s.at("start").get<std::size_t>();
        span.end = s.at("end").get<std::size_t>();
      } else {
        const long pos = find_codepoints(txt, span.surface);
        if (pos < 0) throw ParseError("NER fixture surface '" + span.surface + "' not found in its text");
        span.start = static_cast<std::size_t>(pos);
        span.end = span.start + text::codepoint_length(span.surface);
      }
      rows.push_back(std::move(span));
    }
  }
}

std::vector<NerSpan> FixtureNer::ner(std::string_view text) const {
  require_non_empty(text, "NER text");
  auto it = table_.find(text);
  if (it == table_.end()) return {};
  check_ner_spans(text, it->second);
  return it->second;
}

FixtureQa::FixtureQa(const json& section) {
  if (section.contains("entries")) {
    for (const auto& e : section["entries"]) {
      QaAnswer a;
      const auto context = e.at("context").get<std::string>();
      a.answer = e.value("answer", std::string{});
      a.score = e.at("score").get<double>();
      if (e.contains("start")) {
        a.start = e.at("start").get<long>();
        a.end = e.at("end").get<long>();
      } else if (!a.answer.empty()) {
        a.start = find_codepoints(context, a.answer);
        if (a.start < 0) throw ParseError("QA fixture answer '" + a.answer + "' not found in its context");
        a.end = a.start + static_cast<long>(text::codepoint_length(a.answer));
      }
      table_[{e.at("question").get<std::string>(), context}] = a;
    }
  }
  if (section.contains("default")) {
    const auto& d = section["default"];
    QaAnswer a;
    a.answer = d.value("answer", std::string{});
    if (!a.answer.empty()) throw ParseError("QA fixture default must be the empty answer");
    a.score = d.value("score", 1.0);
    default_ = a;
  }
}

QaAnswer FixtureQa::qa(std::string_view question, std::string_view context) const {
  require_non_empty(question, "question");
  require_non_empty(context, "context");
  auto it = table_.find({std::string(question), std::string(context)});
  QaAnswer out;
  if (it != table_.end()) {
    out = it->second;
  } else if (default_) {
    out = *default_;
  } else {
    throw FixtureKeyError("no QA fixture for question '" + std::string(question) + "'");
  }
  check_qa_answer(context, out);
  return out;
}

FixtureRelationExtraction::FixtureRelationExtraction(const json& section) {
  for (const auto& [txt, triples] : section.items()) {
    auto& rows = table_[txt];
    for (const auto& t : triples)
      rows.push_back({t.at("subject").get<std::string>(), t.at("relation").get<std::string>(),
                      t.at("object").get<std::string>()});
  }
}

std::vector<ExtractedTriple> FixtureRelationExtraction::extract_relations(std::string_view text) const {
  require_non_empty(text, "relation extraction text");
  auto it = table_.find(text);
  if (it == table_.end()) return {};
  check_triples(it->second);
  return it->second;
}

FixtureKnowledgeGraph::FixtureKnowledgeGraph(const json& section) {
  for (const auto& [cls, labels] : section.items()) table_[cls] = dedup_labels(labels.get<std::vector<std::string>>());
}

std::vector<std::string> FixtureKnowledgeGraph::sparql_instances(std::string_view class_name) const {
  auto it = table_.find(class_name);
  if (it == table_.end()) return {};
  return it->second;
}

Backends make_fixture_backends(const json& doc) {
  try {
    Backends b;
    b.search = std::make_shared<FixtureSearch>(section_of(doc, "search"));
    b.mask_fill = std::make_shared<FixtureMaskFill>(section_of(doc, "fill_mask"));
    b.entailment = std::make_shared<FixtureEntailment>(section_of(doc, "entail"));
    b.ner = std::make_shared<FixtureNer>(section_of(doc, "ner"));
    b.qa = std::make_shared<FixtureQa>(section_of(doc, "qa"));
    b.relext = std::make_shared<FixtureRelationExtraction>(section_of(doc, "relext"));
    b.kg = std::make_shared<FixtureKnowledgeGraph>(section_of(doc, "sparql"));
    return b;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed fixture: ") + e.what());
  }
}

Backends load_fixture_backends(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return make_fixture_backends(doc);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace kbp
