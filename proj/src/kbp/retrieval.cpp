#include "kbp/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>

#include "kbp/errors.hpp"
#include "kbp/jsonl.hpp"
#include "kbp/template.hpp"

namespace kbp {

std::string build_query(const InputPair& pair, const Registry& registry) {
  return render_template(registry.at(pair.relation).search_template, pair.subject);
}

PremiseCache PremiseCache::load(const std::filesystem::path& path) {
  PremiseCache cache;
  io::for_each_jsonl(path, [&](const nlohmann::json& row, std::size_t lineno) {
    Premise p;
    p.query = row.at("query").get<std::string>();
    p.rank = row.at("rank").get<int>();
    auto& list = cache.entries_[p.query];
    if (p.rank == 0) return;  // the search ran and found nothing
    if (p.rank < 0) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative rank");
    p.title = row.value("title", std::string{});
    p.url = row.value("url", std::string{});
    p.text = row.at("snippet").get<std::string>();
    p.retrieved_at = row.value("retrieved_at", std::string{});
    if (p.text.empty()) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": empty snippet");
    for (const auto& existing : list)
      if (existing.rank == p.rank)
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": duplicate rank for query '" + p.query + "'");
    list.push_back(std::move(p));
  });
  for (auto& [query, list] : cache.entries_)
    std::sort(list.begin(), list.end(), [](const Premise& a, const Premise& b) { return a.rank < b.rank; });
  return cache;
}

std::optional<std::vector<Premise>> PremiseCache::get(const std::string& query) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(query);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PremiseCache::put(const std::string& query, std::vector<Premise> premises) {
  std::unique_lock lock(mu_);
  entries_[query] = std::move(premises);
}

bool PremiseCache::contains(const std::string& query) const {
  std::shared_lock lock(mu_);
  return entries_.count(query) != 0;
}

std::size_t PremiseCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::string PremiseCache::to_jsonl() const {
  std::shared_lock lock(mu_);
  std::string out;
  for (const auto& [query, list] : entries_) {
    if (list.empty()) {
      out += nlohmann::json{{"query", query}, {"rank", 0}}.dump();
      out += '\n';
    }
    for (const auto& p : list) {
      nlohmann::json row{{"query", query},     {"rank", p.rank},         {"title", p.title},
                         {"url", p.url},       {"snippet", p.text},      {"retrieved_at", p.retrieved_at}};
      out += row.dump();
      out += '\n';
    }
  }
  return out;
}

void PremiseCache::save(const std::filesystem::path& path) const { io::write_file_atomic(path, to_jsonl()); }

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<Premise> fetch_premises(const InputPair& pair, const Registry& registry, int k,
                                    const SearchBackend* search, PremiseCache& cache, bool refresh) {
  if (k < 1) throw ConfigError("premise count k must be at least 1");
  const auto query = build_query(pair, registry);
  auto cached = cache.get(query);
  if (cached && !refresh) {
    if (static_cast<int>(cached->size()) > k) cached->resize(static_cast<std::size_t>(k));
    return *cached;
  }
  if (!search) {
    if (cached) return *cached;
    throw MissingCacheError("no cached premises for query '" + query + "' and no search backend configured");
  }
  std::vector<SearchHit> hits;
  try {
    hits = search->web_search(query, k);
  } catch (const Error& e) {
    if (cached) return *cached;
    throw RetrievalError("search failed for '" + query + "': " + e.what());
  }
  const auto stamp = utc_timestamp_now();
  std::vector<Premise> premises;
  int rank = 0;
  for (auto& h : hits) {
    if (static_cast<int>(premises.size()) == k) break;
    ++rank;
    if (h.snippet.empty()) continue;
    premises.push_back({std::move(h.snippet), rank, std::move(h.title), std::move(h.url), query, stamp});
  }
  cache.put(query, premises);
  return premises;
}

}  // namespace kbp
