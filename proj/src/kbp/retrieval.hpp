#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/backends/backends.hpp"
#include "kbp/registry.hpp"
#include "kbp/types.hpp"

namespace kbp {

inline constexpr int kDefaultPremiseCount = 3;

struct Premise {
  std::string text;  // raw snippet
  int rank = 1;      // 1-based engine rank within its query
  std::string title;
  std::string url;
  std::string query;
  std::string retrieved_at;  // ISO-8601 UTC
  bool operator==(const Premise&) const = default;
};

/// Rendered t_search for the pair.
std::string build_query(const InputPair& pair, const Registry& registry);

/// Offline store of premises keyed by exact query string, persisted as JSONL
/// {"query","rank","title","url","snippet","retrieved_at"}. A query whose
/// search found nothing is stored as a single {"query","rank":0} row. Reads may run
/// concurrently; writes take an exclusive lock.
class PremiseCache {
 public:
  PremiseCache() = default;
  PremiseCache(PremiseCache&& o) noexcept : entries_(std::move(o.entries_)) {}
  PremiseCache& operator=(PremiseCache&& o) noexcept {
    entries_ = std::move(o.entries_);
    return *this;
  }
  static PremiseCache load(const std::filesystem::path& path);

  std::optional<std::vector<Premise>> get(const std::string& query) const;
  void put(const std::string& query, std::vector<Premise> premises);
  bool contains(const std::string& query) const;
  std::size_t size() const;

  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::vector<Premise>> entries_;
};

std::string utc_timestamp_now();

/// Cache hit returns the cached premises (first k); a miss, or refresh, asks
/// the search backend and stores the answer. Fewer than k premises are
/// returned as-is. A backend failure with nothing cached is a RetrievalError.
std::vector<Premise> fetch_premises(const InputPair& pair, const Registry& registry, int k,
                                    const SearchBackend* search, PremiseCache& cache, bool refresh = false);

}  // namespace kbp
