#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kbp {

/// Where a candidate or predicted object came from. QA and RE only appear on
/// baseline predictions.
enum class Source : std::uint8_t { LM = 1, KG = 2, NER = 4, QA = 8, RE = 16 };

std::string_view to_string(Source s);
std::optional<Source> parse_source(std::string_view name);

class SourceSet {
 public:
  constexpr SourceSet() = default;
  constexpr SourceSet(Source s) : bits_(static_cast<std::uint8_t>(s)) {}  // NOLINT: implicit by intent

  constexpr bool contains(Source s) const { return (bits_ & static_cast<std::uint8_t>(s)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr void insert(Source s) { bits_ |= static_cast<std::uint8_t>(s); }
  constexpr SourceSet operator|(SourceSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr SourceSet& operator|=(SourceSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr bool operator==(const SourceSet&) const = default;
  constexpr std::uint8_t bits() const { return bits_; }

  /// Members in canonical order LM, KG, NER, QA, RE.
  std::vector<Source> members() const;
  std::vector<std::string> names() const;

 private:
  static constexpr SourceSet from_bits(unsigned b) {
    SourceSet s;
    s.bits_ = static_cast<std::uint8_t>(b);
    return s;
  }
  std::uint8_t bits_ = 0;
};

enum class NerLabel { PER, LOC, ORG };

std::string_view to_string(NerLabel l);
std::optional<NerLabel> parse_ner_label(std::string_view name);

struct InputPair {
  std::string subject;
  std::string relation;
  bool operator==(const InputPair&) const = default;
  auto operator<=>(const InputPair& o) const {
    if (auto c = relation <=> o.relation; c != 0) return c;
    return subject <=> o.subject;
  }
};

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;
  bool operator==(const Triple&) const = default;
};

/// One gold object with its accepted surface forms; the first alias is the
/// canonical surface used for generated training targets.
using AliasSet = std::vector<std::string>;

struct GoldRecord {
  InputPair pair;
  std::vector<AliasSet> gold_objects;
  bool operator==(const GoldRecord&) const = default;
};

struct PredictedObject {
  std::string surface;
  SourceSet sources;
  std::optional<double> score;     // mean entailment for satori, backend score for baselines
  std::optional<double> lm_score;
};

}  // namespace kbp
