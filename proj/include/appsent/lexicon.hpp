#pragma once

// Dictionary sentiment scoring: polarity in [-1, 1], subjectivity in [0, 1].

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "appsent/corpus.hpp"

namespace appsent::lexicon {

struct LexiconEntry {
  std::string term;
  double polarity = 0.0;
  double subjectivity = 0.0;
  bool is_negator = false;
  bool is_intensifier = false;
  double factor = 1.0;  // intensifier multiplier

  bool sentiment_bearing() const noexcept { return !is_negator && !is_intensifier; }
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

class Lexicon {
 public:
  /// Replaces any entry for the same term.
  void insert(LexiconEntry entry);
  const LexiconEntry* find(std::string_view term) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const noexcept { return entries_; }

  /// Rows skipped while loading.
  std::vector<corpus::RowIssue> rejected;

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

/// Lines of `term,polarity,subjectivity[,negator|intensifier:<factor>]`; '#'
/// comments and blank lines are ignored. Rows violating a range are rejected
/// (recorded, not thrown); a repeated term keeps its last row and warns.
Lexicon parse_lexicon(std::string_view text);
/// Throws MissingFile.
Lexicon load_lexicon(const std::filesystem::path& path);
/// Parses a single row. Throws RangeViolation or BadFormat.
LexiconEntry parse_entry(std::string_view line);

/// The lexicon shipped in data/lexicon.csv.
std::shared_ptr<const Lexicon> default_lexicon();

enum class Orientation { Negative, Neutral, Positive };
std::string_view to_string(Orientation o) noexcept;
Orientation orientation_of(double polarity) noexcept;

struct SentimentScore {
  double polarity = 0.0;
  double subjectivity = 0.0;
  Orientation orientation = Orientation::Neutral;
  friend bool operator==(const SentimentScore&, const SentimentScore&) = default;
};

/// Tokens should keep stopwords and surface forms (see textprep::surface_tokens).
/// Each sentiment-bearing term contributes its polarity, scaled by the factor of
/// an intensifier directly before it and by -0.5 when a negator sits in the two
/// tokens before the term (or before its intensifier). Polarity and
/// subjectivity are the means over matched terms, clamped to their ranges.
SentimentScore score(std::span<const std::string> tokens, const Lexicon& lexicon);
SentimentScore score_text(std::string_view raw_text, const Lexicon& lexicon);

template <typename Record>
struct Scored {
  Record record;
  SentimentScore score;
};

std::vector<Scored<corpus::ReviewRecord>> score_corpus(const std::vector<corpus::ReviewRecord>& records,
                                                       const Lexicon& lexicon);
std::vector<Scored<corpus::StudentRecord>> score_corpus(const std::vector<corpus::StudentRecord>& records,
                                                        const Lexicon& lexicon);

}  // namespace appsent::lexicon
