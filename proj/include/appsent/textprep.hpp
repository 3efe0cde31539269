#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace appsent::textprep {

struct TokenizedDocument {
  std::size_t doc_id = 0;
  std::vector<std::string> tokens;  // each matches [a-z]+
  std::size_t original_length = 0;  // code points in the raw text

  friend bool operator==(const TokenizedDocument&, const TokenizedDocument&) = default;
};

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One lowercase word per line; '#' starts a comment.
  static StopwordList parse(std::string_view text);
  /// Throws MissingFile.
  static StopwordList load(const std::string& path);

  bool contains(std::string_view word) const { return words_.count(std::string(word)) != 0; }
  std::size_t size() const noexcept { return words_.size(); }
  std::vector<std::string> sorted_words() const;

 private:
  std::unordered_set<std::string> words_;
};

/// The stopword list shipped in data/stopwords.txt.
std::shared_ptr<const StopwordList> default_stopwords();
/// Raw text of the shipped file.
std::string_view default_stopwords_text() noexcept;

/// Lowercase; drop markup tags, URLs and every character that is not an
/// ASCII letter or whitespace; collapse whitespace.
std::string normalize(std::string_view raw_text);

/// Splits normalized text on spaces. Never emits empty tokens.
std::vector<std::string> tokenize(std::string_view normalized);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stopwords);

/// Porter (1980) suffix stripping, following the author's reference C
/// implementation. Words of one or two letters are returned unchanged.
std::string stem(std::string_view token);

struct PrepConfig {
  bool remove_stopwords = true;
  bool stem = true;
  std::shared_ptr<const StopwordList> stopwords;  // null selects the default list
};

/// normalize -> tokenize -> remove_stopwords -> stem.
TokenizedDocument preprocess(std::string_view raw_text, const PrepConfig& config = {},
                             std::size_t doc_id = 0);

/// Token sequence for lexicon scoring: normalized and tokenized only.
std::vector<std::string> surface_tokens(std::string_view raw_text);

}  // namespace appsent::textprep
