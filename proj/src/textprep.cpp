#include "appsent/textprep.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "appsent/embedded_data.hpp"
#include "appsent/error.hpp"
#include "appsent/strings.hpp"

namespace appsent::textprep {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_scheme_char(char c) {
  return is_alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '.' || c == '-';
}

// A tag opens with '<' directly followed by a letter, '/' or '!'.
std::string strip_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<' && i + 1 < text.size() && (is_alpha(text[i + 1]) || text[i + 1] == '/' || text[i + 1] == '!')) {
      const auto close = text.find('>', i + 1);
      const auto reopen = text.find('<', i + 1);
      if (close != std::string_view::npos && (reopen == std::string_view::npos || close < reopen)) {
        out.push_back(' ');
        i = close + 1;
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

// Removes "scheme://..." and "www...." runs up to the next whitespace.
std::string strip_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const bool boundary = i == 0 || !is_scheme_char(text[i - 1]);
    std::size_t url_start = std::string_view::npos;
    if (boundary && is_alpha(text[i])) {
      std::size_t j = i;
      while (j < text.size() && is_scheme_char(text[j])) ++j;
      if (text.substr(j, 3) == "://") url_start = i;
      if (j - i >= 4 && iequals(text.substr(i, 4), "www.")) url_start = i;
    }
    if (url_start != std::string_view::npos) {
      while (i < text.size() && !is_space(text[i])) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(text[i++]);
  }
  return out;
}

}  // namespace

StopwordList StopwordList::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  for (const auto& raw : split(text, '\n')) {
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) words.insert(to_lower(line));
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<std::string> StopwordList::sorted_words() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view default_stopwords_text() noexcept { return embedded::kStopwords; }

std::shared_ptr<const StopwordList> default_stopwords() {
  static const auto list = std::make_shared<const StopwordList>(StopwordList::parse(embedded::kStopwords));
  return list;
}

std::string normalize(std::string_view raw_text) {
  const std::string cleaned = strip_urls(strip_tags(raw_text));
  std::string out;
  out.reserve(cleaned.size());
  bool pending_space = false;
  for (char c : cleaned) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else if (is_alpha(c)) {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < normalized.size()) {
    auto end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) tokens.emplace_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stopwords) {
  std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
  return tokens;
}

TokenizedDocument preprocess(std::string_view raw_text, const PrepConfig& config,
                             std::size_t doc_id) {
  TokenizedDocument doc;
  doc.doc_id = doc_id;
  for (char c : raw_text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++doc.original_length;
  }
  doc.tokens = tokenize(normalize(raw_text));
  if (config.remove_stopwords) {
    const auto& list = config.stopwords ? *config.stopwords : *default_stopwords();
    doc.tokens = remove_stopwords(std::move(doc.tokens), list);
  }
  if (config.stem) {
    for (auto& t : doc.tokens) t = stem(t);
  }
  return doc;
}

std::vector<std::string> surface_tokens(std::string_view raw_text) {
  return tokenize(normalize(raw_text));
}

}  // namespace appsent::textprep
