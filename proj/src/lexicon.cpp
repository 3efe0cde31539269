#include "appsent/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "appsent/embedded_data.hpp"
#include "appsent/error.hpp"
#include "appsent/strings.hpp"
#include "appsent/textprep.hpp"

namespace appsent::lexicon {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value))
    throw Error(ErrorKind::BadFormat, std::string(what) + " '" + std::string(text) + "' is not a number");
  return value;
}

}  // namespace

void Lexicon::insert(LexiconEntry entry) {
  auto key = entry.term;
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

const LexiconEntry* Lexicon::find(std::string_view term) const {
  const auto it = entries_.find(term);
  return it == entries_.end() ? nullptr : &it->second;
}

LexiconEntry parse_entry(std::string_view line) {
  const auto fields = split(line, ',');
  if (fields.size() < 3 || fields.size() > 4)
    throw Error(ErrorKind::BadFormat, "expected 3 or 4 fields, found " + std::to_string(fields.size()));
  LexiconEntry entry;
  entry.term = to_lower(trim(fields[0]));
  if (entry.term.empty()) throw Error(ErrorKind::BadFormat, "empty term");
  entry.polarity = parse_number(fields[1], "polarity");
  entry.subjectivity = parse_number(fields[2], "subjectivity");
  if (entry.polarity < -1.0 || entry.polarity > 1.0)
    throw Error(ErrorKind::RangeViolation, "polarity " + format_double(entry.polarity) + " outside [-1, 1]");
  if (entry.subjectivity < 0.0 || entry.subjectivity > 1.0)
    throw Error(ErrorKind::RangeViolation,
                "subjectivity " + format_double(entry.subjectivity) + " outside [0, 1]");
  if (fields.size() == 4) {
    const auto role = to_lower(trim(fields[3]));
    if (role == "negator") {
      entry.is_negator = true;
    } else if (role.rfind("intensifier:", 0) == 0) {
      entry.is_intensifier = true;
      entry.factor = parse_number(std::string_view(role).substr(12), "intensifier factor");
      if (entry.factor <= 0.0)
        throw Error(ErrorKind::RangeViolation, "intensifier factor must be positive");
    } else if (!role.empty()) {
      throw Error(ErrorKind::BadFormat, "unknown role '" + role + "'");
    }
  }
  return entry;
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lexicon;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      auto entry = parse_entry(line);
      if (lexicon.find(entry.term))
        warn("lexicon line " + std::to_string(line_no) + ": duplicate term '" + entry.term +
             "', keeping the later row");
      lexicon.insert(std::move(entry));
    } catch (const Error& e) {
      lexicon.rejected.push_back({line_no, e.what()});
    }
  }
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str());
}

std::shared_ptr<const Lexicon> default_lexicon() {
  static const auto shipped = std::make_shared<const Lexicon>(parse_lexicon(embedded::kLexicon));
  return shipped;
}

std::string_view to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::Negative: return "Negative";
    case Orientation::Positive: return "Positive";
    case Orientation::Neutral: break;
  }
  return "Neutral";
}

Orientation orientation_of(double polarity) noexcept {
  if (polarity > 0.0) return Orientation::Positive;
  if (polarity < 0.0) return Orientation::Negative;
  return Orientation::Neutral;
}

SentimentScore score(std::span<const std::string> tokens, const Lexicon& lexicon) {
  const auto negator_at = [&](std::size_t i) {
    const auto* e = lexicon.find(tokens[i]);
    return e && e->is_negator;
  };
  double polarity_sum = 0.0;
  double subjectivity_sum = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto* entry = lexicon.find(tokens[i]);
    if (!entry || !entry->sentiment_bearing()) continue;
    double polarity = entry->polarity;
    std::size_t anchor = i;
    if (i > 0) {
      if (const auto* prev = lexicon.find(tokens[i - 1]); prev && prev->is_intensifier) {
        polarity *= prev->factor;
        anchor = i - 1;
      }
    }
    const std::size_t from = anchor >= 2 ? anchor - 2 : 0;
    for (std::size_t j = from; j < anchor; ++j) {
      if (negator_at(j)) {
        polarity *= -0.5;
        break;
      }
    }
    polarity_sum += polarity;
    subjectivity_sum += entry->subjectivity;
    ++matched;
  }
  SentimentScore s;
  if (matched > 0) {
    const double n = static_cast<double>(matched);
    s.polarity = std::clamp(polarity_sum / n, -1.0, 1.0);
    s.subjectivity = std::clamp(subjectivity_sum / n, 0.0, 1.0);
  }
  s.orientation = orientation_of(s.polarity);
  return s;
}

SentimentScore score_text(std::string_view raw_text, const Lexicon& lexicon) {
  return score(textprep::surface_tokens(raw_text), lexicon);
}

std::vector<Scored<corpus::ReviewRecord>> score_corpus(const std::vector<corpus::ReviewRecord>& records,
                                                       const Lexicon& lexicon) {
  std::vector<Scored<corpus::ReviewRecord>> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r, score_text(r.raw_text, lexicon)});
  return out;
}

std::vector<Scored<corpus::StudentRecord>> score_corpus(const std::vector<corpus::StudentRecord>& records,
                                                        const Lexicon& lexicon) {
  std::vector<Scored<corpus::StudentRecord>> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r, score_text(r.review_text, lexicon)});
  return out;
}

}  // namespace appsent::lexicon
