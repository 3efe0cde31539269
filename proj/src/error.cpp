#include "appsent/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>
#include <string>

namespace appsent {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::NoUsableColumns: return "NoUsableColumns";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Unparseable: return "Unparseable";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingleClassDataset: return "SingleClassDataset";
    case ErrorKind::InvalidHyperparameter: return "InvalidHyperparameter";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewPairs: return "TooFewPairs";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::BadFormat: return "BadFormat";
  }
  return "Unknown";
}

namespace {
std::atomic<bool> g_warnings{true};
std::atomic<std::size_t> g_warning_count{0};
std::mutex g_warn_mutex;
std::set<std::string, std::less<>> g_seen;
}  // namespace

void warn(std::string_view message) {
  g_warning_count.fetch_add(1, std::memory_order_relaxed);
  if (!g_warnings.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

void warn_once(std::string_view message) {
  g_warning_count.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard lock(g_warn_mutex);
  if (!g_seen.emplace(message).second) return;
  if (g_warnings.load(std::memory_order_relaxed)) std::cerr << "warning: " << message << '\n';
}

std::size_t warning_count() noexcept { return g_warning_count.load(std::memory_order_relaxed); }

void set_warnings_enabled(bool enabled) noexcept { g_warnings.store(enabled); }

}  // namespace appsent
