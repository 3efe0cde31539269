#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace appsent {

enum class ErrorKind {
  MissingFile,
  MalformedHeader,
  NoUsableColumns,
  OutOfRange,
  Unparseable,
  EmptyCorpus,
  EmptyVocabulary,
  EmptyDataset,
  DimensionMismatch,
  SingleClassDataset,
  InvalidHyperparameter,
  LengthMismatch,
  TooFewPairs,
  UnknownField,
  RangeViolation,
  BadFormat,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-fatal diagnostics (convergence notices, degenerate statistics).
/// Writes to stderr unless silenced.
void warn(std::string_view message);
/// As warn(), but a message already printed by this process is not repeated.
void warn_once(std::string_view message);
/// Warnings raised so far, printed or not.
std::size_t warning_count() noexcept;
void set_warnings_enabled(bool enabled) noexcept;

}  // namespace appsent
