#pragma once

#include <optional>
#include <string_view>

namespace appsent {

/// Binary sentiment class. Positive is the positive class for every metric.
enum class Label : unsigned char { Negative = 0, Positive = 1 };

constexpr std::string_view to_string(Label label) noexcept {
  return label == Label::Positive ? "Positive" : "Negative";
}

std::optional<Label> parse_label(std::string_view text) noexcept;

}  // namespace appsent
