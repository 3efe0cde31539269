#pragma once

#include <string_view>

// Contents of the files under data/, compiled into the library.
namespace appsent::embedded {
extern const std::string_view kStopwords;
extern const std::string_view kLexicon;
}  // namespace appsent::embedded
