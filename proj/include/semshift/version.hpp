#pragma once

#include <string_view>

namespace semshift {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

// Bumped whenever any prompt template or the answer-turn protocol changes.
// Part of every cache key; manifests pin it so stale logs are never reused.
inline constexpr std::string_view kTemplateVersion = "1";

}  // namespace semshift
