#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace relsim {

/// %.17g rendering; round-trips every double exactly.
std::string format_double(double v);

/// key = value lines; '#' starts a comment. Later occurrences win; an
/// override is noted on stderr.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Canonical "key = value\n" lines, sorted by key.
std::string serialize_key_values(const std::map<std::string, std::string>& kv);

/// FNV-1a 64-bit hash, hex-encoded.
std::string fnv1a_hex(std::string_view text);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Single manifest line: scenario, artifact version, seed (when meaningful)
/// and the hash of the canonical config text.
void write_manifest(const std::filesystem::path& dir, std::string_view scenario,
                    std::optional<std::uint64_t> seed, std::string_view config_text);

inline constexpr std::string_view kArtifactVersion = "0.1.0";

}  // namespace relsim
