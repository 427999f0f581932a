#pragma once

#include <string>

namespace llt {

inline constexpr const char* kVersion = "lltlab 0.1.0";

// FNV-1a over the canonical config text; embedded in every report.
std::string fingerprint(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// %.17g formatting (round-trips doubles exactly).
std::string fmt_g17(double x);

}  // namespace llt
