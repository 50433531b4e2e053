#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace drift {

/// Shortest round-trippable text for a double ("%.17g").
inline std::string format_real(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

/// Ordered key/value provenance written as '# key=value' lines ahead of a
/// CSV header.
using Provenance = std::vector<std::pair<std::string, std::string>>;

inline void write_provenance(std::ostream& out, const Provenance& provenance) {
  for (const auto& [key, value] : provenance) out << "# " << key << '=' << value << '\n';
}

}  // namespace drift
