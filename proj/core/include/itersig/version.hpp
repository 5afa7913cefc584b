#pragma once

#define ITERSIG_VERSION_MAJOR 0
#define ITERSIG_VERSION_MINOR 1
#define ITERSIG_VERSION_PATCH 0

namespace itersig {
inline constexpr const char* version_string = "0.1.0";
}
