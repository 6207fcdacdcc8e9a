#pragma once

#define VOVLAB_VERSION_MAJOR 0
#define VOVLAB_VERSION_MINOR 1
#define VOVLAB_VERSION_PATCH 0
#define VOVLAB_VERSION_STRING "0.1.0"

namespace vov {
inline constexpr const char* version() { return VOVLAB_VERSION_STRING; }
}  // namespace vov
