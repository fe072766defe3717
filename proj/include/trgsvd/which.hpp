#pragma once

#include <string_view>

namespace trgsvd {

enum class Which { largest, smallest };

inline std::string_view to_string(Which w) { return w == Which::largest ? "largest" : "smallest"; }

}  // namespace trgsvd
