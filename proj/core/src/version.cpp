#include "hitlab/version.hpp"

namespace hitlab {

std::string_view version() noexcept { return HITLAB_VERSION; }

}  // namespace hitlab
