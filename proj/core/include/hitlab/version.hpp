#pragma once

#include <string_view>

namespace hitlab {

std::string_view version() noexcept;

}  // namespace hitlab
