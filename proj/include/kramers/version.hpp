#pragma once

#include <string>

namespace kramers {

inline std::string version_string()
{
    return "0.1.0";
}

} // namespace kramers
