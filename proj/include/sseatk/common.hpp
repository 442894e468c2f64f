#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace sseatk {

// Message builder for exception texts: msg("m=", m, " exceeds ", distinct).
template <class... Args>
std::string msg(Args&&... args) {
    std::ostringstream out;
    (out << ... << args);
    return out.str();
}

template <class... Args>
[[noreturn]] void fail(Args&&... args) {
    throw std::runtime_error(msg(std::forward<Args>(args)...));
}

template <class... Args>
void require(bool cond, Args&&... args) {
    if (!cond) throw std::invalid_argument(msg(std::forward<Args>(args)...));
}

}  // namespace sseatk
