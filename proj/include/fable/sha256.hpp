#pragma once

#include <string>
#include <string_view>

namespace fable {

/// SHA-256 of the UTF-8 bytes of `data`, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

}  // namespace fable
