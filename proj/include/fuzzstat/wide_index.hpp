#pragma once

#include <cstdint>
#include <string>

namespace fuzzstat {

// Window endpoints can exceed 64 bits (geometric index sequences); 128-bit
// unsigned arithmetic keeps them exact far beyond double's 2^53 integer range.
using wide_uint = unsigned __int128;

inline std::string to_string(wide_uint v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

inline bool fits_u64(wide_uint v) {
    return v <= static_cast<wide_uint>(UINT64_MAX);
}

} // namespace fuzzstat
