#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <type_traits>

#include "zetacorr/errors.hpp"

// Little-endian fixed-width field I/O shared by the prime and grid file formats.
namespace zetacorr::binary {

template <typename T>
inline T to_little(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        return std::bit_cast<T>(bytes);
    }
}

template <typename T>
inline void put(std::ostream& os, T v) {
    const T le = to_little(v);
    os.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
inline T get(std::istream& is, const char* what) {
    T v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw CacheError(std::string("truncated file while reading ") + what);
    return to_little(v);
}

inline void put_magic(std::ostream& os, const char (&magic)[5]) { os.write(magic, 4); }

inline void expect_magic(std::istream& is, const char (&magic)[5]) {
    char buf[4];
    if (!is.read(buf, 4)) throw CacheError("truncated file: missing magic");
    if (std::memcmp(buf, magic, 4) != 0)
        throw CacheError(std::string("bad magic, expected ") + magic);
}

}  // namespace zetacorr::binary
