#pragma once

#include <cstddef>
#include <cstdint>

namespace ecgsyn {

/// CRC-32 (IEEE 802.3 polynomial, reflected), used as the integrity
/// trailer of the binary cache and checkpoint formats.
inline std::uint32_t crc32(const unsigned char* data, std::size_t size,
                           std::uint32_t seed = 0) {
    static const auto table = [] {
        struct Table { std::uint32_t v[256]; };
        Table t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t.v[i] = c;
        }
        return t;
    }();
    std::uint32_t c = seed ^ 0xFFFFFFFFu;
    for (std::size_t i = 0; i < size; ++i) {
        c = table.v[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
    }
    return c ^ 0xFFFFFFFFu;
}

} // namespace ecgsyn
