#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace tsc {

inline void put_u32_le(std::string& out, uint32_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
    out.push_back(char((v >> 16) & 0xff));
    out.push_back(char((v >> 24) & 0xff));
}

inline uint32_t get_u32_le(const unsigned char* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

inline void put_u64_le(std::string& out, uint64_t v) {
    put_u32_le(out, uint32_t(v));
    put_u32_le(out, uint32_t(v >> 32));
}

inline uint64_t get_u64_le(const unsigned char* p) {
    return uint64_t(get_u32_le(p)) | uint64_t(get_u32_le(p + 4)) << 32;
}

inline void put_f32_le(std::string& out, float v) { put_u32_le(out, std::bit_cast<uint32_t>(v)); }
inline float get_f32_le(const unsigned char* p) { return std::bit_cast<float>(get_u32_le(p)); }

inline void put_f64_le(std::string& out, double v) { put_u64_le(out, std::bit_cast<uint64_t>(v)); }
inline double get_f64_le(const unsigned char* p) { return std::bit_cast<double>(get_u64_le(p)); }

}  // namespace tsc
