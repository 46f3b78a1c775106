#pragma once

// Multi-round inputs and outputs are packed into integers. Round 1 occupies
// the most significant bit of the packed value; this convention is part of
// the file-format contract and is documented in the README.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace prbox {

struct BitString {
    uint32_t value = 0;
    int width = 0;

    BitString() = default;
    BitString(uint32_t v, int w) : value(v), width(w) {
        if (w < 0 || w > 20 || v >= (1u << w)) throw std::invalid_argument("BitString: out of range");
    }

    // Bit of round i, 1-based, round 1 = most significant.
    int round_bit(int i) const { return (value >> (width - i)) & 1u; }

    std::string str() const {
        std::string s;
        for (int i = 1; i <= width; ++i) s += char('0' + round_bit(i));
        return s;
    }
};

// Number of rounds whose CHSH condition x_i XOR y_i = u_i AND v_i fails.
inline int rounds_lost_cell(uint32_t x, uint32_t y, uint32_t u, uint32_t v) {
    return std::popcount((x ^ y) ^ (u & v));
}

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(int v) {
    if (!is_power_of_two(v)) throw std::invalid_argument("expected a power of two");
    return std::countr_zero(static_cast<unsigned>(v));
}

}  // namespace prbox
