/*
 * Copyright 2026 The coded-shuffle Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cdc/error.hpp"
#include "cdc/rational.hpp"

namespace cdc {

/// Element of GF(2^w), w in {8, 16}; stored in the low w bits.
using FieldElement = std::uint16_t;

inline constexpr std::uint32_t kPoly8 = 0x11D;     // x^8 + x^4 + x^3 + x^2 + 1
inline constexpr std::uint32_t kPoly16 = 0x1100B;  // x^16 + x^12 + x^3 + x + 1

inline void check_width(int width) {
    if (width != 8 && width != 16) throw InvalidArgument("unsupported field width " + std::to_string(width));
}

/// Log/antilog tables for GF(2^w). The element 2 (the polynomial x) is
/// primitive under both reducing polynomials.
class GaloisField {
public:
    static const GaloisField& get(int width) {
        check_width(width);
        static const GaloisField gf8(8, kPoly8);
        static const GaloisField gf16(16, kPoly16);
        return width == 8 ? gf8 : gf16;
    }

    int width() const noexcept { return width_; }
    std::uint32_t size() const noexcept { return size_; }
    std::uint32_t poly() const noexcept { return poly_; }

    static FieldElement add(FieldElement a, FieldElement b) noexcept { return a ^ b; }

    FieldElement mul(FieldElement a, FieldElement b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    FieldElement inv(FieldElement a) const {
        if (a == 0) throw DecodeError("division by zero in GF(2^" + std::to_string(width_) + ")");
        return exp_[order_ - log_[a]];
    }

    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    FieldElement pow(FieldElement a, std::uint64_t e) const noexcept {
        if (e == 0) return 1;
        if (a == 0) return 0;
        return exp_[(static_cast<std::uint64_t>(log_[a]) * e) % order_];
    }

    std::uint32_t log(FieldElement a) const noexcept { return log_[a]; }
    FieldElement exp(std::uint32_t e) const noexcept { return exp_[e % order_]; }

    /// dst[i] ^= c * src[i]
    void mul_add_row(std::span<FieldElement> dst, std::span<const FieldElement> src, FieldElement c) const noexcept {
        if (c == 0) return;
        const std::uint32_t lc = log_[c];
        for (std::size_t i = 0; i < dst.size(); ++i) {
            if (src[i]) dst[i] ^= exp_[log_[src[i]] + lc];
        }
    }

    void scale_row(std::span<FieldElement> row, FieldElement c) const noexcept {
        const std::uint32_t lc = log_[c];
        for (auto& v : row) {
            if (v) v = exp_[log_[v] + lc];
        }
    }

    bool contains(std::uint32_t v) const noexcept { return v < size_; }

private:
    GaloisField(int width, std::uint32_t poly)
        : width_(width), size_(1u << width), order_(size_ - 1), poly_(poly), log_(size_, 0), exp_(2 * order_, 0) {
        std::uint32_t x = 1;
        for (std::uint32_t i = 0; i < order_; ++i) {
            exp_[i] = static_cast<FieldElement>(x);
            exp_[i + order_] = static_cast<FieldElement>(x);
            log_[x] = i;
            x <<= 1;
            if (x & size_) x ^= poly_;
        }
    }

    int width_;
    std::uint32_t size_;
    std::uint32_t order_;
    std::uint32_t poly_;
    std::vector<std::uint32_t> log_;
    std::vector<FieldElement> exp_;
};

inline FieldElement gf_mul(FieldElement a, FieldElement b, int width) {
    const auto& f = GaloisField::get(width);
    if (!f.contains(a) || !f.contains(b)) throw InvalidArgument("operand outside the field");
    return f.mul(a, b);
}

inline FieldElement gf_inv(FieldElement a, int width) {
    const auto& f = GaloisField::get(width);
    if (!f.contains(a)) throw InvalidArgument("operand outside the field");
    return f.inv(a);
}

/// Dense row-major matrix over GF(2^w).
struct FieldMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<FieldElement> entries;

    FieldMatrix() = default;
    FieldMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}
    FieldMatrix(std::size_t r, std::size_t c, std::vector<FieldElement> e) : rows(r), cols(c), entries(std::move(e)) {
        if (entries.size() != rows * cols) throw InvalidArgument("matrix entry count does not match its shape");
    }

    FieldElement& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    FieldElement at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

    std::span<FieldElement> row(std::size_t r) { return {entries.data() + r * cols, cols}; }
    std::span<const FieldElement> row(std::size_t r) const { return {entries.data() + r * cols, cols}; }

    bool operator==(const FieldMatrix&) const = default;
};

inline FieldMatrix multiply(const GaloisField& f, const FieldMatrix& lhs, const FieldMatrix& rhs) {
    if (lhs.cols != rhs.rows) throw InvalidArgument("matrix product dimension mismatch");
    FieldMatrix out(lhs.rows, rhs.cols);
    for (std::size_t i = 0; i < lhs.rows; ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < lhs.cols; ++k) f.mul_add_row(dst, rhs.row(k), lhs.at(i, k));
    }
    return out;
}

/// Row `row` of `lhs` times column `col` of `rhs`.
inline FieldElement dot(const GaloisField& f, std::span<const FieldElement> row, const FieldMatrix& rhs, std::size_t col) {
    FieldElement acc = 0;
    for (std::size_t k = 0; k < row.size(); ++k) acc ^= f.mul(row[k], rhs.at(k, col));
    return acc;
}

/// Vandermonde generator of an (m', m) MDS code; row i is (x_i^0, ..., x_i^{m-1})
/// with x_i = i. Rate 1 degenerates to the identity.
class GeneratorMatrix {
public:
    GeneratorMatrix(std::size_t codeword_length, std::size_t message_length, int width)
        : codeword_length_(codeword_length), message_length_(message_length), width_(width) {
        check_width(width);
        if (codeword_length < message_length) throw InvalidArgument("codeword shorter than message");
        if (codeword_length > GaloisField::get(width).size())
            throw InvalidArgument("GF(2^" + std::to_string(width) + ") too small for " + std::to_string(codeword_length) +
                                  " distinct evaluation points");
    }

    std::size_t codeword_length() const noexcept { return codeword_length_; }
    std::size_t message_length() const noexcept { return message_length_; }
    int width() const noexcept { return width_; }
    bool is_identity() const noexcept { return codeword_length_ == message_length_; }

    FieldElement evaluation_point(std::size_t row) const noexcept { return static_cast<FieldElement>(row); }

    FieldElement entry(std::size_t row, std::size_t col) const {
        if (is_identity()) return row == col ? 1 : 0;
        return GaloisField::get(width_).pow(evaluation_point(row), col);
    }

    /// Fills `out` (length message_length) with generator row `row`.
    void fill_row(std::size_t row, std::span<FieldElement> out) const {
        if (is_identity()) {
            std::fill(out.begin(), out.end(), FieldElement{0});
            out[row] = 1;
            return;
        }
        const auto& f = GaloisField::get(width_);
        const FieldElement x = evaluation_point(row);
        FieldElement p = 1;
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = p;
            p = f.mul(p, x);
        }
    }

    FieldMatrix to_matrix() const {
        FieldMatrix g(codeword_length_, message_length_);
        for (std::size_t i = 0; i < codeword_length_; ++i) fill_row(i, g.row(i));
        return g;
    }

private:
    std::size_t codeword_length_;
    std::size_t message_length_;
    int width_;
};

inline GeneratorMatrix make_generator(std::size_t m, const Rational& r1, int width) {
    if (m == 0) throw InvalidArgument("message length must be positive");
    if (r1 < 1) throw InvalidArgument("MDS rate must be at least 1");
    const Rational length = r1 * m;
    if (!is_integer(length)) throw InvalidArgument("codeword length r1*m = " + exact_string(length) + " is not an integer");
    return GeneratorMatrix(static_cast<std::size_t>(to_int64(numerator_of(length))), m, width);
}

/// C = G A.
inline FieldMatrix encode(const GeneratorMatrix& g, const FieldMatrix& a) {
    if (a.rows != g.message_length()) throw InvalidArgument("encode: A has " + std::to_string(a.rows) + " rows, generator expects " + std::to_string(g.message_length()));
    if (g.is_identity()) return a;
    const auto& f = GaloisField::get(g.width());
    FieldMatrix c(g.codeword_length(), a.cols);
    std::vector<FieldElement> grow(g.message_length());
    for (std::size_t i = 0; i < g.codeword_length(); ++i) {
        g.fill_row(i, grow);
        auto dst = c.row(i);
        for (std::size_t k = 0; k < grow.size(); ++k) f.mul_add_row(dst, a.row(k), grow[k]);
    }
    return c;
}

/// Recovers the m-row message block from coded rows. Row t of `coded_values`
/// holds the coded values for `row_ids[t]`, one column per right-hand side.
/// Of the distinct ids supplied, the m smallest are used.
inline FieldMatrix decode_rows(const GeneratorMatrix& g, std::span<const std::size_t> row_ids, const FieldMatrix& coded_values) {
    const std::size_t m = g.message_length();
    if (coded_values.rows != row_ids.size()) throw InvalidArgument("decode: one value row per coded-row id required");
    std::vector<std::size_t> order(row_ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return row_ids[x] < row_ids[y]; });

    std::vector<std::size_t> picked;  // positions into row_ids
    picked.reserve(m);
    for (std::size_t pos : order) {
        if (row_ids[pos] >= g.codeword_length()) throw InvalidArgument("decode: coded-row id " + std::to_string(row_ids[pos]) + " out of range");
        if (!picked.empty() && row_ids[picked.back()] == row_ids[pos]) continue;
        picked.push_back(pos);
        if (picked.size() == m) break;
    }
    if (picked.size() < m)
        throw DecodeError("decode: " + std::to_string(picked.size()) + " distinct coded rows, need " + std::to_string(m));

    const std::size_t rhs = coded_values.cols;
    FieldMatrix out(m, rhs);
    if (g.is_identity()) {
        for (std::size_t t = 0; t < m; ++t) std::copy_n(coded_values.row(picked[t]).begin(), rhs, out.row(row_ids[picked[t]]).begin());
        return out;
    }

    // Gaussian elimination on [V | values].
    const auto& f = GaloisField::get(g.width());
    const std::size_t width = m + rhs;
    FieldMatrix aug(m, width);
    for (std::size_t t = 0; t < m; ++t) {
        auto r = aug.row(t);
        g.fill_row(row_ids[picked[t]], r.first(m));
        std::copy_n(coded_values.row(picked[t]).begin(), rhs, r.begin() + m);
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t p = c;
        while (p < m && aug.at(p, c) == 0) ++p;
        if (p == m) throw DecodeError("decode: singular coded-row subset");
        if (p != c) std::swap_ranges(aug.row(p).begin(), aug.row(p).end(), aug.row(c).begin());
        auto pivot = aug.row(c).subspan(c);
        f.scale_row(pivot, f.inv(pivot[0]));
        for (std::size_t r = c + 1; r < m; ++r) {
            const FieldElement factor = aug.at(r, c);
            if (factor) f.mul_add_row(aug.row(r).subspan(c), pivot, factor);
        }
    }
    for (std::size_t c = m; c-- > 0;) {
        auto src = aug.row(c).subspan(m);
        for (std::size_t r = 0; r < c; ++r) {
            const FieldElement factor = aug.at(r, c);
            if (factor) f.mul_add_row(aug.row(r).subspan(m), src, factor);
        }
    }
    for (std::size_t t = 0; t < m; ++t) std::copy_n(aug.row(t).begin() + m, rhs, out.row(t).begin());
    return out;
}

}  // namespace cdc
