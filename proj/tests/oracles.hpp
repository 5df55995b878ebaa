#pragma once
// Brute-force reference computations. Nothing here uses the library's own algorithms
// beyond plain matrix storage.

#include "pcris/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace oracle {

using pcris::ModMatrix;

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Calls f(img) for img = A x over all x supported on columns [col0, col0+ncols), in odometer
// order. Each step adds one column per digit that rolls over, since x_c -> x_c + 1 mod q.
template <class F>
void for_each_image(const ModMatrix& A, std::size_t col0, std::size_t ncols, F f) {
    const std::uint64_t q = A.params().modulus();
    std::vector<std::uint64_t> img(A.rows(), 0), digits(ncols, 0);
    while (true) {
        f(img);
        std::size_t c = 0;
        for (; c < ncols; ++c) {
            for (std::size_t r = 0; r < A.rows(); ++r) img[r] = (img[r] + A(r, col0 + c)) % q;
            if (++digits[c] < q) break;
            digits[c] = 0;
        }
        if (c == ncols) return;
    }
}

// Same enumeration with each image packed into one word, w bits per row (q = 2^w, w*rows <= 64).
// Lane-wise addition keeps carries inside each lane.
struct Packed {
    unsigned w = 0;
    std::uint64_t high = 0, lanes = 0, ones = 0;
    std::vector<std::uint64_t> cols;

    static bool applies(const ModMatrix& A) {
        const std::uint64_t q = A.params().modulus();
        if (q & (q - 1)) return false;
        unsigned w = 0;
        while ((std::uint64_t{1} << w) < q) ++w;
        return w * A.rows() <= 64;
    }
    explicit Packed(const ModMatrix& A) {
        const std::uint64_t q = A.params().modulus();
        while ((std::uint64_t{1} << w) < q) ++w;
        for (std::size_t r = 0; r < A.rows(); ++r) {
            high |= std::uint64_t{1} << (w * r + w - 1);
            ones |= std::uint64_t{1} << (w * r);
            lanes |= (q - 1) << (w * r);
        }
        for (std::size_t c = 0; c < A.cols(); ++c) {
            std::uint64_t v = 0;
            for (std::size_t r = 0; r < A.rows(); ++r) v |= A(r, c) << (w * r);
            cols.push_back(v);
        }
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return ((a & ~high) + (b & ~high)) ^ ((a ^ b) & high); }
    std::uint64_t neg(std::uint64_t a) const { return add(~a & lanes, ones); }

    template <class F>
    void for_each_image(std::size_t col0, std::size_t ncols, std::uint64_t q, F f) const {
        std::uint64_t img = 0;
        std::vector<std::uint64_t> digits(ncols, 0);
        while (true) {
            f(img);
            std::size_t c = 0;
            for (; c < ncols; ++c) {
                img = add(img, cols[col0 + c]);
                if (++digits[c] < q) break;
                digits[c] = 0;
            }
            if (c == ncols) return;
        }
    }
};

inline std::uint64_t pack(const std::vector<std::uint64_t>& v, std::uint64_t q) {
    std::uint64_t k = 0;
    for (std::size_t i = v.size(); i-- > 0;) k = k * q + v[i];
    return k;
}

// |ker A|: direct when the domain is small, else split the columns in two halves and
// match A x1 = -A x2 through a histogram of packed images.
inline std::uint64_t kernel_count(const ModMatrix& A) {
    const std::uint64_t q = A.params().modulus();
    const std::size_t n = A.cols(), m = A.rows();
    if (n == 0) return 1;
    if (m == 0) return ipow(q, n);
    double bits = 0;
    for (std::uint64_t t = q; t > 1; t >>= 1) bits += 1;
    if (Packed::applies(A)) {
        const Packed P(A);
        std::uint64_t zeros = 0;
        if (bits * static_cast<double>(n) <= 26) {
            P.for_each_image(0, n, q, [&](std::uint64_t img) { zeros += img == 0; });
            return zeros;
        }
        if (bits * static_cast<double>(m) > 26) throw std::runtime_error("kernel_count: too many rows");
        const std::size_t h1 = n / 2, h2 = n - h1;
        std::vector<std::uint32_t> hist(ipow(q, m), 0);
        P.for_each_image(0, h1, q, [&](std::uint64_t img) { ++hist[img]; });
        std::uint64_t total = 0;
        P.for_each_image(h1, h2, q, [&](std::uint64_t img) { total += hist[P.neg(img)]; });
        return total;
    }
    if (bits * static_cast<double>(n) <= 26) {
        std::uint64_t zeros = 0;
        for_each_image(A, 0, n, [&](const std::vector<std::uint64_t>& img) {
            zeros += std::all_of(img.begin(), img.end(), [](std::uint64_t v) { return v == 0; });
        });
        return zeros;
    }
    if (bits * static_cast<double>(m) > 26) throw std::runtime_error("kernel_count: too many rows");
    const std::size_t h1 = n / 2, h2 = n - h1;
    std::vector<std::uint32_t> hist(ipow(q, m), 0);
    for_each_image(A, 0, h1, [&](const std::vector<std::uint64_t>& img) { ++hist[pack(img, q)]; });
    std::uint64_t total = 0;
    std::vector<std::uint64_t> neg(m);
    for_each_image(A, h1, h2, [&](const std::vector<std::uint64_t>& img) {
        for (std::size_t r = 0; r < m; ++r) neg[r] = (q - img[r]) % q;
        total += hist[pack(neg, q)];
    });
    return total;
}

// |im A| by listing every image (small matrices only).
inline std::uint64_t image_count(const ModMatrix& A) {
    std::set<std::vector<std::uint64_t>> seen;
    for_each_image(A, 0, A.cols(), [&](const std::vector<std::uint64_t>& img) { seen.insert(img); });
    return seen.size();
}

// Vectors x with A x = 0 (tiny instances).
inline std::vector<std::vector<std::uint64_t>> kernel_vectors(const ModMatrix& A) {
    const std::uint64_t q = A.params().modulus();
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> x(A.cols(), 0);
    for_each_image(A, 0, A.cols(), [&](const std::vector<std::uint64_t>& img) {
        if (std::all_of(img.begin(), img.end(), [](std::uint64_t v) { return v == 0; })) out.push_back(x);
        for (std::size_t c = 0; c < x.size(); ++c)
            if (++x[c] < q) break;
            else x[c] = 0;
    });
    return out;
}

}  // namespace oracle
