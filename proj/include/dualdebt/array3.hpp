#pragma once

#include <cstddef>
#include <vector>

namespace dualdebt {

// Dense row-major 3-D array; the last index varies fastest.
template <typename T>
class Array3 {
public:
    Array3() = default;
    Array3(std::size_t n0, std::size_t n1, std::size_t n2, T fill = T{})
        : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

    T& operator()(std::size_t i, std::size_t j, std::size_t l) { return data_[(i * n1_ + j) * n2_ + l]; }
    const T& operator()(std::size_t i, std::size_t j, std::size_t l) const {
        return data_[(i * n1_ + j) * n2_ + l];
    }

    std::size_t dim0() const { return n0_; }
    std::size_t dim1() const { return n1_; }
    std::size_t dim2() const { return n2_; }
    std::size_t size() const { return data_.size(); }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const Array3& o) const { return n0_ == o.n0_ && n1_ == o.n1_ && n2_ == o.n2_; }
    bool operator==(const Array3& o) const = default;

private:
    std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
    std::vector<T> data_;
};

}  // namespace dualdebt
