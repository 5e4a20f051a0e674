#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "scnn/error.hpp"

namespace scnn {

using Shape = std::vector<std::size_t>;

/// Dense row-major tensor of doubles. The last axis is the fastest.
///
/// Pair tensors are stored L x L x c, so the channel fiber of a spatial
/// cell (i, j) is contiguous.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    double* raw() { return data_.data(); }
    const double* raw() const { return data_.data(); }

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    double& operator()(std::size_t i) { return data_[i]; }
    double operator()(std::size_t i) const { return data_[i]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k)
    {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const
    {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l)
    {
        return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
    {
        return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
    }

    /// Flat offset of a multi-index; throws ShapeError on rank or bound mismatch.
    std::size_t offset(std::span<const std::size_t> index) const;
    /// Inverse of offset().
    std::vector<std::size_t> unravel(std::size_t flat) const;

    /// Same data viewed under a new shape with the same element count.
    Tensor reshaped(Shape shape) const;

    void fill(double value);

    Tensor& operator+=(const Tensor& other);
    Tensor& operator-=(const Tensor& other);
    Tensor& operator*=(double scale);

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

std::size_t shape_volume(const Shape& shape);
std::string shape_string(const Shape& shape);
/// Throws ShapeError unless the shape is non-empty with all extents >= 1.
void validate_shape(const Shape& shape);
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

Tensor zeros(Shape shape);

/// o[i,j,k] = t[j,i,k]; requires rank 3 with equal leading extents.
Tensor transpose_spatial(const Tensor& t);

/// Largest |a - b| over all entries.
double max_abs_diff(const Tensor& a, const Tensor& b);

/// max |t[i,j,:] - t[j,i,:]| for an L x L x c (or L x L) tensor.
double spatial_asymmetry(const Tensor& t);

/// Sum of elementwise products.
double dot(const Tensor& a, const Tensor& b);

/// a * x + y, elementwise.
Tensor axpy(double a, const Tensor& x, const Tensor& y);

bool all_finite(const Tensor& t);

} // namespace scnn
