#include "scnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scnn {

std::size_t shape_volume(const Shape& shape)
{
    std::size_t n = 1;
    for (auto e : shape)
        n *= e;
    return n;
}

std::string shape_string(const Shape& shape)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i)
        os << (i ? "," : "") << shape[i];
    os << ']';
    return os.str();
}

void validate_shape(const Shape& shape)
{
    if (shape.empty())
        throw ShapeError("tensor shape must have at least one extent");
    for (auto e : shape)
        if (e == 0)
            throw ShapeError("tensor extent must be positive: " + shape_string(shape));
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what)
{
    if (a.shape() != b.shape())
        throw ShapeError(std::string(what) + ": shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape))
{
    validate_shape(shape_);
    data_.assign(shape_volume(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data))
{
    validate_shape(shape_);
    if (data_.size() != shape_volume(shape_))
        throw ShapeError("data length " + std::to_string(data_.size()) + " does not match shape " +
                         shape_string(shape_));
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const
{
    if (index.size() != shape_.size())
        throw ShapeError("index rank does not match tensor rank");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < index.size(); ++a) {
        if (index[a] >= shape_[a])
            throw ShapeError("index out of range on axis " + std::to_string(a));
        flat = flat * shape_[a] + index[a];
    }
    return flat;
}

std::vector<std::size_t> Tensor::unravel(std::size_t flat) const
{
    std::vector<std::size_t> index(shape_.size());
    for (std::size_t a = shape_.size(); a-- > 0;) {
        index[a] = flat % shape_[a];
        flat /= shape_[a];
    }
    return index;
}

Tensor Tensor::reshaped(Shape shape) const
{
    return Tensor(std::move(shape), data_);
}

void Tensor::fill(double value)
{
    std::fill(data_.begin(), data_.end(), value);
}

Tensor& Tensor::operator+=(const Tensor& other)
{
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& other)
{
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

Tensor& Tensor::operator*=(double scale)
{
    for (auto& v : data_)
        v *= scale;
    return *this;
}

Tensor zeros(Shape shape)
{
    return Tensor(std::move(shape), 0.0);
}

namespace {

void require_pair_layout(const Tensor& t, const char* what)
{
    if ((t.rank() != 2 && t.rank() != 3) || t.extent(0) != t.extent(1))
        throw ShapeError(std::string(what) + ": expected L x L or L x L x c, got " +
                         shape_string(t.shape()));
}

} // namespace

Tensor transpose_spatial(const Tensor& t)
{
    require_pair_layout(t, "transpose_spatial");
    const std::size_t L = t.extent(0);
    const std::size_t c = t.rank() == 3 ? t.extent(2) : 1;
    Tensor out(t.shape());
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t k = 0; k < c; ++k)
                out[(i * L + j) * c + k] = t[(j * L + i) * c + k];
    return out;
}

double max_abs_diff(const Tensor& a, const Tensor& b)
{
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double spatial_asymmetry(const Tensor& t)
{
    require_pair_layout(t, "spatial_asymmetry");
    const std::size_t L = t.extent(0);
    const std::size_t c = t.rank() == 3 ? t.extent(2) : 1;
    double worst = 0.0;
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i + 1; j < L; ++j)
            for (std::size_t k = 0; k < c; ++k)
                worst = std::max(worst, std::abs(t[(i * L + j) * c + k] - t[(j * L + i) * c + k]));
    return worst;
}

double dot(const Tensor& a, const Tensor& b)
{
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

Tensor axpy(double a, const Tensor& x, const Tensor& y)
{
    require_same_shape(x, y, "axpy");
    Tensor out = y;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += a * x[i];
    return out;
}

bool all_finite(const Tensor& t)
{
    return std::all_of(t.data().begin(), t.data().end(), [](double v) { return std::isfinite(v); });
}

} // namespace scnn
