#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string_view>
#include <type_traits>

namespace parasep {

using Complex = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
concept FieldScalar = std::is_same_v<Scalar, double> || std::is_same_v<Scalar, Complex>;

enum class Field { real, complex };

template <FieldScalar Scalar>
constexpr Field field_of() {
    return is_complex<Scalar>::value ? Field::complex : Field::real;
}

inline constexpr std::string_view field_name(Field f) {
    return f == Field::real ? "real" : "complex";
}

template <FieldScalar Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <FieldScalar Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

template <FieldScalar Scalar>
inline bool is_finite(const Scalar& v) {
    if constexpr (is_complex<Scalar>::value)
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    else
        return std::isfinite(v);
}

/// Converts a complex value into the target field; real targets drop the
/// imaginary part, so callers must only do this when it is known to vanish.
template <FieldScalar Scalar>
inline Scalar from_complex(const Complex& v) {
    if constexpr (is_complex<Scalar>::value)
        return v;
    else
        return v.real();
}

}  // namespace parasep
