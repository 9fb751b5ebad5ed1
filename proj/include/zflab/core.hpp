#ifndef ZFLAB_CORE_HPP
#define ZFLAB_CORE_HPP

#include <complex>
#include <cstdint>

namespace zflab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr cplx imag_unit{0.0, 1.0};

}  // namespace zflab

#endif
