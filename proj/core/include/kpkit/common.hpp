#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpkit {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Thrown on violated preconditions (bad grids, bad orders, unmet support
/// requirements). CLI maps it to exit code 2.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_input(msg);
}

} // namespace kpkit
