#ifndef SLELAB_COMMON_HPP
#define SLELAB_COMMON_HPP

#include <stdexcept>
#include <string>

namespace slelab {

// Numerical-guard failures. Soft conditions (truncation, clamp counts,
// resolution flags) are reported on result structs instead.
enum class Guard {
    zeta_out_of_range,
    gamma_pole,
    step_too_large,
    force_point_collision,
    swallowed,
    swallowed_point,
    branch_failure,
    not_reached,
    insufficient_survivors,
    parameter_out_of_range,
    degenerate_fit,
    bad_argument,
};

class SleError : public std::runtime_error {
  public:
    SleError(Guard g, const std::string& what) : std::runtime_error(what), kind(g) {}
    Guard kind;
};

[[noreturn]] inline void fail(Guard g, const std::string& what) { throw SleError(g, what); }

inline void require(bool ok, Guard g, const std::string& what) {
    if (!ok) fail(g, what);
}

} // namespace slelab

#endif
