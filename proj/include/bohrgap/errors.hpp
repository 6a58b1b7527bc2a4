#ifndef BOHRGAP_ERRORS_HPP
#define BOHRGAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bohrgap {

/// Bad construction parameters or an operation called outside its domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A table, integer width or materialization limit would be exceeded.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The parameter regime gives no convergence point to the left of the imaginary axis.
class NonPositiveEpsilon : public std::domain_error {
 public:
  explicit NonPositiveEpsilon(double eps)
      : std::domain_error("convergence offset epsilon = " + std::to_string(eps) +
                          " is not positive; the sigma_c bound is not below 0 for these parameters"),
        epsilon_(eps) {}
  double epsilon() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

}  // namespace bohrgap

#endif  // BOHRGAP_ERRORS_HPP
