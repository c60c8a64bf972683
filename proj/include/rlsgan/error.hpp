#ifndef RLSGAN_ERROR_HPP
#define RLSGAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rlsgan {

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch = 2,
  numeric = 3,
  io = 4,
  parse = 5,
  divergence = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace rlsgan

#endif  // RLSGAN_ERROR_HPP
