#pragma once

#include <stdexcept>
#include <string>

namespace tordust {

enum class ErrCode {
  ok = 0,
  invalid_argument,
  invalid_config,
  not_lorentzian,
  amplitude_too_large,
  step_too_large,
  tolerance_not_met,
  cfl_violation,
  io_error,
  format_error,
  config_mismatch,
  non_finite,
  degenerate_g00,  // |g^00| under the configured floor
};

class Error : public std::runtime_error {
 public:
  Error(ErrCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrCode code() const { return code_; }

 private:
  ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& what) { throw Error(code, what); }

}  // namespace tordust
