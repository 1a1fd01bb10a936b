#pragma once

#include <mpfr.h>

namespace rsasian {

/// Minimal RAII wrapper for a single mpfr_t at fixed precision.
class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mp() { mpfr_clear(v_); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  operator mpfr_ptr() { return v_; }
  operator mpfr_srcptr() const { return v_; }
  mpfr_ptr ptr() { return v_; }
  mpfr_srcptr ptr() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace rsasian
