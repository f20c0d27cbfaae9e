#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "mpps/real.hpp"

namespace mpps {

// Binary precision backing d decimal digits: ceil(d * log2(10)) bits.
mpfr_prec_t bits_for_digits(int decimal_digits);

// A working precision in decimal digits d; unit roundoff u = 10^-d.
class PrecisionCtx {
 public:
  explicit PrecisionCtx(int decimal_digits);

  int digits() const noexcept { return digits_; }
  mpfr_prec_t bits() const noexcept { return bits_; }
  // 10^-d held at 64 bits; the engine's real roundoff 2^-bits never exceeds it.
  Real unit_roundoff() const;

  friend bool operator==(const PrecisionCtx& a, const PrecisionCtx& b) {
    return a.digits_ == b.digits_;
  }
  friend auto operator<=>(const PrecisionCtx& a, const PrecisionCtx& b) {
    return a.digits_ <=> b.digits_;
  }

 private:
  int digits_;
  mpfr_prec_t bits_;
};

// Dense row-major matrix of complex big floats. A matrix whose imaginary
// part is absent is real; every operation treats it as complex with zero
// imaginary part. Values are immutable once constructed.
class MPMatrix {
 public:
  // `im` is either empty (real matrix) or rows*cols long.
  MPMatrix(std::size_t rows, std::size_t cols, std::vector<Real> re,
           std::vector<Real> im, PrecisionCtx produced_at);

  static MPMatrix zeros(std::size_t rows, std::size_t cols, const PrecisionCtx& ctx);
  static MPMatrix identity(std::size_t n, const PrecisionCtx& ctx);
  // Row-major doubles, each rounded to ctx.
  static MPMatrix from_doubles(std::size_t rows, std::size_t cols,
                               std::span<const double> re, const PrecisionCtx& ctx,
                               std::span<const double> im = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_real() const noexcept { return im_.empty(); }
  const PrecisionCtx& produced_at() const noexcept { return ctx_; }

  const Real& re(std::size_t i, std::size_t j) const { return re_[i * cols_ + j]; }
  // Only valid when !is_real().
  const Real& im(std::size_t i, std::size_t j) const { return im_[i * cols_ + j]; }
  std::span<const Real> re_data() const noexcept { return re_; }
  std::span<const Real> im_data() const noexcept { return im_; }

  // Same shape, precision and bit patterns (a real matrix equals a complex
  // one only if the latter's imaginary parts are all +0).
  bool identical(const MPMatrix& other) const;
  bool is_zero() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Real> re_;
  std::vector<Real> im_;
  PrecisionCtx ctx_;
};

// Entrywise round-to-nearest at ctx. Idempotent.
MPMatrix round_to(const MPMatrix& a, const PrecisionCtx& ctx);

// fl_ctx(A*B): conventional inner products summed left to right, every
// scalar multiply and add rounded at ctx.
MPMatrix mat_mul(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx);

// fl_ctx(alpha*A + B): one rounding for the scaling, one for the sum.
MPMatrix mat_axpy(const Real& alpha, const MPMatrix& a, const MPMatrix& b,
                  const PrecisionCtx& ctx);

// fl_ctx(A + B) and fl_ctx(A - B), one rounding per entry.
MPMatrix mat_add(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx);
MPMatrix mat_sub(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx);

MPMatrix mat_scale(const Real& alpha, const MPMatrix& a, const PrecisionCtx& ctx);
MPMatrix negate(const MPMatrix& a);
// alpha * I with alpha rounded to ctx.
MPMatrix scalar_identity(const Real& alpha, std::size_t n, const PrecisionCtx& ctx);
// Exact scaling by 2^-ell.
MPMatrix scale_pow2(const MPMatrix& a, long ell);
// |A| entrywise (modulus for complex entries), rounded at ctx.
MPMatrix abs_entries(const MPMatrix& a, const PrecisionCtx& ctx);

// Maximum absolute column sum evaluated at 16 decimal digits.
Real one_norm(const MPMatrix& a);
// Same, at a caller-chosen context (used by oracles).
Real one_norm(const MPMatrix& a, const PrecisionCtx& ctx);

}  // namespace mpps
