#include "mpps/precision.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "mpps/errors.hpp"

namespace mpps {

namespace {

constexpr double kLog2Of10 = 3.32192809488736234787;

void require_same_shape(const MPMatrix& a, const MPMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()) + ")");
  }
}

std::vector<Real> fresh(std::size_t count, mpfr_prec_t bits) {
  std::vector<Real> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.emplace_back(bits);
  return out;
}

}  // namespace

mpfr_prec_t bits_for_digits(int decimal_digits) {
  // d*log2(10) is never an integer for d >= 1, so ceil of the double is safe.
  return static_cast<mpfr_prec_t>(std::ceil(decimal_digits * kLog2Of10));
}

PrecisionCtx::PrecisionCtx(int decimal_digits) : digits_(decimal_digits), bits_(0) {
  if (decimal_digits < 1) {
    throw InvalidArgument("precision must have at least 1 decimal digit, got " +
                          std::to_string(decimal_digits));
  }
  bits_ = bits_for_digits(decimal_digits);
}

Real PrecisionCtx::unit_roundoff() const { return Real::pow10(-digits_, 64); }

MPMatrix::MPMatrix(std::size_t rows, std::size_t cols, std::vector<Real> re,
                   std::vector<Real> im, PrecisionCtx produced_at)
    : rows_(rows), cols_(cols), re_(std::move(re)), im_(std::move(im)), ctx_(produced_at) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (re_.size() != rows * cols) throw DimensionError("entry count does not match shape");
  if (!im_.empty() && im_.size() != rows * cols) {
    throw DimensionError("imaginary part does not match shape");
  }
}

MPMatrix MPMatrix::zeros(std::size_t rows, std::size_t cols, const PrecisionCtx& ctx) {
  return MPMatrix(rows, cols, fresh(rows * cols, ctx.bits()), {}, ctx);
}

MPMatrix MPMatrix::identity(std::size_t n, const PrecisionCtx& ctx) {
  auto re = fresh(n * n, ctx.bits());
  for (std::size_t i = 0; i < n; ++i) mpfr_set_ui(re[i * n + i].get(), 1, MPFR_RNDN);
  return MPMatrix(n, n, std::move(re), {}, ctx);
}

MPMatrix MPMatrix::from_doubles(std::size_t rows, std::size_t cols,
                                std::span<const double> re, const PrecisionCtx& ctx,
                                std::span<const double> im) {
  if (re.size() != rows * cols || (!im.empty() && im.size() != rows * cols)) {
    throw DimensionError("from_doubles: value count does not match shape");
  }
  std::vector<Real> r;
  r.reserve(re.size());
  for (double v : re) r.emplace_back(v, ctx.bits());
  std::vector<Real> c;
  c.reserve(im.size());
  for (double v : im) c.emplace_back(v, ctx.bits());
  return MPMatrix(rows, cols, std::move(r), std::move(c), ctx);
}

bool MPMatrix::identical(const MPMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || !(ctx_ == other.ctx_)) return false;
  for (std::size_t k = 0; k < re_.size(); ++k) {
    if (!re_[k].identical(other.re_[k])) return false;
  }
  if (is_real() && other.is_real()) return true;
  for (std::size_t k = 0; k < re_.size(); ++k) {
    const bool mine_zero = is_real() || (im_[k].is_zero() && mpfr_signbit(im_[k].get()) == 0);
    const bool theirs_zero =
        other.is_real() || (other.im_[k].is_zero() && mpfr_signbit(other.im_[k].get()) == 0);
    if (is_real() || other.is_real()) {
      if (!(mine_zero && theirs_zero)) return false;
    } else if (!im_[k].identical(other.im_[k])) {
      return false;
    }
  }
  return true;
}

bool MPMatrix::is_zero() const {
  for (const auto& v : re_) {
    if (!v.is_zero()) return false;
  }
  for (const auto& v : im_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

MPMatrix round_to(const MPMatrix& a, const PrecisionCtx& ctx) {
  std::vector<Real> re;
  re.reserve(a.re_data().size());
  for (const auto& v : a.re_data()) re.push_back(v.rounded(ctx.bits()));
  std::vector<Real> im;
  im.reserve(a.im_data().size());
  for (const auto& v : a.im_data()) im.push_back(v.rounded(ctx.bits()));
  return MPMatrix(a.rows(), a.cols(), std::move(re), std::move(im), ctx);
}

MPMatrix mat_mul(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
  }
  const std::size_t rows = a.rows();
  const std::size_t cols = b.cols();
  const std::size_t inner = a.cols();
  const mpfr_prec_t bits = ctx.bits();
  auto re = fresh(rows * cols, bits);
  Real term(bits);
  auto a_re = a.re_data();
  auto b_re = b.re_data();

  if (a.is_real() && b.is_real()) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        mpfr_ptr acc = re[i * cols + j].get();
        mpfr_mul(acc, a_re[i * inner].get(), b_re[j].get(), MPFR_RNDN);
        for (std::size_t k = 1; k < inner; ++k) {
          mpfr_mul(term.get(), a_re[i * inner + k].get(), b_re[k * cols + j].get(), MPFR_RNDN);
          mpfr_add(acc, acc, term.get(), MPFR_RNDN);
        }
      }
    }
    return MPMatrix(rows, cols, std::move(re), {}, ctx);
  }

  // Complex product (x + iy)(z + iw): real part fl(fl(xz) - fl(yw)),
  // imaginary part fl(fl(xw) + fl(yz)); a missing imaginary part is an
  // exact zero, so its terms are skipped.
  auto im = fresh(rows * cols, bits);
  const bool a_cplx = !a.is_real();
  const bool b_cplx = !b.is_real();
  auto a_im = a.im_data();
  auto b_im = b.im_data();
  Real prod_re(bits);
  Real prod_im(bits);
  Real tmp(bits);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < inner; ++k) {
        mpfr_srcptr x = a_re[i * inner + k].get();
        mpfr_srcptr z = b_re[k * cols + j].get();
        mpfr_mul(prod_re.get(), x, z, MPFR_RNDN);
        if (a_cplx && b_cplx) {
          mpfr_srcptr y = a_im[i * inner + k].get();
          mpfr_srcptr w = b_im[k * cols + j].get();
          mpfr_mul(tmp.get(), y, w, MPFR_RNDN);
          mpfr_sub(prod_re.get(), prod_re.get(), tmp.get(), MPFR_RNDN);
          mpfr_mul(prod_im.get(), x, w, MPFR_RNDN);
          mpfr_mul(tmp.get(), y, z, MPFR_RNDN);
          mpfr_add(prod_im.get(), prod_im.get(), tmp.get(), MPFR_RNDN);
        } else if (a_cplx) {
          mpfr_mul(prod_im.get(), a_im[i * inner + k].get(), z, MPFR_RNDN);
        } else {
          mpfr_mul(prod_im.get(), x, b_im[k * cols + j].get(), MPFR_RNDN);
        }
        mpfr_ptr acc_re = re[i * cols + j].get();
        mpfr_ptr acc_im = im[i * cols + j].get();
        if (k == 0) {
          mpfr_set(acc_re, prod_re.get(), MPFR_RNDN);
          mpfr_set(acc_im, prod_im.get(), MPFR_RNDN);
        } else {
          mpfr_add(acc_re, acc_re, prod_re.get(), MPFR_RNDN);
          mpfr_add(acc_im, acc_im, prod_im.get(), MPFR_RNDN);
        }
      }
    }
  }
  return MPMatrix(rows, cols, std::move(re), std::move(im), ctx);
}

MPMatrix mat_axpy(const Real& alpha, const MPMatrix& a, const MPMatrix& b,
                  const PrecisionCtx& ctx) {
  require_same_shape(a, b, "mat_axpy");
  const std::size_t count = a.rows() * a.cols();
  const mpfr_prec_t bits = ctx.bits();
  auto re = fresh(count, bits);
  auto a_re = a.re_data();
  auto b_re = b.re_data();
  for (std::size_t k = 0; k < count; ++k) {
    mpfr_mul(re[k].get(), alpha.get(), a_re[k].get(), MPFR_RNDN);
    mpfr_add(re[k].get(), re[k].get(), b_re[k].get(), MPFR_RNDN);
  }
  if (a.is_real() && b.is_real()) return MPMatrix(a.rows(), a.cols(), std::move(re), {}, ctx);

  auto im = fresh(count, bits);
  for (std::size_t k = 0; k < count; ++k) {
    if (!a.is_real()) mpfr_mul(im[k].get(), alpha.get(), a.im_data()[k].get(), MPFR_RNDN);
    if (!b.is_real()) {
      if (a.is_real()) {
        mpfr_set(im[k].get(), b.im_data()[k].get(), MPFR_RNDN);
      } else {
        mpfr_add(im[k].get(), im[k].get(), b.im_data()[k].get(), MPFR_RNDN);
      }
    }
  }
  return MPMatrix(a.rows(), a.cols(), std::move(re), std::move(im), ctx);
}

namespace {

template <typename Op>
MPMatrix entrywise(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx, Op op,
                   const char* name) {
  require_same_shape(a, b, name);
  const std::size_t count = a.rows() * a.cols();
  auto re = fresh(count, ctx.bits());
  for (std::size_t k = 0; k < count; ++k) {
    op(re[k].get(), a.re_data()[k].get(), b.re_data()[k].get());
  }
  if (a.is_real() && b.is_real()) return MPMatrix(a.rows(), a.cols(), std::move(re), {}, ctx);
  auto im = fresh(count, ctx.bits());
  Real zero(ctx.bits());
  for (std::size_t k = 0; k < count; ++k) {
    mpfr_srcptr x = a.is_real() ? zero.get() : a.im_data()[k].get();
    mpfr_srcptr y = b.is_real() ? zero.get() : b.im_data()[k].get();
    op(im[k].get(), x, y);
  }
  return MPMatrix(a.rows(), a.cols(), std::move(re), std::move(im), ctx);
}

}  // namespace

MPMatrix mat_add(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx) {
  return entrywise(
      a, b, ctx, [](mpfr_ptr out, mpfr_srcptr x, mpfr_srcptr y) { mpfr_add(out, x, y, MPFR_RNDN); },
      "mat_add");
}

MPMatrix mat_sub(const MPMatrix& a, const MPMatrix& b, const PrecisionCtx& ctx) {
  return entrywise(
      a, b, ctx, [](mpfr_ptr out, mpfr_srcptr x, mpfr_srcptr y) { mpfr_sub(out, x, y, MPFR_RNDN); },
      "mat_sub");
}

MPMatrix mat_scale(const Real& alpha, const MPMatrix& a, const PrecisionCtx& ctx) {
  const std::size_t count = a.rows() * a.cols();
  auto re = fresh(count, ctx.bits());
  for (std::size_t k = 0; k < count; ++k) {
    mpfr_mul(re[k].get(), alpha.get(), a.re_data()[k].get(), MPFR_RNDN);
  }
  std::vector<Real> im;
  if (!a.is_real()) {
    im = fresh(count, ctx.bits());
    for (std::size_t k = 0; k < count; ++k) {
      mpfr_mul(im[k].get(), alpha.get(), a.im_data()[k].get(), MPFR_RNDN);
    }
  }
  return MPMatrix(a.rows(), a.cols(), std::move(re), std::move(im), ctx);
}

MPMatrix negate(const MPMatrix& a) {
  std::vector<Real> re;
  re.reserve(a.re_data().size());
  for (const auto& v : a.re_data()) re.push_back(-v);
  std::vector<Real> im;
  im.reserve(a.im_data().size());
  for (const auto& v : a.im_data()) im.push_back(-v);
  return MPMatrix(a.rows(), a.cols(), std::move(re), std::move(im), a.produced_at());
}

MPMatrix scalar_identity(const Real& alpha, std::size_t n, const PrecisionCtx& ctx) {
  auto re = fresh(n * n, ctx.bits());
  for (std::size_t i = 0; i < n; ++i) mpfr_set(re[i * n + i].get(), alpha.get(), MPFR_RNDN);
  return MPMatrix(n, n, std::move(re), {}, ctx);
}

MPMatrix scale_pow2(const MPMatrix& a, long ell) {
  std::vector<Real> re;
  re.reserve(a.re_data().size());
  for (const auto& v : a.re_data()) {
    Real out(v.bits());
    mpfr_mul_2si(out.get(), v.get(), -ell, MPFR_RNDN);
    re.push_back(std::move(out));
  }
  std::vector<Real> im;
  im.reserve(a.im_data().size());
  for (const auto& v : a.im_data()) {
    Real out(v.bits());
    mpfr_mul_2si(out.get(), v.get(), -ell, MPFR_RNDN);
    im.push_back(std::move(out));
  }
  return MPMatrix(a.rows(), a.cols(), std::move(re), std::move(im), a.produced_at());
}

MPMatrix abs_entries(const MPMatrix& a, const PrecisionCtx& ctx) {
  const std::size_t count = a.rows() * a.cols();
  auto re = fresh(count, ctx.bits());
  for (std::size_t k = 0; k < count; ++k) {
    if (a.is_real()) {
      mpfr_abs(re[k].get(), a.re_data()[k].get(), MPFR_RNDN);
    } else {
      mpfr_hypot(re[k].get(), a.re_data()[k].get(), a.im_data()[k].get(), MPFR_RNDN);
    }
  }
  return MPMatrix(a.rows(), a.cols(), std::move(re), {}, ctx);
}

Real one_norm(const MPMatrix& a) { return one_norm(a, PrecisionCtx(16)); }

Real one_norm(const MPMatrix& a, const PrecisionCtx& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real best(bits);
  Real column(bits);
  Real entry(bits);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    mpfr_set_zero(column.get(), 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (a.is_real()) {
        mpfr_abs(entry.get(), a.re(i, j).get(), MPFR_RNDN);
      } else {
        mpfr_hypot(entry.get(), a.re(i, j).get(), a.im(i, j).get(), MPFR_RNDN);
      }
      mpfr_add(column.get(), column.get(), entry.get(), MPFR_RNDN);
    }
    if (best < column) best = column;
  }
  return best;
}

}  // namespace mpps
