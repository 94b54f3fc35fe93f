#include "kdyn/exact/gauss_rational.hpp"

#include <cctype>
#include <stdexcept>

namespace kdyn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

mpq_class parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  mpq_class value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed fraction: " + std::string(text));
    mpz_class d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    value = mpq_class(mpz_class{std::string(num)}, d);
  } else {
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = s.substr(0, e);
      std::string_view ex = s.substr(e + 1);
      bool eneg = false;
      if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
        eneg = ex.front() == '-';
        ex.remove_prefix(1);
      }
      if (!all_digits(ex) || ex.size() > 6)
        throw std::invalid_argument("malformed exponent: " + std::string(text));
      exponent = std::stol(std::string(ex)) * (eneg ? -1 : 1);
    }
    std::string_view int_part = mantissa, frac_part;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      int_part = mantissa.substr(0, dot);
      frac_part = mantissa.substr(dot + 1);
    }
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw std::invalid_argument("malformed number: " + std::string(text));
    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class numer(digits.empty() ? "0" : digits);
    long scale = static_cast<long>(frac_part.size()) - exponent;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    value = scale >= 0 ? mpq_class(numer, ten_pow) : mpq_class(numer * ten_pow);
  }
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

GaussRational GaussRational::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.back() != 'i') return GaussRational(parse_rational(s));
  s.remove_suffix(1);
  // Split at the last sign that is not the leading one and not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string_view re_part = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? s : s.substr(split);
  im_part = trim(im_part);
  mpq_class im;
  if (im_part.empty() || im_part == "+")
    im = 1;
  else if (im_part == "-")
    im = -1;
  else
    im = parse_rational(im_part);
  mpq_class re = re_part.empty() ? mpq_class(0) : parse_rational(re_part);
  return {re, im};
}

GaussRational GaussRational::inverse() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw std::domain_error("division by zero in Q(i)");
  return {re_ / n, -im_ / n};
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class m = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (sgn(o.im_) == 0) {
    if (sgn(o.re_) == 0) throw std::domain_error("division by zero in Q(i)");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string GaussRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string im_str;
  if (im_ == 1)
    im_str = "i";
  else if (im_ == -1)
    im_str = "-i";
  else
    im_str = im_.get_str() + "i";
  if (sgn(re_) == 0) return im_str;
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im_str;
}

hp::Complex GaussRational::to_complex() const { return {hp::Real(re_), hp::Real(im_)}; }

hp::Real GaussRational::abs() const {
  if (sgn(im_) == 0) return hp::abs(hp::Real(re_));
  return hp::sqrt(hp::Real(norm()));
}

std::size_t GaussRational::digit_count() const {
  auto digits = [](const mpz_class& z) { return mpz_sizeinbase(z.get_mpz_t(), 10); };
  return digits(re_.get_num()) + digits(re_.get_den()) + digits(im_.get_num()) +
         digits(im_.get_den());
}

}  // namespace kdyn
