#include "curvature/scalar.hpp"

#include <cctype>
#include <string>

#include "curvature/error.hpp"

namespace curv {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid_dimension";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kSymmetryConflict: return "symmetry_conflict";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kCombinatorialGuard: return "combinatorial_guard";
    case ErrorCode::kIdentityViolation: return "identity_violation";
    case ErrorCode::kUnsupportedField: return "unsupported_field";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

const char* field_name(Field f) {
  switch (f) {
    case Field::kRational: return "rational";
    case Field::kGaussianRational: return "gaussian_rational";
    case Field::kF64: return "f64";
    case Field::kC64: return "c64";
  }
  return "unknown";
}

Field parse_field(std::string_view name) {
  if (name == "rational") return Field::kRational;
  if (name == "gaussian_rational") return Field::kGaussianRational;
  if (name == "f64") return Field::kF64;
  if (name == "c64") return Field::kC64;
  throw Error(ErrorCode::kParse, "unknown field '" + std::string(name) + "'");
}

namespace {

std::string trimmed(std::string_view text) {
  size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

bool is_integer_literal(const std::string& s) {
  size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(const std::string& s) {
  if (!is_integer_literal(s)) throw Error(ErrorCode::kParse, "bad integer '" + s + "'");
  return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = trimmed(text);
  if (s.empty()) throw Error(ErrorCode::kParse, "empty rational literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num = parse_integer(trimmed(s.substr(0, slash)));
    mpz_class den = parse_integer(trimmed(s.substr(slash + 1)));
    if (den == 0) throw Error(ErrorCode::kParse, "zero denominator in '" + s + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty() || !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+')
      throw Error(ErrorCode::kParse, "bad decimal literal '" + s + "'");
    mpz_class scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class w = parse_integer(whole);
    mpz_class f = parse_integer(frac);
    mpz_class num = w * scale + (negative ? mpz_class(-f) : f);
    Rational r(num, scale);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(s));
}

GaussRational parse_gauss_rational(std::string_view text) {
  const std::string s = trimmed(text);
  if (s.empty()) throw Error(ErrorCode::kParse, "empty gaussian rational literal");
  if (s.back() != 'i') return GaussRational(parse_rational(s));
  // Split at the last sign that is not the leading one and not part of an exponent.
  const std::string body = s.substr(0, s.size() - 1);
  size_t split = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_part = split == std::string::npos ? body : body.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
  return {re, parse_rational(im_part)};
}

std::string to_string(const Rational& v) { return v.get_str(); }

std::string to_string(const GaussRational& v) {
  const bool has_im = sgn(v.imag()) != 0;
  if (!has_im) return v.real().get_str();
  std::string im = v.imag() == 1 ? "" : v.imag() == -1 ? "-" : v.imag().get_str();
  if (sgn(v.real()) == 0) return im + "i";
  std::string sign = sgn(v.imag()) > 0 ? "+" : "";
  return v.real().get_str() + sign + im + "i";
}

}  // namespace curv
