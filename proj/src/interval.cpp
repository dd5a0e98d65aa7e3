#include "selci/interval.hpp"

#include "selci/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cctype>

namespace selci {

namespace {
std::string lower_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::T: return "t";
    case Method::Iv: return "iv";
    case Method::Ps: return "ps";
    case Method::Hr: return "hr";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  const std::string s = lower_case(name);
  if (s == "t") return Method::T;
  if (s == "iv") return Method::Iv;
  if (s == "ps") return Method::Ps;
  if (s == "hr") return Method::Hr;
  throw InvalidConfig("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Side s) { return s == Side::One ? "one" : "two"; }

Side parse_side(std::string_view name) {
  const std::string s = lower_case(name);
  if (s == "one") return Side::One;
  if (s == "two") return Side::Two;
  throw InvalidConfig("unknown side '" + std::string(name) + "'");
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += '|';
    out += f;
  }
  return out;
}

double normal_quantile(double prob) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double student_t_quantile(double prob, double dof) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), prob);
}

}  // namespace selci
