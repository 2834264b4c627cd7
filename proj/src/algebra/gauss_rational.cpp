#include "splitlab/algebra/gauss_rational.hpp"

#include <stdexcept>

namespace splitlab {

GaussQ GaussQ::inverse() const {
  mpq_class n = re * re + im * im;
  if (sgn(n) == 0) throw std::domain_error("inverse of zero");
  return GaussQ(re / n, -im / n);
}

std::string GaussQ::str() const {
  if (sgn(im) == 0) return re.get_str();
  if (sgn(re) == 0) return im.get_str() + "i";
  std::string s = re.get_str();
  if (sgn(im) > 0) s += "+";
  return s + im.get_str() + "i";
}

}  // namespace splitlab
