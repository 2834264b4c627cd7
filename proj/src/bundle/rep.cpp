#include "splitlab/bundle/rep.hpp"

#include <cmath>
#include <complex>

namespace splitlab {

RepSpec RepSpec::massive(double m, int s) {
  RepSpec r;
  r.kind = Kind::Massive;
  r.mass = m;
  r.spin = s;
  r.validate();
  return r;
}

RepSpec RepSpec::massless(int h) {
  RepSpec r;
  r.kind = Kind::Massless;
  r.mass = 0.0;
  r.helicity = h;
  r.validate();
  return r;
}

int RepSpec::dim() const {
  if (is_massless()) return helicity == 0 ? 1 : 3;
  return 2 * spin + 1;
}

std::string RepSpec::label() const {
  if (is_massless()) return "massless(h=" + std::to_string(helicity) + ")";
  char buf[64];
  std::snprintf(buf, sizeof buf, "massive(m=%g,s=%d)", mass, spin);
  return buf;
}

void RepSpec::validate() const {
  if (sigma != 1 && sigma != -1) throw RepError("boost spin sign must be +1 or -1");
  if (is_massless()) {
    if (mass != 0.0) throw RepError("massless representation requires m = 0");
    if (helicity < -1 || helicity > 1) throw RepError("massless helicity must be in {-1, 0, 1}");
  } else {
    if (!(mass > 0)) throw RepError("massive representation requires m > 0");
    if (spin < 0 || spin > 2) throw RepError("massive spin must be in {0, 1, 2}");
  }
}

std::array<FiberMatrix, 3> spin_matrices(const RepSpec& rep) {
  const int d = rep.dim();
  std::array<FiberMatrix, 3> s;
  for (auto& m : s) m = FiberMatrix::Zero(d, d);
  const std::complex<double> I(0, 1);
  if (rep.is_massless()) {
    if (d == 3) {
      // (S_a)_{bc} = -i eps_{abc}
      for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        s[a](b, c) = -I;
        s[a](c, b) = I;
      }
    }
    return s;
  }
  const double j = rep.spin;
  for (int row = 0; row < d; ++row) {
    const double mz = j - row;
    s[2](row, row) = mz;
    if (row + 1 < d) {
      // <m| S_+ |m-1>
      const double mm = mz - 1;
      const double cp = std::sqrt(j * (j + 1) - mm * (mm + 1));
      s[0](row, row + 1) += 0.5 * cp;
      s[0](row + 1, row) += 0.5 * cp;
      s[1](row, row + 1) += -0.5 * I * cp;
      s[1](row + 1, row) += 0.5 * I * cp;
    }
  }
  return s;
}

}  // namespace splitlab
