#include "splitlab/bundle/section.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>

namespace splitlab {

static_assert(std::endian::native == std::endian::little, "section serialization assumes a little-endian host");

Section::Section(GridRef grid, RepSpec rep) : grid_(std::move(grid)), rep_(rep), dim_(rep.dim()) {
  data_.assign(grid_->size() * dim_, cplx(0, 0));
}

Section::Section(GridRef grid, RepSpec rep, std::vector<cplx> data)
    : grid_(std::move(grid)), rep_(rep), dim_(rep.dim()), data_(std::move(data)) {
  if (data_.size() != grid_->size() * dim_) throw SectionError("section data size does not match grid and fiber");
}

void Section::check_compatible(const Section& o) const {
  if (!(rep_ == o.rep_)) throw SectionError("sections belong to different representations");
  if (grid_ != o.grid_ && !grid_->same_as(*o.grid_)) throw SectionError("sections live on different grids");
  if (parity_ != o.parity_) throw SectionError("sections have opposite pole-reflection parity");
}

Section& Section::operator+=(const Section& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Section& Section::operator-=(const Section& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Section& Section::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Section Section::times(const GridFunction& f) const {
  Section out = *this;
  for (std::size_t n = 0; n < nodes(); ++n)
    for (int c = 0; c < dim_; ++c) out.at(n, c) *= f[n];
  return out;
}

Section Section::times(const std::vector<double>& f) const {
  Section out = *this;
  for (std::size_t n = 0; n < nodes(); ++n)
    for (int c = 0; c < dim_; ++c) out.at(n, c) *= f[n];
  return out;
}

double energy(const RepSpec& rep, double r) { return std::sqrt(r * r + rep.mass * rep.mass); }

cplx inner(const Section& psi, const Section& phi) {
  psi.check_compatible(phi);
  const MomentumGrid& g = *psi.grid();
  cplx total(0, 0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    cplx local(0, 0);
    for (int c = 0; c < psi.dim(); ++c) local += std::conj(psi.at(n, c)) * phi.at(n, c);
    total += local * (g.volume_weight(n) / energy(psi.rep(), g.radius(n)));
  }
  return total;
}

double norm(const Section& psi) { return std::sqrt(std::max(0.0, inner(psi, psi).real())); }

double max_abs(const Section& psi) {
  double m = 0;
  for (const auto& v : psi.data()) m = std::max(m, std::abs(v));
  return m;
}

double transversality_defect(const Section& psi) {
  if (!psi.rep().is_massless() || psi.dim() != 3) return 0.0;
  const MomentumGrid& g = *psi.grid();
  double worst = 0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 u = g.khat(n);
    cplx d(0, 0);
    for (int c = 0; c < 3; ++c) d += u[c] * psi.at(n, c);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

GridFunction grid_function(const MomentumGrid& g, const std::function<cplx(const Vec3& k)>& f) {
  GridFunction out(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) out[n] = f(g.k(n));
  return out;
}

TestProfile parse_profile(const std::string& name) {
  if (name == "gaussian-bump") return TestProfile::GaussianBump;
  if (name == "multi-bump") return TestProfile::MultiBump;
  throw SectionError("unknown test profile '" + name + "'");
}

std::string profile_name(TestProfile p) { return p == TestProfile::GaussianBump ? "gaussian-bump" : "multi-bump"; }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConcentration = 12.0;

// Portable uniform doubles: identical streams on every standard library.
struct Uniform {
  std::mt19937_64 eng;
  explicit Uniform(std::uint64_t seed) : eng(seed) {}
  double operator()() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double in(double a, double b) { return a + (b - a) * (*this)(); }
};

struct Bump {
  Vec3 center;
  cplx amplitude;
  double tilt;                   // radial profile (1 - x^2)(1 + tilt x)
  std::vector<cplx> fiber;       // massive: constant fiber vector
  Vec3 polarization{0, 0, 0};    // massless |h| = 1: real reference vector
};

Vec3 unit_from_angles(double th, double ph) {
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Bump make_bump(Uniform& u, const RepSpec& rep) {
  Bump b;
  b.center = unit_from_angles(u.in(kPi / 3, 2 * kPi / 3), u.in(0, 2 * kPi));
  b.amplitude = std::polar(u.in(0.5, 1.0), u.in(0, 2 * kPi));
  b.tilt = u.in(-0.3, 0.3);
  const int d = rep.dim();
  if (rep.is_massless() && d == 3) {
    Vec3 c{u.in(-1, 1), u.in(-1, 1), u.in(-1, 1)};
    const double along = dot(c, b.center);
    for (int i = 0; i < 3; ++i) c[i] -= along * b.center[i];
    const double len = std::sqrt(dot(c, c));
    for (int i = 0; i < 3; ++i) c[i] /= len;
    b.polarization = c;
  } else {
    double nn = 0;
    b.fiber.resize(d);
    for (int c = 0; c < d; ++c) {
      b.fiber[c] = cplx(u.in(-1, 1), u.in(-1, 1));
      nn += std::norm(b.fiber[c]);
    }
    for (auto& v : b.fiber) v /= std::sqrt(nn);
  }
  return b;
}

}  // namespace

Section random_test_section(const RepSpec& rep, const GridRef& grid, std::uint64_t seed, TestProfile profile) {
  rep.validate();
  Uniform u(seed);
  const int count = profile == TestProfile::GaussianBump ? 1 : 3;
  std::vector<Bump> bumps;
  for (int i = 0; i < count; ++i) bumps.push_back(make_bump(u, rep));
  const MomentumGrid& g = *grid;
  const double center = 0.5 * (g.r_min() + g.r_max()), half = 0.5 * (g.r_max() - g.r_min());
  Section s(grid, rep);
  const int d = rep.dim();
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 kh = g.khat(n);
    const double x = (g.radius(n) - center) / half;
    const double window = (1 - x) * (1 + x);
    for (const Bump& b : bumps) {
      const double ang = std::exp(kConcentration * (dot(kh, b.center) - 1));
      const cplx w = b.amplitude * (window * (1 + b.tilt * x) * ang);
      if (rep.is_massless() && d == 3) {
        // Project onto the transverse plane, then onto the helicity eigenline of i khat x (.).
        const Vec3& c = b.polarization;
        const double along = dot(c, kh);
        const Vec3 cp{c[0] - along * kh[0], c[1] - along * kh[1], c[2] - along * kh[2]};
        const Vec3 cross{kh[1] * cp[2] - kh[2] * cp[1], kh[2] * cp[0] - kh[0] * cp[2], kh[0] * cp[1] - kh[1] * cp[0]};
        for (int i = 0; i < 3; ++i) s.at(n, i) += w * 0.5 * cplx(cp[i], rep.helicity * cross[i]);
      } else {
        for (int c = 0; c < d; ++c) s.at(n, c) += w * b.fiber[c];
      }
    }
  }
  return s;
}

GridFunction random_scalar_function(const MomentumGrid& g, std::uint64_t seed) {
  Uniform u(seed ^ 0x9e3779b97f4a7c15ULL);
  const Vec3 c = unit_from_angles(u.in(kPi / 4, 3 * kPi / 4), u.in(0, 2 * kPi));
  const double tilt = u.in(-0.5, 0.5);
  const double center = 0.5 * (g.r_min() + g.r_max()), half = 0.5 * (g.r_max() - g.r_min());
  GridFunction f(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double x = (g.radius(n) - center) / half;
    f[n] = 0.5 + (1 + tilt * x) * std::exp(4.0 * (dot(g.khat(n), c) - 1));
  }
  return f;
}

namespace {

constexpr char kMagic[8] = {'S', 'P', 'L', 'S', 'E', 'C', 'T', '1'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderSize = 72;

template <class T>
void put(std::vector<unsigned char>& buf, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  buf.insert(buf.end(), b, b + sizeof(T));
}

template <class T>
T get(const unsigned char*& p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  p += sizeof(T);
  return v;
}

std::uint64_t fnv1a(const unsigned char* p, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<unsigned char> encode(const Section& s) {
  std::vector<unsigned char> buf(kMagic, kMagic + 8);
  const RepSpec& r = s.rep();
  const MomentumGrid& g = *s.grid();
  put<std::uint32_t>(buf, kFormatVersion);
  put<std::uint32_t>(buf, r.is_massless() ? 1 : 0);
  put<std::int32_t>(buf, r.spin);
  put<std::int32_t>(buf, r.helicity);
  put<std::int32_t>(buf, r.sigma);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(s.dim()));
  put<double>(buf, r.mass);
  put<double>(buf, g.r_min());
  put<double>(buf, g.r_max());
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n_r()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n_theta()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n_phi()));
  put<std::uint32_t>(buf, 16);
  for (const cplx& v : s.data()) {
    put<double>(buf, v.real());
    put<double>(buf, v.imag());
  }
  return buf;
}

}  // namespace

void write_section(const Section& s, const std::string& path) {
  const auto buf = encode(s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SectionError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SectionError("write to '" + path + "' failed");
}

Section read_section(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SectionError("cannot open '" + path + "'");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderSize || std::memcmp(buf.data(), kMagic, 8) != 0)
    throw SectionError("'" + path + "' is not a section file");
  const unsigned char* p = buf.data() + 8;
  if (get<std::uint32_t>(p) != kFormatVersion) throw SectionError("unsupported section format version");
  RepSpec r;
  r.kind = get<std::uint32_t>(p) == 1 ? RepSpec::Kind::Massless : RepSpec::Kind::Massive;
  r.spin = get<std::int32_t>(p);
  r.helicity = get<std::int32_t>(p);
  r.sigma = get<std::int32_t>(p);
  const auto dim = get<std::uint32_t>(p);
  r.mass = get<double>(p);
  const double rmin = get<double>(p), rmax = get<double>(p);
  const auto nr = get<std::uint32_t>(p), nt = get<std::uint32_t>(p), np = get<std::uint32_t>(p);
  if (get<std::uint32_t>(p) != 16) throw SectionError("only complex128 payloads are supported");
  r.validate();
  if (static_cast<int>(dim) != r.dim()) throw SectionError("fiber dimension does not match representation");
  auto grid = make_grid(static_cast<int>(nr), static_cast<int>(nt), static_cast<int>(np), rmin, rmax);
  const std::size_t count = grid->size() * dim;
  if (buf.size() != kHeaderSize + 16 * count) throw SectionError("section payload has the wrong length");
  std::vector<cplx> data(count);
  for (auto& v : data) {
    const double re = get<double>(p);
    const double im = get<double>(p);
    v = cplx(re, im);
  }
  return Section(grid, r, std::move(data));
}

std::string section_sidecar_json(const Section& s, const std::string& binary_path) {
  const auto buf = encode(s);
  const MomentumGrid& g = *s.grid();
  const RepSpec& r = s.rep();
  nlohmann::ordered_json j;
  j["format"] = "splitlab-section";
  j["version"] = kFormatVersion;
  j["binary"] = binary_path;
  j["byte_order"] = "little";
  j["header_bytes"] = kHeaderSize;
  j["scalar"] = "complex128";
  j["node_order"] = "r-major, then theta, then phi; fiber component innermost";
  j["rep"] = {{"kind", r.is_massless() ? "massless" : "massive"}, {"mass", r.mass}, {"spin", r.spin},
              {"helicity", r.helicity}, {"boost_sign", r.sigma}, {"dim", s.dim()}};
  j["grid"] = {{"n_r", g.n_r()}, {"n_theta", g.n_theta()}, {"n_phi", g.n_phi()}, {"r_min", g.r_min()},
               {"r_max", g.r_max()}, {"radial_nodes", "chebyshev-gauss-lobatto"},
               {"theta_nodes", "(j + 1/2) pi / n_theta"}, {"phi_nodes", "2 pi j / n_phi"}};
  j["values"] = s.data().size();
  j["payload_fnv1a64"] = fnv1a(buf.data() + kHeaderSize, buf.size() - kHeaderSize);
  j["norm"] = norm(s);
  return j.dump(2);
}

}  // namespace splitlab
