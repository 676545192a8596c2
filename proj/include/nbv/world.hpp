// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Star-shaped objects given by a radial function f(phi), and their
// discretisation into one surface point per world pixel.

#ifndef NBV_WORLD_HPP_
#define NBV_WORLD_HPP_

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nbv/angles.hpp"
#include "nbv/errors.hpp"
#include "nbv/geometry.hpp"
#include "nbv/kernels.hpp"

namespace nbv {

enum class ObjectKind { kCircle, kEllipse, kFlower, kSquare, kPolygon, kGpSample };

inline std::string to_string(ObjectKind k) {
  switch (k) {
    case ObjectKind::kCircle:
      return "circle";
    case ObjectKind::kEllipse:
      return "ellipse";
    case ObjectKind::kFlower:
      return "flower";
    case ObjectKind::kSquare:
      return "square";
    case ObjectKind::kPolygon:
      return "polygon";
    case ObjectKind::kGpSample:
      return "gp";
  }
  return "circle";
}

// Shape family used for per-class aggregation. Circles count as ellipses.
inline std::string object_class(ObjectKind k) {
  return k == ObjectKind::kCircle ? "ellipse" : to_string(k);
}

class SurfaceObject {
 public:
  static SurfaceObject circle(double r0) {
    detail::require(r0 > 0.0, "circle radius must be positive");
    SurfaceObject o(ObjectKind::kCircle);
    o.p_ = {r0};
    return o;
  }

  static SurfaceObject ellipse(double a, double b, double rotation = 0.0) {
    detail::require(a > 0.0 && b > 0.0, "ellipse semi-axes must be positive");
    SurfaceObject o(ObjectKind::kEllipse);
    o.p_ = {a, b, rotation};
    return o;
  }

  // f = (d_min + d_max) / 2 + amp * cos(freq * (phi - phase)).
  static SurfaceObject flower(double d_min, double d_max, double amp, int freq,
                              double phase = 0.0) {
    detail::require(freq >= 1, "flower frequency must be a positive integer");
    detail::require(amp >= 0.0 && amp <= 0.5 * (d_max - d_min),
                    "flower amplitude must lie in [0, (d_max - d_min) / 2]");
    SurfaceObject o(ObjectKind::kFlower);
    o.p_ = {0.5 * (d_min + d_max), amp, static_cast<double>(freq), phase};
    return o;
  }

  static SurfaceObject square(double half_width, double rotation = 0.0) {
    detail::require(half_width > 0.0, "square half-width must be positive");
    std::vector<Vec2> v = {{half_width, half_width},
                           {-half_width, half_width},
                           {-half_width, -half_width},
                           {half_width, -half_width}};
    double c = std::cos(rotation), s = std::sin(rotation);
    for (auto& p : v) p = {c * p.x - s * p.y, s * p.x + c * p.y};
    SurfaceObject o = polygon(v);
    o.kind_ = ObjectKind::kSquare;
    o.p_ = {half_width, rotation};
    return o;
  }

  // Vertices in counter-clockwise order around the origin. Every ray from
  // the origin must cross the boundary exactly once.
  static SurfaceObject polygon(const std::vector<Vec2>& vertices) {
    detail::require(vertices.size() >= 3, "polygon needs at least 3 vertices");
    SurfaceObject o(ObjectKind::kPolygon);
    o.vertices_ = vertices;
    std::size_t n = vertices.size();
    o.start_ = std::atan2(vertices[0].y, vertices[0].x);
    o.cum_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = vertices[i];
      const Vec2& b = vertices[(i + 1) % n];
      detail::require(std::hypot(a.x, a.y) > 0.0,
                      "polygon vertex coincides with the origin");
      double step = signed_angle(std::atan2(b.y, b.x) - std::atan2(a.y, a.x));
      if (!(step > 1e-12 && step < kPi - 1e-12)) {
        throw ConfigError("polygon is not star-shaped around the origin");
      }
      o.cum_[i + 1] = o.cum_[i] + step;
    }
    if (std::abs(o.cum_[n] - kTwoPi) > 1e-9) {
      throw ConfigError("polygon is not star-shaped around the origin");
    }
    return o;
  }

  // Radial function tabulated at phi_k = 2 pi k / n, linearly interpolated.
  static SurfaceObject gp_sample(std::vector<double> values) {
    detail::require(values.size() >= 8, "gp object grid needs >= 8 values");
    SurfaceObject o(ObjectKind::kGpSample);
    o.p_ = std::move(values);
    return o;
  }

  ObjectKind kind() const { return kind_; }
  const std::vector<double>& params() const { return p_; }

  double operator()(double phi) const {
    switch (kind_) {
      case ObjectKind::kCircle:
        return p_[0];
      case ObjectKind::kEllipse: {
        double c = std::cos(phi - p_[2]), s = std::sin(phi - p_[2]);
        return p_[0] * p_[1] /
               std::sqrt(p_[1] * c * p_[1] * c + p_[0] * s * p_[0] * s);
      }
      case ObjectKind::kFlower:
        return p_[0] + p_[1] * std::cos(p_[2] * (phi - p_[3]));
      case ObjectKind::kSquare:
      case ObjectKind::kPolygon:
        return polygon_radius(phi);
      case ObjectKind::kGpSample: {
        int n = static_cast<int>(p_.size());
        double x = wrap_angle(phi) / kTwoPi * n;
        int i = static_cast<int>(std::floor(x));
        double f = x - i;
        i %= n;
        return (1.0 - f) * p_[i] + f * p_[(i + 1) % n];
      }
    }
    return 0.0;
  }

  // Throws unless d_min <= f <= d_max on a dense sweep.
  void check_bounds(double d_min, double d_max, int samples = 20000) const {
    for (int k = 0; k < samples; ++k) {
      double v = (*this)(kTwoPi * k / samples);
      if (v < d_min - 1e-9 || v > d_max + 1e-9) {
        throw ConfigError("object radius " + std::to_string(v) +
                          " leaves [d_min, d_max]");
      }
    }
  }

 private:
  explicit SurfaceObject(ObjectKind k) : kind_(k) {}

  double polygon_radius(double phi) const {
    double off = wrap_angle(phi - start_);
    std::size_t n = vertices_.size();
    std::size_t i =
        std::upper_bound(cum_.begin(), cum_.end(), off) - cum_.begin();
    i = i == 0 ? 0 : std::min(i - 1, n - 1);
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    double ex = b.x - a.x, ey = b.y - a.y;
    double dx = std::cos(phi), dy = std::sin(phi);
    return (a.x * ey - a.y * ex) / (dx * ey - dy * ex);
  }

  ObjectKind kind_;
  std::vector<double> p_;
  std::vector<Vec2> vertices_;
  std::vector<double> cum_;
  double start_ = 0.0;
};

struct Pixel {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  bool operator==(const Pixel& o) const { return ix == o.ix && iy == o.iy; }
};

struct PixelHash {
  std::size_t operator()(const Pixel& p) const {
    return std::hash<std::int64_t>()(p.ix * 1000003 + p.iy);
  }
};

inline Pixel pixel_of(double x, double y, double h) {
  return {static_cast<std::int64_t>(std::floor(x / h)),
          static_cast<std::int64_t>(std::floor(y / h))};
}

struct SurfacePoint {
  double angle = 0.0;
  double radius = 0.0;
  double x = 0.0;
  double y = 0.0;
  Pixel pixel;
};

// One representative surface point per world pixel, sorted by angle.
struct SurfacePointSet {
  double h = 0.1;
  std::vector<SurfacePoint> points;

  std::size_t size() const { return points.size(); }
  const SurfacePoint& operator[](std::size_t i) const { return points[i]; }

  std::vector<double> angles() const {
    std::vector<double> a;
    a.reserve(points.size());
    for (const auto& p : points) a.push_back(p.angle);
    return a;
  }
};

// Cartesian spacing of consecutive sweep samples, in pixels.
inline constexpr double kSweepStep = 1.0 / 16.0;

// Dense angular sweep of a radial function. Each pixel the sweep enters
// keeps the first (smallest) angle that reaches it.
template <class F>
SurfacePointSet discretize(const F& f, double h) {
  detail::require(h > 0.0, "pixel size must be positive");
  double rmax = 0.0;
  for (int k = 0; k < 4096; ++k) {
    double v = f(kTwoPi * k / 4096);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("radial function must be finite and non-negative");
    }
    rmax = std::max(rmax, v);
  }
  int m = std::max(64, static_cast<int>(std::ceil(kTwoPi * rmax / (0.25 * h))));

  SurfacePointSet out;
  out.h = h;
  std::unordered_set<Pixel, PixelHash> seen;
  auto visit = [&](double phi, double r) {
    Vec2 p = polar_to_cartesian(phi, r);
    Pixel px = pixel_of(p.x, p.y, h);
    if (seen.insert(px).second) out.points.push_back({phi, r, p.x, p.y, px});
  };
  auto eval = [&](double phi) {
    double v = f(phi);
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("radial function must be finite and non-negative");
    }
    return v;
  };
  auto far = [&](double a0, double r0, double a1, double r1) {
    Vec2 p = polar_to_cartesian(a0, r0), q = polar_to_cartesian(a1, r1);
    return std::hypot(p.x - q.x, p.y - q.y) > kSweepStep * h;
  };
  // Visits samples strictly between a0 and a1.
  auto refine = [&](auto&& self, double a0, double r0, double a1, double r1,
                    int depth) -> void {
    if (depth > 40 || !far(a0, r0, a1, r1)) return;
    double am = 0.5 * (a0 + a1);
    double rm = eval(am);
    self(self, a0, r0, am, rm, depth + 1);
    visit(am, rm);
    self(self, am, rm, a1, r1, depth + 1);
  };
  double a_prev = 0.0;
  double r_prev = eval(0.0);
  visit(a_prev, r_prev);
  for (int k = 1; k <= m; ++k) {
    double a = kTwoPi * k / m;
    double r = k == m ? eval(0.0) : eval(a);
    refine(refine, a_prev, r_prev, a, r, 0);
    if (k < m) visit(a, r);
    a_prev = a;
    r_prev = r;
  }
  return out;
}

// Draws a radial function from a GP prior on a uniform grid and clamps it
// into [d_min, d_max].
inline SurfaceObject sample_gp_object(const Kernel& kernel, double mean,
                                      double d_min, double d_max,
                                      int grid_size, std::uint64_t seed) {
  detail::require(grid_size >= 8, "gp object grid needs >= 8 values");
  detail::require(d_min <= d_max, "d_min must not exceed d_max");
  Eigen::MatrixXd g(grid_size, grid_size);
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      g(i, j) = kernel(kTwoPi * (i - j) / grid_size);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  double tol = 1e-8 * std::max(kernel.variance(), 1e-300) * grid_size;
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -tol) {
    throw ConfigError("kernel Gram matrix is not positive semi-definite");
  }
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(grid_size);
  for (int i = 0; i < grid_size; ++i) z(i) = normal(rng);
  Eigen::VectorXd f =
      es.eigenvectors() * root.cwiseProduct(z) + Eigen::VectorXd::Constant(grid_size, mean);
  std::vector<double> v(grid_size);
  for (int i = 0; i < grid_size; ++i) v[i] = std::clamp(f(i), d_min, d_max);
  return SurfaceObject::gp_sample(std::move(v));
}

struct ZooEntry {
  std::string name;
  std::string object_class;
  SurfaceObject object;
};

namespace detail {

inline double zoo_number(const std::map<std::string, std::string>& kv,
                         const std::string& key, double fallback,
                         bool required, const std::string& where) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw ConfigError(where + ": missing '" + key + "'");
    return fallback;
  }
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": '" + key + "' is not a number");
  }
}

}  // namespace detail

// Parses one object per line: "<name> <kind> key=value ...". Blank lines and
// lines starting with '#' are skipped.
inline std::vector<ZooEntry> parse_zoo(const std::string& text, double d_min,
                                       double d_max, const Kernel& gp_kernel = Kernel()) {
  std::vector<ZooEntry> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::unordered_set<std::string> names;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string name, kind;
    if (!(ls >> name)) continue;
    std::string where = "zoo line " + std::to_string(lineno);
    if (!(ls >> kind)) throw ConfigError(where + ": missing object kind");
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ls >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(where + ": expected key=value, got '" + tok + "'");
      }
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto num = [&](const std::string& k, double fb = 0.0, bool req = true) {
      return detail::zoo_number(kv, k, fb, req, where);
    };
    auto allow = [&](std::initializer_list<const char*> keys) {
      for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* a : keys) ok = ok || k == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + k + "'");
      }
    };
    SurfaceObject obj = SurfaceObject::circle(1.0);
    try {
      if (kind == "circle") {
        allow({"radius"});
        obj = SurfaceObject::circle(num("radius"));
      } else if (kind == "ellipse") {
        allow({"a", "b", "rotation"});
        obj = SurfaceObject::ellipse(num("a"), num("b"), num("rotation", 0.0, false));
      } else if (kind == "flower") {
        allow({"freq", "amp", "phase"});
        double freq = num("freq");
        if (freq != std::floor(freq)) {
          throw ConfigError("flower frequency must be an integer");
        }
        obj = SurfaceObject::flower(d_min, d_max, num("amp"),
                                    static_cast<int>(freq),
                                    num("phase", 0.0, false));
      } else if (kind == "square") {
        allow({"half_width", "rotation"});
        obj = SurfaceObject::square(num("half_width"), num("rotation", 0.0, false));
      } else if (kind == "polygon") {
        allow({"vertices"});
        auto it = kv.find("vertices");
        if (it == kv.end()) throw ConfigError("missing 'vertices'");
        std::vector<Vec2> verts;
        std::istringstream vs(it->second);
        std::string pair;
        while (std::getline(vs, pair, ';')) {
          auto comma = pair.find(',');
          if (comma == std::string::npos) {
            throw ConfigError("vertex '" + pair + "' is not x,y");
          }
          verts.push_back({std::stod(pair.substr(0, comma)),
                           std::stod(pair.substr(comma + 1))});
        }
        obj = SurfaceObject::polygon(verts);
      } else if (kind == "gp") {
        allow({"seed", "grid"});
        obj = sample_gp_object(gp_kernel, 0.5 * (d_min + d_max), d_min, d_max,
                               static_cast<int>(num("grid", 64, false)),
                               static_cast<std::uint64_t>(num("seed")));
      } else {
        throw ConfigError("unknown object kind '" + kind + "'");
      }
      obj.check_bounds(d_min, d_max);
    } catch (const ConfigError& e) {
      throw ConfigError(where + " (" + name + "): " + e.what());
    } catch (const std::invalid_argument&) {
      throw ConfigError(where + " (" + name + "): malformed number");
    }
    if (!names.insert(name).second) {
      throw ConfigError(where + ": duplicate object name '" + name + "'");
    }
    out.push_back({name, object_class(obj.kind()), obj});
  }
  return out;
}

inline std::vector<ZooEntry> load_zoo(const std::string& path, double d_min,
                                      double d_max,
                                      const Kernel& gp_kernel = Kernel()) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open zoo file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_zoo(ss.str(), d_min, d_max, gp_kernel);
}

// Built-in evaluation set covering the four shape classes.
inline const char* default_zoo_text() {
  return R"(# name        kind     parameters
circle          circle   radius=5
ellipse-wide    ellipse  a=7.5 b=4 rotation=0.3
ellipse-narrow  ellipse  a=7 b=2.5 rotation=1.9
flower-3        flower   freq=3 amp=2 phase=0.1
flower-5        flower   freq=5 amp=1.5 phase=0.4
square-a        square   half_width=4.83 rotation=0
square-b        square   half_width=4.2 rotation=0.6
polygon-a       polygon  vertices=6,0;2,5;-4,4;-5,-1;-1,-5;4,-4
polygon-b       polygon  vertices=7,1;-2,6;-6,-2;1,-5
)";
}

}  // namespace nbv

#endif  // NBV_WORLD_HPP_
