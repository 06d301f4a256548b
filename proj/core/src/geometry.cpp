#include "lsinv/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "lsinv/projection.hpp"

namespace lsinv {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

std::size_t Polyline::segment_count() const {
  if (vertices.size() < 2) return 0;
  return closed ? vertices.size() : vertices.size() - 1;
}

std::pair<Vec2, Vec2> Polyline::segment(std::size_t k) const {
  return {vertices[k], vertices[(k + 1) % vertices.size()]};
}

std::size_t CurveSet::vertex_count() const {
  std::size_t n = 0;
  for (const auto& c : curves) n += c.vertices.size();
  return n;
}

namespace {

constexpr double kLevelNudge = 1e-12;
constexpr int kNoEdge = -1;

struct Segment {
  std::array<int, 2> edge;
};

class ContourBuilder {
 public:
  ContourBuilder(const ScalarField& phi, double level) : phi_(phi), g_(phi.spec()), shifted_(g_) {
    auto in = phi.values();
    auto out = shifted_.values();
    for (std::size_t k = 0; k < in.size(); ++k) {
      double v = in[k] - level;
      if (v == 0.0) v = kLevelNudge;
      out[k] = v;
    }
    const std::size_t n_h = static_cast<std::size_t>(g_.nx() - 1) * g_.ny();
    const std::size_t n_v = static_cast<std::size_t>(g_.nx()) * (g_.ny() - 1);
    v_offset_ = static_cast<int>(n_h);
    point_.assign(n_h + n_v, Vec2{});
    incident_.assign(n_h + n_v, {kNoEdge, kNoEdge});
  }

  CurveSet build() {
    march();
    return link();
  }

 private:
  int h_edge(int i, int j) const { return j * (g_.nx() - 1) + i; }
  int v_edge(int i, int j) const { return v_offset_ + j * g_.nx() + i; }

  int crossing(int edge, int i0, int j0, int i1, int j1) {
    const double a = shifted_(i0, j0);
    const double b = shifted_(i1, j1);
    const double t = a / (a - b);
    point_[edge] = {g_.x(i0) + t * (g_.x(i1) - g_.x(i0)), g_.y(j0) + t * (g_.y(j1) - g_.y(j0))};
    return edge;
  }

  void add_segment(int e0, int e1) {
    const int id = static_cast<int>(segments_.size());
    segments_.push_back({{e0, e1}});
    for (int e : {e0, e1}) {
      auto& inc = incident_[e];
      if (inc[0] == kNoEdge) {
        inc[0] = id;
      } else {
        inc[1] = id;
      }
    }
  }

  void march() {
    for (int j = 0; j + 1 < g_.ny(); ++j) {
      for (int i = 0; i + 1 < g_.nx(); ++i) {
        const double va = shifted_(i, j);
        const double vb = shifted_(i + 1, j);
        const double vc = shifted_(i + 1, j + 1);
        const double vd = shifted_(i, j + 1);
        const bool pa = va > 0, pb = vb > 0, pc = vc > 0, pd = vd > 0;
        int bottom = kNoEdge, right = kNoEdge, top = kNoEdge, left = kNoEdge;
        if (pa != pb) bottom = crossing(h_edge(i, j), i, j, i + 1, j);
        if (pb != pc) right = crossing(v_edge(i + 1, j), i + 1, j, i + 1, j + 1);
        if (pd != pc) top = crossing(h_edge(i, j + 1), i, j + 1, i + 1, j + 1);
        if (pa != pd) left = crossing(v_edge(i, j), i, j, i, j + 1);

        const int count = (bottom != kNoEdge) + (right != kNoEdge) + (top != kNoEdge) + (left != kNoEdge);
        if (count == 2) {
          std::array<int, 2> e{};
          int n = 0;
          for (int x : {bottom, right, top, left}) {
            if (x != kNoEdge) e[n++] = x;
          }
          add_segment(e[0], e[1]);
        } else if (count == 4) {
          const bool center_pos = 0.25 * (va + vb + vc + vd) > 0;
          if (center_pos == pa) {
            // a and c connect through the centre; cut off b and d.
            add_segment(bottom, right);
            add_segment(top, left);
          } else {
            add_segment(left, bottom);
            add_segment(right, top);
          }
        }
      }
    }
  }

  int other_segment(int edge, int seg) const {
    const auto& inc = incident_[edge];
    return inc[0] == seg ? inc[1] : inc[0];
  }

  int other_edge(int seg, int edge) const {
    const auto& e = segments_[seg].edge;
    return e[0] == edge ? e[1] : e[0];
  }

  // Walks from `start_edge` through `start_seg` until the chain ends or closes.
  Polyline walk(int start_edge, int start_seg, std::vector<char>& used) const {
    Polyline p;
    int edge = start_edge;
    int seg = start_seg;
    p.vertices.push_back(point_[edge]);
    while (seg != kNoEdge && !used[seg]) {
      used[seg] = 1;
      edge = other_edge(seg, edge);
      if (edge == start_edge) {
        p.closed = true;
        break;
      }
      p.vertices.push_back(point_[edge]);
      seg = other_segment(edge, seg);
    }
    return p;
  }

  CurveSet link() const {
    std::vector<char> used(segments_.size(), 0);
    CurveSet out;
    // Open chains start at edges with a single incident segment (domain boundary).
    for (std::size_t e = 0; e < incident_.size(); ++e) {
      const auto& inc = incident_[e];
      if (inc[0] != kNoEdge && inc[1] == kNoEdge && !used[inc[0]]) {
        out.curves.push_back(walk(static_cast<int>(e), inc[0], used));
      }
    }
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (!used[s]) {
        out.curves.push_back(walk(segments_[s].edge[0], static_cast<int>(s), used));
      }
    }
    return finalize(std::move(out));
  }

  CurveSet finalize(CurveSet raw) const {
    const double tiny = 1e-9 * g_.h();
    const Gradient grad = gradient(phi_);
    CurveSet out;
    for (auto& c : raw.curves) {
      Polyline p;
      p.closed = c.closed;
      for (const Vec2& v : c.vertices) {
        if (p.vertices.empty() || norm(v - p.vertices.back()) > tiny) p.vertices.push_back(v);
      }
      if (p.closed && p.vertices.size() > 1 && norm(p.vertices.front() - p.vertices.back()) <= tiny) {
        p.vertices.pop_back();
      }
      if (p.closed && p.vertices.size() < 3) continue;
      if (!p.closed && p.vertices.size() < 2) continue;

      p.normals.reserve(p.vertices.size());
      for (std::size_t k = 0; k < p.vertices.size(); ++k) {
        const Vec2 v = p.vertices[k];
        Vec2 n{-grad.dx.interpolate(v.x, v.y), -grad.dy.interpolate(v.x, v.y)};
        double len = norm(n);
        if (!(len > 0.0)) {
          // Degenerate gradient: use the perpendicular of the local tangent.
          const Vec2 next = p.vertices[(k + 1) % p.vertices.size()];
          const Vec2 prev = p.vertices[k == 0 ? (p.closed ? p.vertices.size() - 1 : 0) : k - 1];
          const Vec2 t = (k + 1 < p.vertices.size() || p.closed) ? next - prev : v - prev;
          n = {t.y, -t.x};
          len = norm(n);
        }
        p.normals.push_back((1.0 / len) * n);
      }
      out.curves.push_back(std::move(p));
    }
    return out;
  }

  const ScalarField& phi_;
  GridSpec g_;
  ScalarField shifted_;
  int v_offset_ = 0;
  std::vector<Vec2> point_;
  std::vector<std::array<int, 2>> incident_;
  std::vector<Segment> segments_;
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double directed_hausdorff(const CurveSet& from, const CurveSet& to) {
  double worst = 0.0;
  for (const auto& c : from.curves) {
    for (const Vec2& v : c.vertices) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& d : to.curves) {
        if (d.vertices.size() == 1) best = std::min(best, norm(v - d.vertices.front()));
        for (std::size_t k = 0; k < d.segment_count(); ++k) {
          const auto [a, b] = d.segment(k);
          best = std::min(best, point_segment_distance(v, a, b));
        }
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace

CurveSet extract_level(const ScalarField& phi, double level) { return ContourBuilder(phi, level).build(); }

CurveSet extract_zero_level(const ScalarField& phi) { return extract_level(phi, 0.0); }

double curve_length(const CurveSet& c) {
  double total = 0.0;
  for (const auto& p : c.curves) {
    for (std::size_t k = 0; k < p.segment_count(); ++k) {
      const auto [a, b] = p.segment(k);
      total += norm(b - a);
    }
  }
  return total;
}

double curve_integral(const CurveSet& c, const ScalarField& v) {
  double total = 0.0;
  for (const auto& p : c.curves) {
    for (std::size_t k = 0; k < p.segment_count(); ++k) {
      const auto [a, b] = p.segment(k);
      const Vec2 mid = 0.5 * (a + b);
      total += v.interpolate(mid.x, mid.y) * norm(b - a);
    }
  }
  return total;
}

CoareaSides coarea_check(const ScalarField& phi, double a, double b, int levels) {
  if (!(a < b)) throw std::invalid_argument("coarea_check: need a < b");
  if (levels < 2) throw std::invalid_argument("coarea_check: need at least two levels");

  const ScalarField g = grad_norm(phi);
  ScalarField band(phi.spec());
  auto p = phi.values();
  auto gv = g.values();
  auto o = band.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (p[k] > a && p[k] < b) ? gv[k] : 0.0;

  CoareaSides sides;
  sides.volume_side = inner_product(band, ScalarField(phi.spec(), 1.0));

  const double drho = (b - a) / (levels - 1);
  for (int k = 0; k < levels; ++k) {
    const double w = (k == 0 || k == levels - 1) ? 0.5 : 1.0;
    sides.level_side += w * curve_length(extract_level(phi, a + k * drho));
  }
  sides.level_side *= drho;
  return sides;
}

double region_area(const ScalarField& phi) {
  return inner_product(apply_P(phi), ScalarField(phi.spec(), 1.0));
}

double symmetric_difference_area(const ScalarField& phi_a, const ScalarField& phi_b) {
  require_same_spec(phi_a.spec(), phi_b.spec(), "symmetric_difference_area");
  ScalarField x(phi_a.spec());
  auto a = phi_a.values();
  auto b = phi_b.values();
  auto o = x.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = (project(a[k]) != project(b[k])) ? 1.0 : 0.0;
  return inner_product(x, ScalarField(phi_a.spec(), 1.0));
}

double hausdorff_distance(const CurveSet& a, const CurveSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

void write_csv(std::ostream& out, const CurveSet& c) {
  out << "curve_id,x,y,nx,ny\n";
  const auto old_precision = out.precision(17);
  for (std::size_t id = 0; id < c.curves.size(); ++id) {
    const auto& p = c.curves[id];
    for (std::size_t k = 0; k < p.vertices.size(); ++k) {
      out << id << ',' << p.vertices[k].x << ',' << p.vertices[k].y << ',' << p.normals[k].x << ','
          << p.normals[k].y << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace lsinv
