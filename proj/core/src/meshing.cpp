#include "frontline/meshing.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "frontline/error.hpp"

namespace frontline {

std::string to_string(MeshStrategy strategy) {
  return "D" + std::to_string(static_cast<int>(strategy));
}

MeshStrategy parse_mesh_strategy(const std::string& text) {
  if (text == "D1" || text == "d1") return MeshStrategy::D1;
  if (text == "D2" || text == "d2") return MeshStrategy::D2;
  if (text == "D3" || text == "d3") return MeshStrategy::D3;
  if (text == "D4" || text == "d4") return MeshStrategy::D4;
  raise(ErrorCode::InvalidSpec, "unknown mesh strategy '" + text + "' (expected D1..D4)");
}

DerivativeWeights interior_stencil(double h1, double h2) {
  DerivativeWeights w;
  w.first = {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
  w.second = {2.0 / (h1 * (h1 + h2)), -2.0 / (h1 * h2), 2.0 / (h2 * (h1 + h2))};
  return w;
}

std::vector<double> lagrange_derivative_weights(double at, std::span<const double> nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0 || order < 0 || order >= n) {
    raise(ErrorCode::InvalidSpec, "derivative order must be below the node count");
  }
  // delta[k][j]: weight of node j for derivative k using the first i+1 nodes.
  std::vector<std::vector<double>> delta(static_cast<std::size_t>(order + 1),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
  delta[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - at;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - at;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          delta[k][i] = c1 * (k * delta[k - 1][i - 1] - c5 * delta[k][i - 1]) / c2;
        }
        delta[0][i] = -c1 * c5 * delta[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        delta[k][j] = (c4 * delta[k][j] - k * delta[k - 1][j]) / c3;
      }
      delta[0][j] = c4 * delta[0][j] / c3;
    }
    c1 = c2;
  }
  return delta[static_cast<std::size_t>(order)];
}

BoundaryStencils boundary_stencils(std::span<const double> y) {
  const std::size_t np = y.size();
  if (np < 5) raise(ErrorCode::InvalidSpec, "boundary stencils need at least N = 4 intervals");
  BoundaryStencils out;
  const std::array<double, 3> quad_nodes{y[np - 3], y[np - 2], 1.0};
  const auto slope = lagrange_derivative_weights(1.0, quad_nodes, 1);
  out.slope = {slope[0], slope[1]};
  const std::array<double, 4> cubic_nodes{y[np - 4], y[np - 3], y[np - 2], 1.0};
  const auto curv = lagrange_derivative_weights(1.0, cubic_nodes, 2);
  out.curvature = {curv[0], curv[1], curv[2]};
  return out;
}

Mesh::Mesh(std::vector<double> points) : y_(std::move(points)) {
  if (y_.size() < 5) raise(ErrorCode::InvalidSpec, "a mesh needs at least N = 4 intervals");
  if (y_.front() != 0.0 || y_.back() != 1.0) {
    raise(ErrorCode::InvalidSpec, "mesh points must start at 0 and end at 1");
  }
  const int n = intervals();
  alpha_.assign(y_.size(), 0.0);
  for (int i = 1; i <= n; ++i) {
    const double h = y_[static_cast<std::size_t>(i)] - y_[static_cast<std::size_t>(i - 1)];
    if (!(h > 0.0)) raise(ErrorCode::InvalidSpec, "mesh points must be strictly increasing");
    alpha_[static_cast<std::size_t>(i)] = h;
  }
  stencils_.resize(static_cast<std::size_t>(n));
  stencils_[0] = interior_stencil(alpha_[1], alpha_[1]);
  for (int i = 1; i < n; ++i) {
    stencils_[static_cast<std::size_t>(i)] =
        interior_stencil(alpha_[static_cast<std::size_t>(i)], alpha_[static_cast<std::size_t>(i + 1)]);
  }
  const auto b = boundary_stencils(y_);
  slope_ = b.slope;
  curvature_ = b.curvature;
}

double geometric_ratio(int N, int M) {
  if (M < 1 || N < 1) raise(ErrorCode::InvalidSpec, "geometric ratio needs positive N and M");
  if (N < M) {
    raise(ErrorCode::NoGeometricRatio,
          "N = " + std::to_string(N) + " < M = " + std::to_string(M) + " would need q > 1");
  }
  if (N == M) return 1.0;
  auto excess = [&](double q) {
    double sum = 0.0;
    double term = 1.0;
    for (int i = 0; i < N; ++i) {
      sum += term;
      term *= q;
    }
    return sum / M - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int subdivided_interval_count(const MeshSpec& spec) {
  const int p = static_cast<int>(spec.strategy);
  int count = spec.M - (spec.d - 2);
  for (int j = 1; j <= spec.d - 2; ++j) {
    count += static_cast<int>(std::lround(std::pow(spec.d - j, p)));
  }
  return count;
}

namespace {

std::vector<double> accumulate(const std::vector<double>& lengths) {
  std::vector<double> y(lengths.size() + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    acc += lengths[i];
    y[i + 1] = acc;
  }
  y.back() = 1.0;
  return y;
}

}  // namespace

Mesh build_mesh(const MeshSpec& spec) {
  if (spec.M < 2) raise(ErrorCode::InvalidSpec, "mesh.M must be at least 2");
  std::vector<double> lengths;
  if (spec.strategy == MeshStrategy::D4) {
    if (spec.N < 4) raise(ErrorCode::InvalidSpec, "mesh.N must be at least 4");
    const double q = geometric_ratio(spec.N, spec.M);
    lengths.reserve(static_cast<std::size_t>(spec.N));
    double h = 1.0 / spec.M;
    for (int i = 0; i < spec.N; ++i) {
      lengths.push_back(h);
      h *= q;
    }
  } else {
    if (spec.d < 3 || spec.d > spec.M) {
      raise(ErrorCode::InvalidSpec, "mesh.d must satisfy 3 <= d <= M for D1-D3");
    }
    const int p = static_cast<int>(spec.strategy);
    const double base = 1.0 / spec.M;
    const int refined = spec.d - 2;
    for (int k = 0; k < spec.M - refined; ++k) lengths.push_back(base);
    // Interval counted j-th from y = 1 splits into (d-j)^p parts; j = d-2 is
    // the coarsest of the refined ones and comes first in increasing y.
    for (int j = refined; j >= 1; --j) {
      const int parts = static_cast<int>(std::lround(std::pow(spec.d - j, p)));
      for (int k = 0; k < parts; ++k) lengths.push_back(base / parts);
    }
    if (lengths.size() < 4) raise(ErrorCode::InvalidSpec, "mesh has fewer than 4 intervals");
  }
  return Mesh(accumulate(lengths));
}

void write_mesh_table(const Mesh& mesh, std::ostream& out) {
  char buf[512];
  out << "# i y alpha d1[-1] d1[0] d1[+1] d2[-1] d2[0] d2[+1]\n";
  for (int i = 0; i < mesh.intervals(); ++i) {
    const auto& s = mesh.stencil(i);
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", i,
                  mesh.point(i), i == 0 ? 0.0 : mesh.spacing(i), s.first[0], s.first[1], s.first[2],
                  s.second[0], s.second[1], s.second[2]);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", mesh.intervals(), 1.0, mesh.spacing(mesh.intervals()));
  out << buf;
  const auto& sl = mesh.boundary_slope_weights();
  const auto& cu = mesh.boundary_curvature_weights();
  std::snprintf(buf, sizeof buf, "# slope %.17g %.17g\n# curvature %.17g %.17g %.17g\n", sl[0], sl[1], cu[0],
                cu[1], cu[2]);
  out << buf;
}

}  // namespace frontline
