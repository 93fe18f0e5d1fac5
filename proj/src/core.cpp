#include "mwumech/core.hpp"

#include <algorithm>
#include <cmath>

namespace mwumech {

void fail(errc code, const std::string &what) { throw error(code, what); }

FractionalPoint FractionalPoint::from_coords(Vec coords) {
  FractionalPoint p;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (!(coords[j] >= 0.0) || !std::isfinite(coords[j])) {
      fail(errc::argument, "fractional point has a negative or non-finite coordinate");
    }
    if (coords[j] > 0.0) p.support.push_back(static_cast<int>(j));
  }
  p.coords = std::move(coords);
  return p;
}

void FractionalPoint::validate() const {
  std::vector<int> recomputed;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (!(coords[j] >= 0.0)) fail(errc::argument, "negative coordinate in fractional point");
    if (coords[j] > 0.0) recomputed.push_back(static_cast<int>(j));
  }
  if (recomputed != support) {
    fail(errc::argument, "fractional point support list does not match coordinates");
  }
}

bool IntegralPoint::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](long long c) { return c == 0; });
}

double ConvexDecomposition::weight_sum() const {
  double s = 0.0;
  for (const Term &t : terms) s += t.lambda;
  return s;
}

Vec ConvexDecomposition::combination(int dimension) const {
  Vec sum(static_cast<std::size_t>(dimension), 0.0);
  for (const Term &t : terms) {
    if (t.point.dimension() != dimension) {
      fail(errc::argument, "decomposition term dimension mismatch");
    }
    for (int j = 0; j < dimension; ++j) {
      sum[static_cast<std::size_t>(j)] +=
          t.lambda * static_cast<double>(t.point.coords[static_cast<std::size_t>(j)]);
    }
  }
  return sum;
}

bool verify_membership(const PackingDomain &domain, const IntegralPoint &point) {
  if (point.dimension() != domain.dimension()) {
    fail(errc::argument, "point dimension does not match domain dimension");
  }
  for (long long c : point.coords) {
    if (c < 0) return false;
  }
  return domain.feasible(point);
}

IntegralPoint zero_out(const PackingDomain &domain, const IntegralPoint &point,
                       const std::vector<int> &indices) {
  if (point.dimension() != domain.dimension()) {
    fail(errc::argument, "point dimension does not match domain dimension");
  }
  IntegralPoint out = point;
  for (int j : indices) {
    if (j < 0 || j >= point.dimension()) fail(errc::argument, "zero_out index out of range");
    out.coords[static_cast<std::size_t>(j)] = 0;
  }
  return out;
}

IntegralPoint CheckedVerifier::run(const Vec &v, const FractionalPoint &x_star) {
  IntegralPoint x = inner_.run(v, x_star);
  ++calls_;
  double got = dot(v, x);
  double want = alpha() * dot(v, x_star.coords);
  if (got < want - kFeasTol * std::abs(dot(v, x_star.coords))) {
    fail(errc::contract, "integrality-gap verifier contract violated: v'x = " +
                             std::to_string(got) + " < alpha*v'x* = " + std::to_string(want));
  }
  return x;
}

double dot(const Vec &a, const Vec &b) {
  if (a.size() != b.size()) fail(errc::argument, "dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const Vec &a, const IntegralPoint &b) {
  if (a.size() != b.coords.size()) fail(errc::argument, "dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * static_cast<double>(b.coords[i]);
  return s;
}

}  // namespace mwumech
