#pragma once
// Shared model types: fractional/integral points, convex decompositions, the
// packing-domain and integrality-gap-verifier interfaces, error taxonomy, and
// the numeric tolerances used across the library.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwumech {

using Vec = std::vector<double>;

// Absolute tolerance for comparisons against zero.
inline constexpr double kZeroTol = 1e-12;
// Tolerance for feasibility / domination / exactness checks (scaled where noted).
inline constexpr double kFeasTol = 1e-9;

enum class errc {
  argument,  // bad call arguments (dimension mismatch, out-of-range epsilon)
  io,        // malformed input documents
  capacity,  // desk-scale cap exceeded (enumeration, LP size)
  oracle,    // malformed oracle response
  contract,  // oracle/verifier approximation contract violated
  tripwire,  // proof-level iteration bound exceeded at runtime
  audit,     // audit preconditions violated
  internal,  // invariant that should be unreachable
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string &what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] void fail(errc code, const std::string &what);

// A point x* in the packing polytope Q, with its support precomputed.
struct FractionalPoint {
  Vec coords;                // non-negative, dimension d
  std::vector<int> support;  // sorted indices with coords[j] > 0

  static FractionalPoint from_coords(Vec coords);
  int dimension() const { return static_cast<int>(coords.size()); }
  // Recomputes the support from coords and checks it matches the stored list.
  void validate() const;
};

// A point of Q_I = Q ∩ Z^d; membership is checked by the owning PackingDomain.
struct IntegralPoint {
  std::vector<long long> coords;  // non-negative integers

  int dimension() const { return static_cast<int>(coords.size()); }
  bool is_zero() const;
  bool operator==(const IntegralPoint &other) const = default;
};

// Weighted list {(λ_j, x^j)} with λ a probability vector over integral points.
struct ConvexDecomposition {
  struct Term {
    double lambda;
    IntegralPoint point;
  };
  std::vector<Term> terms;

  double weight_sum() const;
  // Σ_j λ_j x^j as a dense vector of the given dimension.
  Vec combination(int dimension) const;
};

// Oracle view of Q: dimension plus an integral feasibility predicate.  Downward
// closure is a promise of the implementation: zeroing coordinates of a feasible
// point keeps it feasible.
class PackingDomain {
 public:
  virtual ~PackingDomain() = default;
  virtual int dimension() const = 0;
  virtual bool feasible(const IntegralPoint &point) const = 0;
};

// True iff point ∈ Q_I per the domain's constraint set.
bool verify_membership(const PackingDomain &domain, const IntegralPoint &point);

// Copy of `point` with the given coordinates set to 0; feasible by downward closure.
IntegralPoint zero_out(const PackingDomain &domain, const IntegralPoint &point,
                       const std::vector<int> &indices);

// Integrality-gap verifier: returns x ∈ Q_I with vᵀx ≥ alpha()·vᵀx*.
class IntegralityGapVerifier {
 public:
  virtual ~IntegralityGapVerifier() = default;
  virtual double alpha() const = 0;
  virtual IntegralPoint run(const Vec &v, const FractionalPoint &x_star) = 0;
};

// Wrapper that asserts the verifier contract on every call and counts calls.
class CheckedVerifier : public IntegralityGapVerifier {
 public:
  explicit CheckedVerifier(IntegralityGapVerifier &inner) : inner_(inner) {}
  double alpha() const override { return inner_.alpha(); }
  IntegralPoint run(const Vec &v, const FractionalPoint &x_star) override;
  long long calls() const { return calls_; }

 private:
  IntegralityGapVerifier &inner_;
  long long calls_ = 0;
};

double dot(const Vec &a, const Vec &b);
double dot(const Vec &a, const IntegralPoint &b);

}  // namespace mwumech
