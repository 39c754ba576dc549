#pragma once

#include "siegel/point.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace siegel {

using Mat4 = std::array<std::array<long, 4>, 4>;

Mat4 mat_mul(const Mat4& x, const Mat4& y);
Mat4 mat_transpose(const Mat4& x);
/// J = (0 I; -I 0).
const Mat4& symplectic_j();

/// lambda with M^T J M = lambda J, if such a lambda exists.
std::optional<long> similitude_of(const Mat4& M);

/// Row Hermite normal form: M and N span the same left coset of GL4(Z)
/// (and, for equal similitude, of Sp4(Z)) iff their forms agree.
Mat4 row_hnf(const Mat4& M);

/// gcd of all k x k minors for k = 1..4.
std::array<long, 4> determinantal_divisors(const Mat4& M);

struct CosetRep {
  Mat4 m;
  long similitude;
};

enum class HeckeOp { Tp, Tp2_1 };

std::string op_name(HeckeOp op);
std::optional<HeckeOp> parse_op(const std::string& name);

bool is_prime(long p);

/// Left coset representatives of T_p (degree p^3 + p^2 + p + 1).
std::vector<CosetRep> tp_reps(long p);
/// Left coset representatives of T_{p^2,1} (degree p^4 + p^3 + p^2 + p).
std::vector<CosetRep> tp2_1_reps(long p);
std::vector<CosetRep> coset_reps(HeckeOp op, long p);

/// For each rep, the index of the rep whose coset contains S M S with
/// S = diag(1, 1, -1, -1). Throws std::logic_error if the list is not closed.
std::vector<std::size_t> conjugate_partners(const std::vector<CosetRep>& reps);

/// Sixteen integers, row-major.
std::string format_rep(const CosetRep& rep);

struct PointImage {
  EvalPoint w;
  ComplexBall det;  // det(CZ + D)
};

/// (M<Z>, det(CZ + D)); throws CertificationError if the image cannot be
/// certified to lie in the upper half-space.
PointImage act_on_point(const CosetRep& rep, const EvalPoint& Z);

}  // namespace siegel
