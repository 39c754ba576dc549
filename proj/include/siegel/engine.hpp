#pragma once

#include "siegel/ball.hpp"
#include "siegel/eigenform.hpp"
#include "siegel/evaluate.hpp"
#include "siegel/hecke.hpp"
#include "siegel/igusa.hpp"
#include "siegel/point.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace siegel {

/// A polynomial in E4, E6, chi10, chi12 with coefficient boxes at a fixed precision.
class FormEvaluator {
 public:
  FormEvaluator(const EigenformSpec& spec, Precision prec);

  long weight() const { return weight_; }
  Precision prec() const { return prec_; }
  const std::array<bool, 4>& uses() const { return uses_; }
  int used_count() const;
  /// True when every coefficient is real, so F has real Fourier coefficients.
  bool real_coefficients() const { return real_; }

  ComplexBall value(const GeneratorValues& g) const;
  /// sup |dF/dg_j| over the polydisc |g_l| <= G_l + 1.
  std::array<Mag, 4> lipschitz(const std::array<Mag, 4>& G) const;
  /// sum |c| prod G^e, the size of the largest intermediate.
  Mag magnitude(const std::array<Mag, 4>& G) const;

 private:
  long weight_;
  Precision prec_;
  std::vector<ComplexBall> coeff_;
  std::vector<std::array<int, 4>> expo_;
  std::array<bool, 4> uses_{};
  std::array<int, 4> max_expo_{};
  bool real_ = true;
};

struct MagnitudeBounds {
  Mag lower;
  Mag upper;
  Mag tolerance;  // the final coarse tolerance
  ComplexBall estimate;
};

/// Coarse bounds 0 < lower < |x| < upper from an evaluator returning x within
/// a requested tolerance: tolerance 0.1, then divided by 10 until
/// |estimate| - 2 tol > 0. Throws CertificationError after max_depth steps.
MagnitudeBounds coarse_magnitude_bounds(const std::function<ComplexBall(const Mag&)>& eval, int max_depth = 400);

struct QuotientBudget {
  Mag numerator;    // eps_x
  Mag denominator;  // eps_y
};

/// Largest budgets, rounded down, with eps_x < h eps y / 2 and
/// eps_y < min((1 - h) eps y / (2 z), y / 2) for y = y_lower, z = z_upper.
QuotientBudget quotient_budget(const Mag& eps, double h, const Mag& y_lower, const Mag& z_upper);

enum class TruncationMode { Rigorous, Heuristic };
const char* mode_name(TruncationMode m);
TruncationMode parse_mode(const std::string& s);

struct EngineConfig {
  int threads = 1;
  TruncationMode mode = TruncationMode::Rigorous;
  bool symmetry = false;
  /// Rigorous mode: GL2(Z)-reduce every transformed point before planning (even weight only).
  bool reduce_points = true;
  double split = 0.5;
  /// Heuristic mode only: overrides the uniform trace bound.
  std::optional<long> trace_bound;
  Precision max_precision = 1 << 15;
  int max_coarse_depth = 400;
};

struct HeckeImage {
  ComplexBall value;
  /// heuristic mode: the same sum with every generator truncated at trace T-1; value otherwise
  ComplexBall previous;
  std::size_t cosets = 0;
  std::size_t evaluated = 0;  // fewer than cosets with the symmetry option
  std::vector<long> trace_bounds;  // per coset in enumeration order
  BatchStats stats;
  Precision bits_needed = 0;  // estimate from the rounding budget (rigorous mode)
};

struct EigenvalueResult {
  ComplexBall raw;
  ComplexBall normalized;
  std::optional<mpz_class> snapped;
  /// closest integer to the normalized value (certified in rigorous mode)
  std::optional<mpz_class> nearest;
  std::string form;
  long prime = 0;
  HeckeOp op = HeckeOp::Tp;
  std::size_t cosets = 0;
  long trace_min = 0;
  long trace_max = 0;
  Precision precision = 0;
  std::string y11;
  TruncationMode mode = TruncationMode::Rigorous;
  double digits = 0;
  double wall_ms = 0;
  int attempts = 0;
  /// radius of raw within the target (rounding only in heuristic mode)
  bool target_met = false;
  /// heuristic mode: distance between the normalized midpoints at trace T-1 and T
  std::optional<Mag> truncation_change;
};

struct Tp2Result {
  EigenvalueResult tp;
  EigenvalueResult tp2_1;
  ComplexBall lambda0, lambda1, lambda2, lambda;
  std::optional<mpz_class> snapped;
  double wall_ms = 0;
};

/// Normalized lambda_{p^2} = lambda_{p^2,0} + lambda_{p^2,1} + lambda_{p^2,2} from
/// normalized lambda_p and lambda_{p^2,1}, with lambda_{p^2,0} = p^{2k-6} and
/// lambda_{p^2,2} = lambda_p^2 - (p+1) lambda_{p^2,1} - (p^2+1)(p+1) lambda_{p^2,0}.
struct Tp2Parts {
  ComplexBall lambda0, lambda2, lambda;
};
Tp2Parts assemble_tp2(const ComplexBall& lambda_p, const ComplexBall& lambda_p21, long p, long k);

/// Snaps when the real radius is below 1/2, the imaginary part contains 0
/// and the real part contains exactly one integer.
std::optional<mpz_class> snap(const ComplexBall& x);

/// Heuristic rounding: the integer nearest the real midpoint when the real
/// radius is below 1/2 and the imaginary midpoint is within 1/2 of 0.
std::optional<mpz_class> nearest_integer(const ComplexBall& x);

/// The integer N with the real part inside (N - 1/2, N + 1/2), when the
/// imaginary midpoint is within 1/2 of 0; the closest integer to every point of the box.
std::optional<mpz_class> closest_integer(const ComplexBall& x);

/// Default y11 for similitude m: the tabulated value when m is a listed prime,
/// otherwise a least-squares fit linear in log m.
std::string default_y11(long m);
/// Default working precision for similitude m and weight k.
Precision default_precision(long m, long k);

/// One line: prime, operator, cosets, precision_bits, trace_bound, wall_ms.
std::string timing_line(const EigenvalueResult& r);

class Engine {
 public:
  Engine(GeneratorCache& cache, EngineConfig cfg);

  const EngineConfig& config() const { return cfg_; }

  /// Generator expansion at trace bound >= T as balls at precision prec.
  const NumericSeries& series(GeneratorId id, long T, Precision prec);

  /// sum over reps of det(CZ+D)^-k F(M<Z>). Rigorous mode splits eps_x equally
  /// and picks a trace bound per point; heuristic mode uses heuristic_T.
  /// With stop_if_imprecise, returns before evaluating (evaluated == 0) when
  /// the plan needs more than F.prec() bits.
  HeckeImage hecke_image_at(const FormEvaluator& F, const EvalPoint& Z, const std::vector<CosetRep>& reps,
                            const Mag& eps_x, long heuristic_T, bool stop_if_imprecise = false);

  /// F(Z) within tol (rigorous truncation) or at trace heuristic_T; previous_value
  /// receives the trace heuristic_T - 1 value in heuristic mode.
  ComplexBall form_value(const FormEvaluator& F, const EvalPoint& Z, const Mag& tol, long heuristic_T = -1,
                         ComplexBall* previous_value = nullptr);

  EigenvalueResult eigenvalue(const EigenformSpec& spec, long p, HeckeOp op, double digits,
                              std::optional<std::string> y11 = std::nullopt,
                              std::optional<Precision> precision = std::nullopt);

  Tp2Result eigenvalue_tp2(const EigenformSpec& spec, long p, double digits,
                           std::optional<std::string> y11 = std::nullopt,
                           std::optional<Precision> precision = std::nullopt);

 private:
  struct PointPlan {
    long T = 0;
    std::array<Mag, 4> envelope{};
  };
  /// With previous, also F at the trace T-1 generator values in heuristic mode, and a copy of the result otherwise.
  std::vector<ComplexBall> evaluate_points(const FormEvaluator& F, const std::vector<EvalPoint>& pts,
                                           const std::vector<PointPlan>& plans,
                                           std::vector<ComplexBall>* previous = nullptr);
  PointPlan plan_point(const FormEvaluator& F, const Ball& alpha, const Mag& tol, const std::array<Mag, 4>& G,
                       Precision* bits) const;
  std::vector<std::array<Mag, 4>> generator_bounds(const FormEvaluator& F, const std::vector<EvalPoint>& pts,
                                                   const std::vector<Ball>& alphas);

  GeneratorCache& cache_;
  EngineConfig cfg_;
  std::map<std::pair<int, Precision>, std::unique_ptr<NumericSeries>> numeric_;
};

}  // namespace siegel
