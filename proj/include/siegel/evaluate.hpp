#pragma once

#include "siegel/ball.hpp"
#include "siegel/point.hpp"
#include "siegel/qexp.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace siegel {

/// A TruncatedSeries converted to balls at a fixed precision and laid out
/// for nested Horner evaluation: sum_a q1^a sum_c q2^c P_{a,c}(q3), with
/// P_{a,c} a Laurent polynomial in q3.
class NumericSeries {
 public:
  NumericSeries(const TruncatedSeries& f, Precision prec);

  struct Block {
    std::vector<int> b;    // exponents of q3 with nonzero coefficient (b >= 0 if symmetric)
    std::vector<Ball> coeff;
  };

  long trace_bound() const { return trace_bound_; }
  long weight() const { return weight_; }
  Precision prec() const { return prec_; }
  /// a([a, b, c]) = a([a, -b, c]) throughout; P is then a polynomial in q3 + 1/q3 powers.
  bool symmetric() const { return symmetric_; }
  /// Largest |b| stored.
  int max_b() const { return max_b_; }
  const Block& block(long a, long c) const { return blocks_[offset_[a] + c]; }

 private:
  long weight_;
  long trace_bound_;
  Precision prec_;
  bool symmetric_ = true;
  int max_b_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<Block> blocks_;
};

/// Powers of q3 = e(w3) shared by all inner polynomials at one w3.
struct Q3Powers {
  std::vector<ComplexBall> pos;  // q3^b
  std::vector<ComplexBall> neg;  // q3^-b
  std::vector<ComplexBall> sym;  // q3^b + q3^-b

  Q3Powers(const ComplexBall& w3, int max_b, Precision prec);
};

/// P_{a,c}(q3).
void eval_inner(ComplexBall& out, const NumericSeries& f, const NumericSeries::Block& blk, const Q3Powers& pw,
                ComplexBall& scratch);

/// F_T(W) by nested Horner with q3 powers shared inside this single call.
ComplexBall evaluate_series(const NumericSeries& f, const EvalPoint& W, long T);

/// F_T(W) summed term by term with one exponential per term; the oracle
/// for the Horner paths.
ComplexBall evaluate_direct(const TruncatedSeries& f, const EvalPoint& W, long T, Precision prec);

struct BatchStats {
  std::size_t points = 0;
  std::size_t distinct_q3 = 0;
  std::size_t distinct_q2q3 = 0;
};

using SeriesSet = std::array<const NumericSeries*, 4>;
using GeneratorValues = std::array<ComplexBall, 4>;

/// Values of every non-null series at every point, truncated at trace T.
/// Inner q3 polynomials are evaluated once per distinct w3 and the q2
/// Horner once per distinct (w2, w3); phases run in parallel with results
/// written to fixed slots, so the output is independent of the thread count.
/// With shell, also returns F_T - F_{T-1}, the terms of trace exactly T.
std::vector<GeneratorValues> evaluate_batch(const SeriesSet& series, const std::vector<EvalPoint>& points, long T,
                                            int threads, BatchStats* stats = nullptr,
                                            std::vector<GeneratorValues>* shell = nullptr);

/// Same values computed point by point with evaluate_series, serially and
/// without sharing anything between points.
std::vector<GeneratorValues> evaluate_batch_reference(const SeriesSet& series, const std::vector<EvalPoint>& points,
                                                      long T);

}  // namespace siegel
