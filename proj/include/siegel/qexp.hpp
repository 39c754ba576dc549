#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace siegel {

/// Half-integral positive semi-definite matrix [[a, b/2], [b/2, c]], the index
/// of a Fourier coefficient. Ordered by (trace, a, b), the canonical storage
/// and serialization order.
struct FourierIndex {
  long a = 0;
  long b = 0;
  long c = 0;

  long trace() const { return a + c; }
  long disc() const { return 4 * a * c - b * b; }
  long content() const;
  bool is_valid() const { return a >= 0 && c >= 0 && disc() >= 0; }

  friend bool operator==(const FourierIndex&, const FourierIndex&) = default;
  friend std::strong_ordering operator<=>(const FourierIndex& x, const FourierIndex& y) {
    if (auto o = x.trace() <=> y.trace(); o != 0) return o;
    if (auto o = x.a <=> y.a; o != 0) return o;
    return x.b <=> y.b;
  }
};

/// All indices of trace exactly t, sorted by (a, b).
std::vector<FourierIndex> enumerate_indices(long t);

/// Closed-form count sum_{a=0}^{t} (1 + 2 floor(2 sqrt(a(t-a)))).
long index_count(long t);

struct SeriesTerm {
  FourierIndex index;
  mpq_class coeff;
};

/// Malformed series data (bad cache file, out-of-order terms, ...).
class SeriesFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact Fourier expansion of a degree-2 form restricted to indices of trace
/// at most traceBound. Only nonzero coefficients are stored, sorted in
/// canonical order; an absent index below the bound has coefficient zero.
class TruncatedSeries {
 public:
  TruncatedSeries(long weight, long trace_bound);
  /// Validates ordering, index invariants and the trace bound; drops zeros.
  TruncatedSeries(long weight, long trace_bound, std::vector<SeriesTerm> sorted_terms);

  /// The weight-0 series 1 (multiplicative identity) to the given bound.
  static TruncatedSeries unit(long trace_bound);

  long weight() const { return weight_; }
  long trace_bound() const { return trace_bound_; }
  const std::vector<SeriesTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Throws std::out_of_range above the trace bound.
  mpq_class coefficient(const FourierIndex& n) const;
  TruncatedSeries truncated(long trace_bound) const;
  TruncatedSeries scaled(const mpq_class& s) const;

  friend bool operator==(const TruncatedSeries& x, const TruncatedSeries& y);

 private:
  long weight_;
  long trace_bound_;
  std::vector<SeriesTerm> terms_;
};

/// Coefficientwise sum; the bound is the smaller of the two.
TruncatedSeries series_add(const TruncatedSeries& f, const TruncatedSeries& g);

/// Cauchy product over index pairs with trace(N1) + trace(N2) <= bound.
TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g);

/// (a, c) -> sum_b a([a, b, c]); the expansion restricted to z3 = 0.
/// Zero entries are omitted.
std::map<std::pair<long, long>, mpq_class> diagonal_restriction(const TruncatedSeries& f);

/// `SIEGELQEXP 1` text format.
void write_series(std::ostream& out, const TruncatedSeries& f);
TruncatedSeries read_series(std::istream& in);

}  // namespace siegel
