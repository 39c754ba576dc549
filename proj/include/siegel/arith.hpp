#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace siegel {

/// Kronecker symbol (D/n) for n >= 1.
int kronecker(long D, long n);

bool is_fundamental_discriminant(long D);

/// Writes -N = D f^2 with D a fundamental discriminant. Requires N > 0 and
/// N = 0 or 3 mod 4.
std::pair<long, long> split_discriminant(long N);

int moebius(long n);
mpz_class divisor_sigma(long n, unsigned long e);

/// Classical Bernoulli numbers B_0..B_n with B_1 = -1/2.
std::vector<mpq_class> bernoulli_numbers(unsigned long n);

/// B_{n, chi_D} for a fundamental discriminant D (D = 1 gives B_n with B_1 = +1/2).
mpq_class generalized_bernoulli(long D, unsigned long n);

/// zeta(1 - n) = -B_n / n for n >= 2.
mpq_class zeta_one_minus(unsigned long n);

/// Cohen's H(r, N) for odd r >= 3 (r = 1 is the Hurwitz class number up to
/// the usual normalization and is also supported).
mpq_class cohen_h(unsigned long r, long N);

/// Memoized cohen_h, persisted in `COHENH 1` format. Lookups are thread-safe.
class HTable {
 public:
  const mpq_class& get(unsigned long r, long N);
  /// Fills every admissible N <= nmax for the given r.
  void fill(unsigned long r, long nmax);
  std::size_t size() const { return table_.size(); }
  long extent(unsigned long r) const;

  void write(std::ostream& out) const;
  /// Merges entries from a stream; throws SeriesFormatError on bad input.
  void read(std::istream& in);

 private:
  std::map<std::pair<unsigned long, long>, mpq_class> table_;
  mutable std::mutex mutex_;
};

/// Elliptic q-expansions, coefficients 0..n.
std::vector<mpz_class> elliptic_e4(long n);
std::vector<mpz_class> elliptic_e6(long n);
/// Delta from the product q * prod (1 - q^m)^24.
std::vector<mpz_class> elliptic_delta(long n);
/// Truncated product of two expansions to length n + 1.
std::vector<mpz_class> elliptic_mul(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g, long n);

}  // namespace siegel
