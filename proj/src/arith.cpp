#include "siegel/arith.hpp"

#include "siegel/qexp.hpp"
#include "siegel/rational.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace siegel {

namespace {

int jacobi_odd(long a, long n) {
  // n odd and positive, 0 <= a < n
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      long r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

bool squarefree(long n) {
  if (n < 0) n = -n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

}  // namespace

int kronecker(long D, long n) {
  if (n <= 0) throw std::invalid_argument("kronecker: n must be positive");
  int t = 1;
  while (n % 2 == 0) {
    if (D % 2 == 0) return 0;
    long r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) t = -t;
    n /= 2;
  }
  if (n == 1) return t;
  long a = ((D % n) + n) % n;
  return t * jacobi_odd(a, n);
}

bool is_fundamental_discriminant(long D) {
  if (D == 1) return true;
  if (D == 0) return false;
  long r = ((D % 4) + 4) % 4;
  if (r == 1) return squarefree(D);
  if (r != 0) return false;
  long m = D / 4;
  long s = ((m % 4) + 4) % 4;
  return (s == 2 || s == 3) && squarefree(m);
}

std::pair<long, long> split_discriminant(long N) {
  if (N <= 0 || (N % 4 != 0 && N % 4 != 3)) throw std::invalid_argument("split_discriminant: bad N");
  long s = 1, g = 1, n = N;
  for (long p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      g *= p;
    }
    if (n % p == 0) {
      n /= p;
      s *= p;
    }
  }
  s *= n;
  s = -s;
  if (((s % 4) + 4) % 4 == 1) return {s, g};
  return {4 * s, g / 2};
}

int moebius(long n) {
  int mu = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

mpz_class divisor_sigma(long n, unsigned long e) {
  mpz_class s = 0, t;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), e);
    s += t;
    if (d * d != n) {
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(n / d), e);
      s += t;
    }
  }
  return s;
}

std::vector<mpq_class> bernoulli_numbers(unsigned long n) {
  // Akiyama-Tanigawa gives B_1 = +1/2; flip it afterwards.
  std::vector<mpq_class> out(n + 1), a(n + 1);
  for (unsigned long m = 0; m <= n; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (unsigned long j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    out[m] = a[0];
  }
  if (n >= 1) out[1] = -out[1];
  return out;
}

mpq_class generalized_bernoulli(long D, unsigned long n) {
  if (n == 0) throw std::invalid_argument("generalized_bernoulli: n must be >= 1");
  if (!is_fundamental_discriminant(D)) throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
  auto B = bernoulli_numbers(n);
  if (D == 1) return n == 1 ? mpq_class(1, 2) : B[n];
  long m = D < 0 ? -D : D;
  // S_e = sum_{a=1}^{m} chi(a) a^e for e = 0..n
  std::vector<mpz_class> S(n + 1, 0);
  if (static_cast<double>(n + 1) * std::log2(static_cast<double>(m)) < 120.0) {
    std::vector<__int128> s(n + 1, 0);
    for (long a = 1; a <= m; ++a) {
      int chi = kronecker(D, a);
      if (chi == 0) continue;
      __int128 pw = 1;
      for (unsigned long e = 0; e <= n; ++e) {
        s[e] += chi > 0 ? pw : -pw;
        pw *= a;
      }
    }
    for (unsigned long e = 0; e <= n; ++e) {
      bool negative = s[e] < 0;
      unsigned __int128 u = negative ? -static_cast<unsigned __int128>(s[e]) : s[e];
      mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u));
      S[e] = (hi << 64) + lo;
      if (negative) S[e] = -S[e];
    }
  } else {
    mpz_class pw;
    for (long a = 1; a <= m; ++a) {
      int chi = kronecker(D, a);
      if (chi == 0) continue;
      pw = 1;
      for (unsigned long e = 0; e <= n; ++e) {
        if (chi > 0) S[e] += pw; else S[e] -= pw;
        pw *= a;
      }
    }
  }
  // B_{n,chi} = sum_j C(n,j) B_j m^{j-1} S_{n-j}
  mpq_class sum = 0;
  mpz_class binom, mp;
  for (unsigned long j = 0; j <= n; ++j) {
    if (B[j] == 0) continue;
    mpz_bin_uiui(binom.get_mpz_t(), n, j);
    mpq_class term = B[j] * binom * S[n - j];
    if (j == 0) {
      term /= m;
    } else {
      mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(m), j - 1);
      term *= mp;
    }
    sum += term;
  }
  sum.canonicalize();
  return sum;
}

mpq_class zeta_one_minus(unsigned long n) {
  if (n < 2) throw std::invalid_argument("zeta_one_minus: n must be >= 2");
  mpq_class z = -bernoulli_numbers(n)[n] / n;
  z.canonicalize();
  return z;
}

mpq_class cohen_h(unsigned long r, long N) {
  if (r < 1 || N < 0) throw std::invalid_argument("cohen_h: bad arguments");
  if (N == 0) return r == 1 ? mpq_class(-1, 12) : zeta_one_minus(2 * r);
  if (N % 4 == 1 || N % 4 == 2) return 0;
  auto [D, f] = split_discriminant(N);
  mpq_class L = -generalized_bernoulli(D, r) / r;
  mpz_class corr = 0, pw;
  for (long d = 1; d <= f; ++d) {
    if (f % d != 0) continue;
    int mu = moebius(d);
    if (mu == 0) continue;
    int chi = kronecker(D, d);
    if (chi == 0) continue;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(d), r - 1);
    mpz_class term = pw * divisor_sigma(f / d, 2 * r - 1);
    if (mu * chi > 0) corr += term; else corr -= term;
  }
  mpq_class h = L * corr;
  h.canonicalize();
  return h;
}

const mpq_class& HTable::get(unsigned long r, long N) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(r, N);
  auto it = table_.find(key);
  if (it == table_.end()) it = table_.emplace(key, cohen_h(r, N)).first;
  return it->second;
}

void HTable::fill(unsigned long r, long nmax) {
  for (long N = 0; N <= nmax; ++N) {
    if (N % 4 == 1 || N % 4 == 2) continue;
    get(r, N);
  }
}

long HTable::extent(unsigned long r) const {
  std::lock_guard<std::mutex> lock(mutex_);
  long last = -1;
  for (long N = 0;; ++N) {
    if (N % 4 == 1 || N % 4 == 2) continue;
    if (!table_.count({r, N})) break;
    last = N;
  }
  return last;
}

void HTable::write(std::ostream& out) const {
  std::lock_guard<std::mutex> lock(mutex_);
  out << "COHENH 1\n";
  for (const auto& [key, h] : table_) out << key.first << ' ' << key.second << ' ' << format_rational(h) << '\n';
}

void HTable::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "COHENH 1") throw SeriesFormatError("missing COHENH 1 header");
  std::map<std::pair<unsigned long, long>, mpq_class> loaded;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    unsigned long r;
    long N;
    std::string q;
    if (!(ss >> r >> N >> q)) throw SeriesFormatError("malformed H-table line: " + line);
    try {
      loaded[{r, N}] = parse_rational(q);
    } catch (const std::invalid_argument& e) {
      throw SeriesFormatError(e.what());
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  table_.merge(loaded);
}

std::vector<mpz_class> elliptic_mul(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g, long n) {
  std::vector<mpz_class> out(n + 1, 0);
  long nf = std::min<long>(n, static_cast<long>(f.size()) - 1);
  for (long i = 0; i <= nf; ++i) {
    if (f[i] == 0) continue;
    long ng = std::min<long>(n - i, static_cast<long>(g.size()) - 1);
    for (long j = 0; j <= ng; ++j) mpz_addmul(out[i + j].get_mpz_t(), f[i].get_mpz_t(), g[j].get_mpz_t());
  }
  return out;
}

std::vector<mpz_class> elliptic_e4(long n) {
  std::vector<mpz_class> out(n + 1);
  out[0] = 1;
  for (long m = 1; m <= n; ++m) out[m] = 240 * divisor_sigma(m, 3);
  return out;
}

std::vector<mpz_class> elliptic_e6(long n) {
  std::vector<mpz_class> out(n + 1);
  out[0] = 1;
  for (long m = 1; m <= n; ++m) out[m] = -504 * divisor_sigma(m, 5);
  return out;
}

std::vector<mpz_class> elliptic_delta(long n) {
  std::vector<mpz_class> out(n + 1, 0);
  if (n < 1) return out;
  // Euler's pentagonal theorem for prod (1 - q^m).
  std::vector<mpz_class> eta(n, 0);
  for (long k = 0; k * (3 * k - 1) / 2 < n; ++k) {
    long sign = (k % 2 == 0) ? 1 : -1;
    eta[k * (3 * k - 1) / 2] = sign;
    if (k > 0 && k * (3 * k + 1) / 2 < n) eta[k * (3 * k + 1) / 2] = sign;
  }
  auto p2 = elliptic_mul(eta, eta, n - 1);
  auto p4 = elliptic_mul(p2, p2, n - 1);
  auto p8 = elliptic_mul(p4, p4, n - 1);
  auto p16 = elliptic_mul(p8, p8, n - 1);
  auto p24 = elliptic_mul(p16, p8, n - 1);
  for (long m = 1; m <= n; ++m) out[m] = p24[m - 1];
  return out;
}

}  // namespace siegel
