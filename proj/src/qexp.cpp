#include "siegel/qexp.hpp"

#include "siegel/rational.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace siegel {

long FourierIndex::content() const { return std::gcd(std::gcd(a, b < 0 ? -b : b), c); }

namespace {

// floor(sqrt(n)) for n >= 0 without floating point surprises.
long isqrt(long n) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<FourierIndex> enumerate_indices(long t) {
  if (t < 0) throw std::invalid_argument("enumerate_indices: negative trace");
  std::vector<FourierIndex> out;
  for (long a = 0; a <= t; ++a) {
    long c = t - a;
    long bmax = isqrt(4 * a * c);
    for (long b = -bmax; b <= bmax; ++b) out.push_back({a, b, c});
  }
  return out;
}

long index_count(long t) {
  long n = 0;
  for (long a = 0; a <= t; ++a) n += 1 + 2 * isqrt(4 * a * (t - a));
  return n;
}

TruncatedSeries::TruncatedSeries(long weight, long trace_bound) : weight_(weight), trace_bound_(trace_bound) {
  if (trace_bound < 0) throw std::invalid_argument("negative trace bound");
}

TruncatedSeries::TruncatedSeries(long weight, long trace_bound, std::vector<SeriesTerm> sorted_terms)
    : TruncatedSeries(weight, trace_bound) {
  terms_.reserve(sorted_terms.size());
  for (auto& term : sorted_terms) {
    if (!term.index.is_valid()) throw SeriesFormatError("index is not positive semi-definite");
    if (term.index.trace() > trace_bound) throw SeriesFormatError("index above the trace bound");
    if (!terms_.empty() && !(terms_.back().index < term.index)) {
      throw SeriesFormatError("terms are not in canonical order");
    }
    if (term.coeff == 0) continue;
    terms_.push_back(std::move(term));
  }
}

TruncatedSeries TruncatedSeries::unit(long trace_bound) {
  return TruncatedSeries(0, trace_bound, {{FourierIndex{0, 0, 0}, mpq_class(1)}});
}

mpq_class TruncatedSeries::coefficient(const FourierIndex& n) const {
  if (n.trace() > trace_bound_) throw std::out_of_range("coefficient above the trace bound");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), n,
                             [](const SeriesTerm& t, const FourierIndex& x) { return t.index < x; });
  if (it != terms_.end() && it->index == n) return it->coeff;
  return 0;
}

TruncatedSeries TruncatedSeries::truncated(long trace_bound) const {
  TruncatedSeries out(weight_, std::min(trace_bound, trace_bound_));
  for (const auto& t : terms_) {
    if (t.index.trace() > out.trace_bound_) break;
    out.terms_.push_back(t);
  }
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const mpq_class& s) const {
  TruncatedSeries out(weight_, trace_bound_);
  if (s == 0) return out;
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff *= s;
  return out;
}

bool operator==(const TruncatedSeries& x, const TruncatedSeries& y) {
  if (x.weight_ != y.weight_ || x.trace_bound_ != y.trace_bound_ || x.terms_.size() != y.terms_.size()) return false;
  for (std::size_t i = 0; i < x.terms_.size(); ++i) {
    if (x.terms_[i].index != y.terms_[i].index || x.terms_[i].coeff != y.terms_[i].coeff) return false;
  }
  return true;
}

TruncatedSeries series_add(const TruncatedSeries& f, const TruncatedSeries& g) {
  if (f.weight() != g.weight()) throw std::invalid_argument("series_add: weight mismatch");
  long bound = std::min(f.trace_bound(), g.trace_bound());
  std::vector<SeriesTerm> out;
  auto i = f.terms().begin(), ie = f.terms().end();
  auto j = g.terms().begin(), je = g.terms().end();
  auto in_bound = [bound](const SeriesTerm& t) { return t.index.trace() <= bound; };
  while ((i != ie && in_bound(*i)) || (j != je && in_bound(*j))) {
    bool take_i = i != ie && in_bound(*i);
    bool take_j = j != je && in_bound(*j);
    if (take_i && take_j && i->index == j->index) {
      out.push_back({i->index, i->coeff + j->coeff});
      ++i;
      ++j;
    } else if (take_i && (!take_j || i->index < j->index)) {
      out.push_back(*i++);
    } else {
      out.push_back(*j++);
    }
  }
  return TruncatedSeries(f.weight(), bound, std::move(out));
}

namespace {

struct IndexHash {
  std::size_t operator()(const FourierIndex& n) const {
    std::size_t h = static_cast<std::size_t>(n.a) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::size_t>(n.b + (1L << 20)) * 0xC2B2AE3D27D4EB4FULL;
    h ^= static_cast<std::size_t>(n.c) * 0x165667B19E3779F9ULL;
    return h;
  }
};

}  // namespace

TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g) {
  long bound = std::min(f.trace_bound(), g.trace_bound());
  std::unordered_map<FourierIndex, mpq_class, IndexHash> acc;
  for (const auto& x : f.terms()) {
    long room = bound - x.index.trace();
    if (room < 0) break;
    for (const auto& y : g.terms()) {
      if (y.index.trace() > room) break;
      FourierIndex n{x.index.a + y.index.a, x.index.b + y.index.b, x.index.c + y.index.c};
      acc[n] += x.coeff * y.coeff;
    }
  }
  std::vector<SeriesTerm> terms;
  terms.reserve(acc.size());
  for (auto& [n, q] : acc) terms.push_back({n, std::move(q)});
  std::sort(terms.begin(), terms.end(), [](const SeriesTerm& s, const SeriesTerm& t) { return s.index < t.index; });
  return TruncatedSeries(f.weight() + g.weight(), bound, std::move(terms));
}

std::map<std::pair<long, long>, mpq_class> diagonal_restriction(const TruncatedSeries& f) {
  std::map<std::pair<long, long>, mpq_class> out;
  for (const auto& t : f.terms()) out[{t.index.a, t.index.c}] += t.coeff;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

void write_series(std::ostream& out, const TruncatedSeries& f) {
  out << "SIEGELQEXP 1\n" << f.weight() << ' ' << f.trace_bound() << ' ' << f.size() << '\n';
  for (const auto& t : f.terms()) {
    out << t.index.a << ' ' << t.index.b << ' ' << t.index.c << ' ' << format_rational(t.coeff) << '\n';
  }
}

TruncatedSeries read_series(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "SIEGELQEXP 1") throw SeriesFormatError("missing SIEGELQEXP 1 header");
  long weight = 0, bound = 0;
  std::size_t count = 0;
  if (!std::getline(in, line)) throw SeriesFormatError("missing size line");
  {
    std::istringstream ss(line);
    if (!(ss >> weight >> bound >> count)) throw SeriesFormatError("malformed size line");
  }
  std::vector<SeriesTerm> terms;
  terms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw SeriesFormatError("truncated series file");
    std::istringstream ss(line);
    FourierIndex n;
    std::string q;
    if (!(ss >> n.a >> n.b >> n.c >> q)) throw SeriesFormatError("malformed term line: " + line);
    try {
      terms.push_back({n, parse_rational(q)});
    } catch (const std::invalid_argument& e) {
      throw SeriesFormatError(e.what());
    }
  }
  if (std::getline(in, line) && !line.empty()) throw SeriesFormatError("trailing data after series terms");
  TruncatedSeries f(weight, bound, std::move(terms));
  if (f.size() != count) throw SeriesFormatError("zero coefficient stored in series file");
  return f;
}

}  // namespace siegel
