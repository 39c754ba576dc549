#include "siegel/engine.hpp"

#include "siegel/bounds.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace siegel {

namespace {

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t p = 64) { mpfr_init2(v, p); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

Mag div_lower(const Mag& a, const Mag& b) {
  Mpfr x, y;
  a.to_mpfr(x.v);
  b.to_mpfr(y.v);
  mpfr_div(x.v, x.v, y.v, MPFR_RNDD);
  return Mag::lower_abs(x.v);
}

Mag mul_lower_d(const Mag& a, double s) {
  Mpfr x;
  a.to_mpfr(x.v);
  mpfr_mul_d(x.v, x.v, s, MPFR_RNDD);
  return Mag::lower_abs(x.v);
}

double log2_of(const Mag& a) { return std::log2(a.mantissa()) + static_cast<double>(a.exponent()); }

Mag pow_mag(const Mag& a, int e) {
  Mag r = Mag::from_double(1);
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

Mag euclid_radius(const ComplexBall& x) {
  Mag r = x.re().rad(), i = x.im().rad();
  return Mag::sqrt(r * r + i * i);
}

// 0.5 * 10^-digits / m^(2k-3), rounded down.
Mag target_eps(double digits, long m, long k) {
  Mpfr t(128), u(128);
  mpfr_set_d(t.v, -digits, MPFR_RNDD);
  mpfr_ui_pow(t.v, 10, t.v, MPFR_RNDD);
  mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDD);
  if (2 * k - 3 > 0) {
    mpfr_set_si(u.v, m, MPFR_RNDN);
    mpfr_pow_ui(u.v, u.v, static_cast<unsigned long>(2 * k - 3), MPFR_RNDU);
    mpfr_div(t.v, t.v, u.v, MPFR_RNDD);
  }
  return Mag::lower_abs(t.v);
}

mpz_class normalization(long m, long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(std::max(0L, 2 * k - 3)));
  return r;
}

struct TableRow {
  long p;
  const char* y11;
  long bits;
};

constexpr TableRow kTable[] = {{2, "2.7", 37},   {3, "4.3", 62},   {5, "6.1", 101},  {7, "7.5", 130},
                               {11, "9.5", 172}, {13, "10.3", 190}, {17, "10.9", 208}, {19, "11.9", 226},
                               {23, "12.3", 240}, {29, "13.5", 267}, {31, "13.9", 275}, {37, "14.5", 295}};

// Least squares y = a + b log p over the table, for the chosen column.
std::pair<double, double> fit(bool bits) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& r : kTable) {
    double x = std::log(static_cast<double>(r.p));
    double y = bits ? static_cast<double>(r.bits) : std::stod(r.y11);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - b * sx) / n, b};
}

}  // namespace

FormEvaluator::FormEvaluator(const EigenformSpec& spec, Precision prec)
    : weight_(spec.weight), prec_(prec), coeff_(embed_algebraic(spec, prec)) {
  for (const auto& t : spec.terms) {
    expo_.push_back(t.expo);
    for (int j = 0; j < 4; ++j) {
      if (t.expo[j] > 0) uses_[j] = true;
      max_expo_[j] = std::max(max_expo_[j], t.expo[j]);
    }
  }
  real_ = !spec.field || (spec.field->im[0] == 0 && spec.field->im[1] == 0);
}

int FormEvaluator::used_count() const { return static_cast<int>(std::count(uses_.begin(), uses_.end(), true)); }

ComplexBall FormEvaluator::value(const GeneratorValues& g) const {
  std::array<std::vector<ComplexBall>, 4> pw;
  for (int j = 0; j < 4; ++j) {
    pw[j].push_back(ComplexBall::from_int(1, prec_));
    for (int e = 1; e <= max_expo_[j]; ++e) pw[j].push_back(pw[j].back() * g[j]);
  }
  ComplexBall sum(prec_), term(prec_), tmp(prec_);
  for (std::size_t t = 0; t < coeff_.size(); ++t) {
    term = coeff_[t];
    for (int j = 0; j < 4; ++j) {
      if (expo_[t][j] == 0) continue;
      mul(tmp, term, pw[j][expo_[t][j]]);
      std::swap(term, tmp);
    }
    add(sum, sum, term);
  }
  return sum;
}

std::array<Mag, 4> FormEvaluator::lipschitz(const std::array<Mag, 4>& G) const {
  std::array<Mag, 4> L{};
  for (std::size_t t = 0; t < coeff_.size(); ++t) {
    Mag c = coeff_[t].abs_upper();
    for (int j = 0; j < 4; ++j) {
      if (expo_[t][j] == 0) continue;
      Mag d = c * Mag::from_double(expo_[t][j]);
      for (int l = 0; l < 4; ++l) {
        int e = expo_[t][l] - (l == j ? 1 : 0);
        d = d * pow_mag(G[l] + Mag::from_double(1), e);
      }
      L[j] += d;
    }
  }
  return L;
}

Mag FormEvaluator::magnitude(const std::array<Mag, 4>& G) const {
  Mag s;
  for (std::size_t t = 0; t < coeff_.size(); ++t) {
    Mag d = coeff_[t].abs_upper();
    for (int l = 0; l < 4; ++l) d = d * pow_mag(G[l], expo_[t][l]);
    s += d;
  }
  return s;
}

MagnitudeBounds coarse_magnitude_bounds(const std::function<ComplexBall(const Mag&)>& eval, int max_depth) {
  Mag tol = Mag::from_double(0.1);
  for (int depth = 0; depth < max_depth; ++depth) {
    ComplexBall x = eval(tol);
    Mag e = euclid_radius(x);
    if (e < tol) e = tol;
    ComplexBall mid = x;
    mid.re().set_rad(Mag());
    mid.im().set_rad(Mag());
    Mag two_e = e * Mag::from_double(2);
    Mag lo = Mag::sub_lower(mid.abs_lower(), two_e);
    if (!lo.is_zero()) return {lo, mid.abs_upper() + two_e, e, x};
    tol = tol * Mag::from_double(0.1);
  }
  throw CertificationError("coarse magnitude loop did not terminate; the value is likely zero at this point");
}

QuotientBudget quotient_budget(const Mag& eps, double h, const Mag& y_lower, const Mag& z_upper) {
  if (!(h > 0 && h < 1)) throw std::invalid_argument("quotient split must lie in (0, 1)");
  if (y_lower.is_zero()) throw std::invalid_argument("quotient budget needs a positive lower bound for |y|");
  // strictness margin
  const double shrink = 1.0 - std::ldexp(1.0, -30);
  QuotientBudget b;
  b.numerator = mul_lower_d(Mag::mul_lower(eps, y_lower), h / 2 * shrink);
  Mag half_y = mul_lower_d(y_lower, 0.5 * shrink);
  if (z_upper.is_zero()) {
    b.denominator = half_y;
  } else {
    Mag a = div_lower(mul_lower_d(Mag::mul_lower(eps, y_lower), (1 - h) / 2 * shrink), z_upper);
    b.denominator = a < half_y ? a : half_y;
  }
  return b;
}

const char* mode_name(TruncationMode m) { return m == TruncationMode::Rigorous ? "rigorous" : "heuristic"; }

TruncationMode parse_mode(const std::string& s) {
  if (s == "rigorous") return TruncationMode::Rigorous;
  if (s == "heuristic") return TruncationMode::Heuristic;
  throw std::invalid_argument("unknown mode " + s);
}

Tp2Parts assemble_tp2(const ComplexBall& lambda_p, const ComplexBall& lambda_p21, long p, long k) {
  Precision prec = std::max(lambda_p.prec(), lambda_p21.prec());
  mpz_class l0;
  if (2 * k - 6 < 0) throw std::invalid_argument("assemble_tp2 needs k >= 3");
  mpz_ui_pow_ui(l0.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(2 * k - 6));
  Tp2Parts r;
  r.lambda0 = ComplexBall(Ball::from_mpz(l0, prec), Ball(prec));
  ComplexBall sq(prec), t(prec);
  sqr(sq, lambda_p);
  mul_si(t, lambda_p21, p + 1);
  sub(sq, sq, t);
  mpz_class c = l0 * (p * p + 1) * (p + 1);
  r.lambda2 = sq - ComplexBall(Ball::from_mpz(c, prec), Ball(prec));
  r.lambda = r.lambda0 + lambda_p21 + r.lambda2;
  return r;
}

std::optional<mpz_class> snap(const ComplexBall& x) {
  if (!(x.re().rad() < Mag::pow2(-1))) return std::nullopt;
  if (!x.im().contains_zero()) return std::nullopt;
  return x.re().unique_integer();
}

std::optional<mpz_class> nearest_integer(const ComplexBall& x) {
  if (!(x.re().rad() < Mag::pow2(-1))) return std::nullopt;
  if (!(Mag::upper_abs(x.im().mid()) < Mag::pow2(-1))) return std::nullopt;
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.re().mid(), MPFR_RNDN);
  return z;
}

std::optional<mpz_class> closest_integer(const ComplexBall& x) {
  auto n = nearest_integer(x);
  if (!n) return std::nullopt;
  Ball d = x.re() - Ball::from_mpz(*n, x.re().prec());
  mpfr_t lo, hi;
  mpfr_init2(lo, 64);
  mpfr_init2(hi, 64);
  d.lower(lo);
  d.upper(hi);
  bool inside = mpfr_cmp_d(lo, -0.5) > 0 && mpfr_cmp_d(hi, 0.5) < 0;
  mpfr_clear(lo);
  mpfr_clear(hi);
  if (!inside) return std::nullopt;
  return n;
}

std::string default_y11(long m) {
  for (const auto& r : kTable) {
    if (r.p == m) return r.y11;
  }
  auto [a, b] = fit(false);
  double y = a + b * std::log(static_cast<double>(m));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", std::max(y, 1.5));
  return buf;
}

Precision default_precision(long m, long k) {
  double bits = -1;
  for (const auto& r : kTable) {
    if (r.p == m) bits = static_cast<double>(r.bits);
  }
  if (bits < 0) {
    auto [a, b] = fit(true);
    bits = a + b * std::log(static_cast<double>(m));
  }
  bits += static_cast<double>(2 * k - 40) * std::log2(static_cast<double>(m));
  return static_cast<Precision>(std::max(64.0, std::ceil(bits)));
}

std::string timing_line(const EigenvalueResult& r) {
  std::ostringstream os;
  os << "timing prime=" << r.prime << " operator=" << op_name(r.op) << " cosets=" << r.cosets
     << " precision_bits=" << r.precision << " trace_bound=" << r.trace_max << " wall_ms=" << std::llround(r.wall_ms);
  return os.str();
}

namespace {

ComplexBall midpoint(const ComplexBall& x) {
  ComplexBall m = x;
  m.re().set_rad(Mag());
  m.im().set_rad(Mag());
  return m;
}

Mag change(const ComplexBall& x, const ComplexBall& prev) { return (midpoint(x) - midpoint(prev)).abs_upper(); }

}  // namespace

Engine::Engine(GeneratorCache& cache, EngineConfig cfg) : cache_(cache), cfg_(cfg) {
  if (cfg_.threads < 1) cfg_.threads = 1;
}

const NumericSeries& Engine::series(GeneratorId id, long T, Precision prec) {
  auto key = std::make_pair(static_cast<int>(id), prec);
  auto it = numeric_.find(key);
  if (it != numeric_.end() && it->second->trace_bound() >= T) return *it->second;
  auto ns = std::make_unique<NumericSeries>(cache_.get(id, T), prec);
  auto& slot = numeric_[key];
  slot = std::move(ns);
  return *slot;
}

std::vector<std::array<Mag, 4>> Engine::generator_bounds(const FormEvaluator& F, const std::vector<EvalPoint>& pts,
                                                         const std::vector<Ball>& alphas) {
  const std::size_t n = pts.size();
  std::vector<std::array<Mag, 4>> G(n);
  if (F.used_count() == 0) return G;
  std::vector<PointPlan> coarse(n);
  const long np = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(cfg_.threads)
  for (long i = 0; i < np; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!F.uses()[j]) continue;
      G[i][j] = generator_magnitude_bound(kGenerators[j], alphas[i]);
      coarse[i].T = std::max(coarse[i].T, truncation_bound(generator_bound(kGenerators[j]), alphas[i], 0));
    }
    for (int j = 0; j < 4; ++j) {
      if (F.uses()[j]) coarse[i].envelope[j] = truncation_envelope(generator_bound(kGenerators[j]), alphas[i], coarse[i].T);
    }
  }
  // a certified low-precision evaluation tightens the analytic bound
  const Precision low = 64;
  long Tmax = 0;
  for (const auto& c : coarse) Tmax = std::max(Tmax, c.T);
  SeriesSet set{};
  for (int j = 0; j < 4; ++j) {
    if (F.uses()[j]) set[j] = &series(kGenerators[j], Tmax, low);
  }
  std::map<long, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[coarse[i].T].push_back(i);
  for (const auto& [T, idx] : groups) {
    std::vector<EvalPoint> sub;
    sub.reserve(idx.size());
    for (auto i : idx) sub.push_back(pts[i].with_prec(low));
    auto vals = evaluate_batch(set, sub, T, cfg_.threads);
    for (std::size_t s = 0; s < idx.size(); ++s) {
      for (int j = 0; j < 4; ++j) {
        if (!F.uses()[j]) continue;
        Mag b = vals[s][j].abs_upper() + coarse[idx[s]].envelope[j];
        if (b < G[idx[s]][j]) G[idx[s]][j] = b;
      }
    }
  }
  return G;
}

Engine::PointPlan Engine::plan_point(const FormEvaluator& F, const Ball& alpha, const Mag& tol,
                                     const std::array<Mag, 4>& G, Precision* bits) const {
  PointPlan plan;
  int used = F.used_count();
  if (used == 0) return plan;
  Mag trunc = mul_lower_d(tol, 0.5 / used);
  auto L = F.lipschitz(G);
  std::array<Mag, 4> eta{};
  for (int j = 0; j < 4; ++j) {
    if (!F.uses()[j]) continue;
    eta[j] = L[j].is_zero() ? Mag::from_double(1) : div_lower(trunc, L[j]);
    if (Mag::from_double(1) < eta[j]) eta[j] = Mag::from_double(1);
    long T = truncation_bound(generator_bound(kGenerators[j]), alpha, decimal_digits(eta[j]));
    plan.T = std::max(plan.T, T);
  }
  for (int j = 0; j < 4; ++j) {
    if (F.uses()[j]) plan.envelope[j] = truncation_envelope(generator_bound(kGenerators[j]), alpha, plan.T);
  }
  if (bits != nullptr) {
    double scale = static_cast<double>(plan.T + 1);
    double need = log2_of(F.magnitude(G)) + 3 * std::log2(scale) - log2_of(mul_lower_d(tol, 0.5)) + 16;
    *bits = static_cast<Precision>(std::max(64.0, std::ceil(need)));
  }
  return plan;
}

std::vector<ComplexBall> Engine::evaluate_points(const FormEvaluator& F, const std::vector<EvalPoint>& pts,
                                                 const std::vector<PointPlan>& plans,
                                                 std::vector<ComplexBall>* previous) {
  const std::size_t n = pts.size();
  const Precision prec = F.prec();
  std::vector<GeneratorValues> gens(n), shell;
  const bool want_shell = previous != nullptr && cfg_.mode == TruncationMode::Heuristic;
  if (F.used_count() > 0) {
    long Tmax = 0;
    for (const auto& p : plans) Tmax = std::max(Tmax, p.T);
    SeriesSet set{};
    for (int j = 0; j < 4; ++j) {
      if (F.uses()[j]) set[j] = &series(kGenerators[j], Tmax, prec);
    }
    if (want_shell) shell.resize(n);
    std::map<long, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[plans[i].T].push_back(i);
    for (const auto& [T, idx] : groups) {
      std::vector<EvalPoint> sub;
      sub.reserve(idx.size());
      for (auto i : idx) sub.push_back(pts[i]);
      std::vector<GeneratorValues> sh;
      auto vals = evaluate_batch(set, sub, T, cfg_.threads, nullptr, want_shell ? &sh : nullptr);
      for (std::size_t s = 0; s < idx.size(); ++s) {
        gens[idx[s]] = std::move(vals[s]);
        if (want_shell) shell[idx[s]] = std::move(sh[s]);
      }
    }
  }
  std::vector<ComplexBall> out(n, ComplexBall(prec));
  if (previous != nullptr) previous->assign(n, ComplexBall(prec));
  const long np = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(cfg_.threads)
  for (long i = 0; i < np; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!F.uses()[j]) continue;
      gens[i][j].re().add_error(plans[i].envelope[j]);
      gens[i][j].im().add_error(plans[i].envelope[j]);
    }
    out[i] = F.value(gens[i]);
    if (previous == nullptr) continue;
    if (!want_shell) {
      (*previous)[i] = out[i];
      continue;
    }
    for (int j = 0; j < 4; ++j) {
      if (F.uses()[j]) gens[i][j] = gens[i][j] - shell[i][j];
    }
    (*previous)[i] = F.value(gens[i]);
  }
  return out;
}

HeckeImage Engine::hecke_image_at(const FormEvaluator& F, const EvalPoint& Z, const std::vector<CosetRep>& reps,
                                  const Mag& eps_x, long heuristic_T, bool stop_if_imprecise) {
  if (reps.empty()) throw std::invalid_argument("empty coset list");
  const std::size_t n = reps.size();
  const Precision prec = F.prec();
  const long k = F.weight();
  HeckeImage out;
  out.cosets = n;
  out.trace_bounds.assign(n, 0);

  std::vector<std::size_t> partner(n);
  for (std::size_t i = 0; i < n; ++i) partner[i] = i;
  if (cfg_.symmetry && Z.is_purely_imaginary() && F.real_coefficients()) partner = conjugate_partners(reps);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (partner[i] >= i) active.push_back(i);
  }
  const std::size_t na = active.size();
  out.evaluated = na;
  const bool reduce = cfg_.reduce_points && k % 2 == 0 && cfg_.mode == TruncationMode::Rigorous;

  std::vector<EvalPoint> pts(na, Z);
  std::vector<ComplexBall> detk(na, ComplexBall(prec));
  std::vector<Ball> alphas(na, Ball(prec));
  std::vector<std::string> failure(na);
  const long nal = static_cast<long>(na);
#pragma omp parallel for schedule(dynamic, 8) num_threads(cfg_.threads)
  for (long s = 0; s < nal; ++s) {
    try {
      PointImage im = act_on_point(reps[active[s]], Z);
      pts[s] = reduce ? gl2_reduce(im.w) : std::move(im.w);
      pow_ui(detk[s], im.det, static_cast<unsigned long>(k));
      if (cfg_.mode == TruncationMode::Rigorous) alphas[s] = alpha(pts[s]);
    } catch (const std::exception& e) {
      failure[s] = e.what();
    }
  }
  for (std::size_t s = 0; s < na; ++s) {
    if (!failure[s].empty()) {
      throw CertificationError("coset " + format_rep(reps[active[s]]) + ": " + failure[s]);
    }
  }

  std::vector<PointPlan> plans(na);
  if (cfg_.mode == TruncationMode::Rigorous) {
    auto G = generator_bounds(F, pts, alphas);
    Mag share = div_lower(eps_x, Mag::from_double(static_cast<double>(n)));
    std::vector<Precision> bits(na, 0);
#pragma omp parallel for schedule(dynamic, 8) num_threads(cfg_.threads)
    for (long s = 0; s < nal; ++s) {
      Mag tol = Mag::mul_lower(share, detk[s].abs_lower());
      plans[s] = plan_point(F, alphas[s], tol, G[s], &bits[s]);
    }
    for (auto b : bits) out.bits_needed = std::max(out.bits_needed, b);
  } else {
    for (auto& p : plans) p.T = heuristic_T;
  }
  for (std::size_t s = 0; s < na; ++s) out.trace_bounds[active[s]] = plans[s].T;
  if (stop_if_imprecise && out.bits_needed > prec) {
    out.evaluated = 0;
    return out;
  }

  std::vector<ComplexBall> previous;
  auto values = evaluate_points(F, pts, plans, &previous);
  std::vector<ComplexBall> summand(n, ComplexBall(prec)), wsummand(n, ComplexBall(prec));
#pragma omp parallel for schedule(dynamic, 8) num_threads(cfg_.threads)
  for (long s = 0; s < nal; ++s) {
    div(summand[active[s]], values[s], detk[s]);
    div(wsummand[active[s]], previous[s], detk[s]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (partner[i] < i) {
      conj(summand[i], summand[partner[i]]);
      conj(wsummand[i], wsummand[partner[i]]);
      out.trace_bounds[i] = out.trace_bounds[partner[i]];
    }
  }
  ComplexBall sum(prec), wsum(prec);
  for (std::size_t i = 0; i < n; ++i) {
    add(sum, sum, summand[i]);
    add(wsum, wsum, wsummand[i]);
  }
  out.previous = std::move(wsum);
  out.value = std::move(sum);
  return out;
}

ComplexBall Engine::form_value(const FormEvaluator& F, const EvalPoint& Z, const Mag& tol, long heuristic_T,
                               ComplexBall* previous_value) {
  std::vector<EvalPoint> pts{Z};
  std::vector<PointPlan> plans(1);
  if (heuristic_T >= 0) {
    plans[0].T = heuristic_T;
  } else {
    std::vector<Ball> alphas{alpha(Z)};
    auto G = generator_bounds(F, pts, alphas);
    plans[0] = plan_point(F, alphas[0], tol, G[0], nullptr);
  }
  std::vector<ComplexBall> previous;
  auto v = evaluate_points(F, pts, plans, previous_value != nullptr ? &previous : nullptr);
  if (previous_value != nullptr) *previous_value = previous[0];
  return v[0];
}

EigenvalueResult Engine::eigenvalue(const EigenformSpec& spec, long p, HeckeOp op, double digits,
                                    std::optional<std::string> y11, std::optional<Precision> precision) {
  auto t0 = std::chrono::steady_clock::now();
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  validate(spec);
  const long k = spec.weight;
  const long m = op == HeckeOp::Tp ? p : p * p;
  auto reps = coset_reps(op, p);
  const long hT = cfg_.trace_bound.value_or(op == HeckeOp::Tp ? 2 * p : 2 * p * p);
  const Mag eps = target_eps(digits, m, k);

  EigenvalueResult r;
  r.form = spec.name;
  r.prime = p;
  r.op = op;
  r.cosets = reps.size();
  r.mode = cfg_.mode;
  r.digits = digits;
  r.y11 = y11.value_or(default_y11(m));
  Precision prec = precision.value_or(default_precision(m, k));
  bool bumped = false;

  for (;;) {
    ++r.attempts;
    EvalPoint Z = standard_point(r.y11, prec);
    FormEvaluator F(spec, prec);
    auto yb = coarse_magnitude_bounds([&](const Mag& e) { return form_value(F, Z, e); }, cfg_.max_coarse_depth);
    Mag eps_x = quotient_budget(eps, cfg_.split, yb.lower, Mag()).numerator;

    // the plan may ask for more bits than the default before anything expensive runs
    HeckeImage X = hecke_image_at(F, Z, reps, eps_x, hT, !bumped && !precision);
    if (X.evaluated == 0) {
      prec = (X.bits_needed + 31) / 32 * 32;
      bumped = true;
      continue;
    }
    Mag z_upper = Mag::div(X.value.abs_upper(), yb.lower);
    QuotientBudget qb = quotient_budget(eps, cfg_.split, yb.lower, z_upper);
    ComplexBall Yp(prec);
    ComplexBall Y = form_value(F, Z, qb.denominator, cfg_.mode == TruncationMode::Heuristic ? hT : -1, &Yp);
    if (Y.contains_zero()) throw CertificationError("F(Z) box contains 0; choose a different y11");
    // precision only controls the rounding part; the heuristic truncation estimate is reported, not chased
    ComplexBall rounding = X.value / Y;
    r.trace_min = *std::min_element(X.trace_bounds.begin(), X.trace_bounds.end());
    r.trace_max = *std::max_element(X.trace_bounds.begin(), X.trace_bounds.end());
    r.precision = prec;
    if (euclid_radius(rounding) <= eps) {
      r.raw = rounding;
      r.target_met = true;
      mpz_class norm = normalization(m, k);
      ComplexBall scale(Ball::from_mpz(norm, prec), Ball(prec));
      r.normalized = r.raw * scale;
      if (cfg_.mode == TruncationMode::Heuristic) {
        if (!Yp.contains_zero()) r.truncation_change = change(r.normalized, X.previous / Yp * scale);
        r.snapped = nearest_integer(r.normalized);
        r.nearest = r.snapped;
      } else {
        r.snapped = snap(r.normalized);
        r.nearest = closest_integer(r.normalized);
      }
      break;
    }
    if (prec * 2 > cfg_.max_precision) throw CertificationError("precision ceiling reached");
    prec *= 2;
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Tp2Result Engine::eigenvalue_tp2(const EigenformSpec& spec, long p, double digits, std::optional<std::string> y11,
                                 std::optional<Precision> precision) {
  auto t0 = std::chrono::steady_clock::now();
  const long k = spec.weight;
  Tp2Result r;
  double d1 = digits + std::log10(2.0 * static_cast<double>(p + 1)) + 1;
  r.tp2_1 = eigenvalue(spec, p, HeckeOp::Tp2_1, d1, y11, precision);
  double dp = digits + 1;
  const Mag target = target_eps(digits, 1, 0);
  for (int round = 0; round < 4; ++round) {
    r.tp = eigenvalue(spec, p, HeckeOp::Tp, dp, y11, precision);
    Tp2Parts parts = assemble_tp2(r.tp.normalized, r.tp2_1.normalized, p, k);
    r.lambda0 = parts.lambda0;
    r.lambda1 = r.tp2_1.normalized;
    r.lambda2 = parts.lambda2;
    r.lambda = parts.lambda;
    if (euclid_radius(r.lambda) <= target) break;
    double mag = log2_of(r.tp.normalized.abs_upper() + Mag::from_double(1)) * std::log10(2.0);
    dp = digits + mag + 2 + round;
  }
  r.snapped = cfg_.mode == TruncationMode::Heuristic ? nearest_integer(r.lambda) : snap(r.lambda);
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace siegel
