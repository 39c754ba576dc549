#include "siegel/evaluate.hpp"

#include <omp.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace siegel {

NumericSeries::NumericSeries(const TruncatedSeries& f, Precision prec)
    : weight_(f.weight()), trace_bound_(f.trace_bound()), prec_(prec) {
  long T = trace_bound_;
  offset_.resize(T + 2);
  offset_[0] = 0;
  for (long a = 0; a <= T; ++a) offset_[a + 1] = offset_[a] + static_cast<std::size_t>(T - a + 1);
  blocks_.resize(offset_[T + 1]);
  for (const auto& t : f.terms()) {
    if (t.coeff != f.coefficient({t.index.a, -t.index.b, t.index.c})) {
      symmetric_ = false;
      break;
    }
  }
  for (const auto& t : f.terms()) {
    const auto& n = t.index;
    if (symmetric_ && n.b < 0) continue;
    Block& blk = blocks_[offset_[n.a] + n.c];
    blk.b.push_back(static_cast<int>(n.b));
    blk.coeff.push_back(Ball::from_mpq(t.coeff, prec));
    max_b_ = std::max(max_b_, static_cast<int>(n.b < 0 ? -n.b : n.b));
  }
}

Q3Powers::Q3Powers(const ComplexBall& w3, int max_b, Precision prec) {
  pos.reserve(max_b + 1);
  neg.reserve(max_b + 1);
  sym.reserve(max_b + 1);
  ComplexBall q = exp_2pi_i(w3);
  ComplexBall qi = exp_2pi_i(-w3);
  pos.push_back(ComplexBall::from_int(1, prec));
  neg.push_back(ComplexBall::from_int(1, prec));
  sym.push_back(ComplexBall::from_int(2, prec));
  for (int b = 1; b <= max_b; ++b) {
    pos.push_back(pos.back() * q);
    neg.push_back(neg.back() * qi);
    sym.push_back(pos.back() + neg.back());
  }
}

void eval_inner(ComplexBall& out, const NumericSeries& f, const NumericSeries::Block& blk, const Q3Powers& pw,
                ComplexBall& scratch) {
  out.zero();
  for (std::size_t i = 0; i < blk.b.size(); ++i) {
    int b = blk.b[i];
    if (b == 0) {
      add(out.re(), out.re(), blk.coeff[i]);
      continue;
    }
    const ComplexBall& x = f.symmetric() ? pw.sym[b] : (b > 0 ? pw.pos[b] : pw.neg[-b]);
    mul_real(scratch, x, blk.coeff[i]);
    add(out, out, scratch);
  }
}

namespace {

void check_bound(const NumericSeries& f, long T) {
  if (T > f.trace_bound()) throw std::invalid_argument("series is not available to the requested trace bound");
  if (T < 0) throw std::invalid_argument("negative trace bound");
}

int needed_b(const NumericSeries& f, long T) { return std::min<int>(f.max_b(), static_cast<int>(T)); }

// acc = acc * x + y
void horner_step(ComplexBall& acc, const ComplexBall& x, const ComplexBall& y, ComplexBall& scratch) {
  mul(scratch, acc, x);
  add(acc, scratch, y);
}

}  // namespace

ComplexBall evaluate_series(const NumericSeries& f, const EvalPoint& W, long T) {
  check_bound(f, T);
  Precision prec = f.prec();
  Q3Powers pw(W.z3, needed_b(f, T), prec);
  ComplexBall q1 = exp_2pi_i(W.z1), q2 = exp_2pi_i(W.z2);
  ComplexBall F(prec), R(prec), P(prec), scratch(prec), tmp(prec);
  for (long a = T; a >= 0; --a) {
    R.zero();
    for (long c = T - a; c >= 0; --c) {
      eval_inner(P, f, f.block(a, c), pw, scratch);
      horner_step(R, q2, P, tmp);
    }
    horner_step(F, q1, R, tmp);
  }
  return F;
}

ComplexBall evaluate_direct(const TruncatedSeries& f, const EvalPoint& W, long T, Precision prec) {
  if (T > f.trace_bound()) throw std::invalid_argument("series is not available to the requested trace bound");
  EvalPoint Wp = W.with_prec(prec);
  ComplexBall sum(prec), arg(prec), t(prec), term(prec);
  for (const auto& s : f.terms()) {
    const auto& n = s.index;
    if (n.trace() > T) break;
    arg.zero();
    mul_si(t, Wp.z1, n.a);
    add(arg, arg, t);
    mul_si(t, Wp.z3, n.b);
    add(arg, arg, t);
    mul_si(t, Wp.z2, n.c);
    add(arg, arg, t);
    mul_real(term, exp_2pi_i(arg), Ball::from_mpq(s.coeff, prec));
    add(sum, sum, term);
  }
  return sum;
}

std::vector<GeneratorValues> evaluate_batch_reference(const SeriesSet& series, const std::vector<EvalPoint>& points,
                                                      long T) {
  std::vector<GeneratorValues> out;
  out.reserve(points.size());
  for (const auto& W : points) {
    GeneratorValues v;
    for (int g = 0; g < 4; ++g) {
      if (series[g] != nullptr) v[g] = evaluate_series(*series[g], W, T);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<GeneratorValues> evaluate_batch(const SeriesSet& series, const std::vector<EvalPoint>& points, long T,
                                            int threads, BatchStats* stats, std::vector<GeneratorValues>* shell) {
  Precision prec = 0;
  int max_b = 0;
  std::vector<int> gens;
  for (int g = 0; g < 4; ++g) {
    if (series[g] == nullptr) continue;
    check_bound(*series[g], T);
    prec = std::max(prec, series[g]->prec());
    max_b = std::max(max_b, needed_b(*series[g], T));
    gens.push_back(g);
  }
  if (threads < 1) threads = 1;
  const std::size_t n = points.size();
  const std::size_t nblocks = static_cast<std::size_t>((T + 1) * (T + 2) / 2);
  // block (a, c) with a + c <= T at a * (2T + 3 - a) / 2 + c
  auto block_slot = [T](long a, long c) { return static_cast<std::size_t>(a * (2 * T + 3 - a) / 2 + c); };

  // Phase 0: distinct w3 and (w2, w3), numbered by first appearance.
  std::vector<std::size_t> idx3(n), idx23(n);
  std::vector<std::size_t> rep3, rep23, parent3;
  {
    std::unordered_map<std::string, std::size_t> map3, map23;
    for (std::size_t i = 0; i < n; ++i) {
      std::string k3 = points[i].z3.key();
      auto [it3, new3] = map3.emplace(k3, rep3.size());
      if (new3) rep3.push_back(i);
      idx3[i] = it3->second;
      auto [it23, new23] = map23.emplace(points[i].z2.key() + "|" + k3, rep23.size());
      if (new23) {
        rep23.push_back(i);
        parent3.push_back(it3->second);
      }
      idx23[i] = it23->second;
    }
  }
  if (stats != nullptr) *stats = {n, rep3.size(), rep23.size()};

  // Phase 1: inner Laurent polynomials per distinct q3.
  const std::size_t ng = gens.size();
  std::vector<std::vector<ComplexBall>> inner(rep3.size() * ng);
  {
    std::vector<std::optional<Q3Powers>> powers(rep3.size());
    const long m3 = static_cast<long>(rep3.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long j = 0; j < m3; ++j) powers[j].emplace(points[rep3[j]].z3, max_b, prec);
    const long jobs = m3 * static_cast<long>(ng);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long job = 0; job < jobs; ++job) {
      std::size_t j = static_cast<std::size_t>(job) / ng, gi = static_cast<std::size_t>(job) % ng;
      const NumericSeries& f = *series[gens[gi]];
      std::vector<ComplexBall> vals(nblocks, ComplexBall(prec));
      ComplexBall scratch(prec);
      for (long a = 0; a <= T; ++a) {
        for (long c = 0; a + c <= T; ++c) eval_inner(vals[block_slot(a, c)], f, f.block(a, c), *powers[j], scratch);
      }
      inner[job] = std::move(vals);
    }
  }

  // Phase 2: q2 Horner per distinct (w2, w3), giving R_a for a = 0..T,
  // and S_a = q2^(T-a) P_{a,T-a} for the trace-T shell.
  std::vector<std::vector<ComplexBall>> middle(rep23.size() * ng);
  std::vector<std::vector<ComplexBall>> edge(shell != nullptr ? rep23.size() * ng : 0);
  {
    const long m23 = static_cast<long>(rep23.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long k = 0; k < m23; ++k) {
      ComplexBall q2 = exp_2pi_i(points[rep23[k]].z2);
      ComplexBall tmp(prec);
      std::vector<ComplexBall> q2pow;
      if (shell != nullptr) {
        q2pow.push_back(ComplexBall::from_int(1, prec));
        for (long c = 1; c <= T; ++c) q2pow.push_back(q2pow.back() * q2);
      }
      for (std::size_t gi = 0; gi < ng; ++gi) {
        const auto& in = inner[parent3[k] * ng + gi];
        std::vector<ComplexBall> R(T + 1, ComplexBall(prec));
        for (long a = 0; a <= T; ++a) {
          for (long c = T - a; c >= 0; --c) horner_step(R[a], q2, in[block_slot(a, c)], tmp);
        }
        middle[k * ng + gi] = std::move(R);
        if (shell != nullptr) {
          std::vector<ComplexBall> S(T + 1, ComplexBall(prec));
          for (long a = 0; a <= T; ++a) mul(S[a], q2pow[T - a], in[block_slot(a, T - a)]);
          edge[k * ng + gi] = std::move(S);
        }
      }
    }
  }
  inner.clear();

  // Phase 3: q1 Horner per point.
  std::vector<GeneratorValues> out(n);
  if (shell != nullptr) shell->resize(n);
  {
    const long np = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long i = 0; i < np; ++i) {
      ComplexBall q1 = exp_2pi_i(points[i].z1);
      ComplexBall tmp(prec);
      for (std::size_t gi = 0; gi < ng; ++gi) {
        const auto& R = middle[idx23[i] * ng + gi];
        ComplexBall F(prec);
        for (long a = T; a >= 0; --a) horner_step(F, q1, R[a], tmp);
        out[i][gens[gi]] = std::move(F);
        if (shell != nullptr) {
          const auto& S = edge[idx23[i] * ng + gi];
          ComplexBall E(prec);
          for (long a = T; a >= 0; --a) horner_step(E, q1, S[a], tmp);
          (*shell)[i][gens[gi]] = std::move(E);
        }
      }
    }
  }
  return out;
}

}  // namespace siegel
