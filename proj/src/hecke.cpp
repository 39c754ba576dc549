#include "siegel/hecke.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace siegel {

Mat4 mat_mul(const Mat4& x, const Mat4& y) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      long s = 0;
      for (int k = 0; k < 4; ++k) s += x[i][k] * y[k][j];
      out[i][j] = s;
    }
  }
  return out;
}

Mat4 mat_transpose(const Mat4& x) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i][j] = x[j][i];
  }
  return out;
}

const Mat4& symplectic_j() {
  static const Mat4 J = {{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}};
  return J;
}

std::optional<long> similitude_of(const Mat4& M) {
  const Mat4& J = symplectic_j();
  Mat4 g = mat_mul(mat_mul(mat_transpose(M), J), M);
  long lambda = g[0][2];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (g[i][j] != lambda * J[i][j]) return std::nullopt;
    }
  }
  return lambda;
}

Mat4 row_hnf(const Mat4& M) {
  Mat4 h = M;
  int row = 0;
  for (int col = 0; col < 4 && row < 4; ++col) {
    // Euclid on the column below `row` until a single nonzero entry remains.
    while (true) {
      int pivot = -1;
      for (int r = row; r < 4; ++r) {
        if (h[r][col] != 0 && (pivot < 0 || std::labs(h[r][col]) < std::labs(h[pivot][col]))) pivot = r;
      }
      if (pivot < 0) break;
      std::swap(h[row], h[pivot]);
      bool done = true;
      for (int r = row + 1; r < 4; ++r) {
        if (h[r][col] == 0) continue;
        long q = h[r][col] / h[row][col];
        for (int c = 0; c < 4; ++c) h[r][c] -= q * h[row][c];
        if (h[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (h[row][col] == 0) continue;
    if (h[row][col] < 0) {
      for (int c = 0; c < 4; ++c) h[row][c] = -h[row][c];
    }
    for (int r = 0; r < row; ++r) {
      long q = h[r][col] / h[row][col];
      if (h[r][col] - q * h[row][col] < 0) --q;
      for (int c = 0; c < 4; ++c) h[r][c] -= q * h[row][c];
    }
    ++row;
  }
  return h;
}

namespace {

long det_sub(const Mat4& M, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::size_t k = rows.size();
  if (k == 1) return M[rows[0]][cols[0]];
  long s = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<int> r(rows.begin() + 1, rows.end()), c;
    for (std::size_t t = 0; t < k; ++t) {
      if (t != j) c.push_back(cols[t]);
    }
    long term = M[rows[0]][cols[j]] * det_sub(M, r, c);
    s += (j % 2 == 0) ? term : -term;
  }
  return s;
}

void subsets(int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < 4; ++i) {
    cur.push_back(i);
    subsets(k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::array<long, 4> determinantal_divisors(const Mat4& M) {
  std::array<long, 4> out{};
  for (int k = 1; k <= 4; ++k) {
    std::vector<std::vector<int>> sets;
    std::vector<int> cur;
    subsets(k, 0, cur, sets);
    long g = 0;
    for (const auto& r : sets) {
      for (const auto& c : sets) g = std::gcd(g, std::labs(det_sub(M, r, c)));
    }
    out[k - 1] = g;
  }
  return out;
}

std::string op_name(HeckeOp op) { return op == HeckeOp::Tp ? "tp" : "tp2_1"; }

std::optional<HeckeOp> parse_op(const std::string& name) {
  if (name == "tp") return HeckeOp::Tp;
  if (name == "tp2_1") return HeckeOp::Tp2_1;
  return std::nullopt;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::vector<CosetRep> tp_reps(long p) {
  if (!is_prime(p)) throw std::invalid_argument("tp_reps: p must be prime");
  std::vector<CosetRep> out;
  out.push_back({{{{p, 0, 0, 0}, {0, p, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}}, p});
  for (long a = 0; a < p; ++a) {
    for (long b = 0; b < p; ++b) {
      for (long c = 0; c < p; ++c) out.push_back({{{{1, 0, a, b}, {0, 1, b, c}, {0, 0, p, 0}, {0, 0, 0, p}}}, p});
    }
  }
  for (long a = 0; a < p; ++a) out.push_back({{{{0, -p, 0, 0}, {1, 0, a, 0}, {0, 0, 0, -1}, {0, 0, p, 0}}}, p});
  for (long a = 0; a < p; ++a) {
    for (long m = 0; m < p; ++m) out.push_back({{{{p, 0, 0, 0}, {-m, 1, 0, a}, {0, 0, 1, m}, {0, 0, 0, p}}}, p});
  }
  return out;
}

std::vector<CosetRep> tp2_1_reps(long p) {
  if (!is_prime(p)) throw std::invalid_argument("tp2_1_reps: p must be prime");
  long p2 = p * p;
  std::vector<CosetRep> out;
  for (long al = 0; al < p; ++al) {
    out.push_back({{{{p2, 0, 0, 0}, {-p * al, p, 0, 0}, {0, 0, 1, al}, {0, 0, 0, p}}}, p2});
  }
  out.push_back({{{{p, 0, 0, 0}, {0, p2, 0, 0}, {0, 0, p, 0}, {0, 0, 0, 1}}}, p2});
  for (long a = 0; a < p; ++a) {
    for (long b = 0; b < p; ++b) {
      for (long c = 0; c < p; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        if ((a * c - b * b) % p != 0) continue;
        out.push_back({{{{p, 0, a, b}, {0, p, b, c}, {0, 0, p, 0}, {0, 0, 0, p}}}, p2});
      }
    }
  }
  for (long al = 0; al < p; ++al) {
    for (long be = 0; be < p; ++be) {
      for (long C = 0; C < p2; ++C) {
        out.push_back({{{{p, 0, 0, p * be}, {-al, 1, be, al * be + C}, {0, 0, p, p * al}, {0, 0, 0, p2}}}, p2});
      }
    }
  }
  for (long be = 0; be < p; ++be) {
    for (long A = 0; A < p2; ++A) {
      out.push_back({{{{1, 0, A, be}, {0, p, p * be, 0}, {0, 0, p2, 0}, {0, 0, 0, p}}}, p2});
    }
  }
  return out;
}

std::vector<CosetRep> coset_reps(HeckeOp op, long p) { return op == HeckeOp::Tp ? tp_reps(p) : tp2_1_reps(p); }

std::vector<std::size_t> conjugate_partners(const std::vector<CosetRep>& reps) {
  std::map<Mat4, std::size_t> index;
  for (std::size_t i = 0; i < reps.size(); ++i) index.emplace(row_hnf(reps[i].m), i);
  std::vector<std::size_t> out(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    Mat4 m = reps[i].m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if ((r < 2) != (c < 2)) m[r][c] = -m[r][c];
      }
    }
    auto it = index.find(row_hnf(m));
    if (it == index.end()) throw std::logic_error("coset list is not closed under conjugation by diag(1,1,-1,-1)");
    out[i] = it->second;
  }
  return out;
}

std::string format_rep(const CosetRep& rep) {
  std::ostringstream out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out << (i + j ? " " : "") << rep.m[i][j];
  }
  return out.str();
}

namespace {

using CMat2 = std::array<std::array<ComplexBall, 2>, 2>;

CMat2 z_matrix(const EvalPoint& Z) { return {{{Z.z1, Z.z3}, {Z.z3, Z.z2}}}; }

// X Z + Y for integer 2x2 blocks X, Y.
CMat2 affine(const Mat4& M, int r0, int c0, const CMat2& Zm, Precision prec) {
  CMat2 out{{{ComplexBall(prec), ComplexBall(prec)}, {ComplexBall(prec), ComplexBall(prec)}}};
  ComplexBall t(prec);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ComplexBall& o = out[i][j];
      o = ComplexBall::from_int(M[r0 + i][c0 + 2 + j], prec);
      for (int k = 0; k < 2; ++k) {
        long x = M[r0 + i][c0 + k];
        if (x == 0) continue;
        mul_si(t, Zm[k][j], x);
        add(o, o, t);
      }
    }
  }
  return out;
}

void intersect_into(ComplexBall& out, const ComplexBall& a, const ComplexBall& b) {
  intersect(out.re(), a.re(), b.re());
  intersect(out.im(), a.im(), b.im());
}

}  // namespace

PointImage act_on_point(const CosetRep& rep, const EvalPoint& Z) {
  Precision prec = Z.prec();
  const Mat4& M = rep.m;
  CMat2 Zm = z_matrix(Z);
  CMat2 P = affine(M, 0, 0, Zm, prec);  // AZ + B
  bool c_zero = M[2][0] == 0 && M[2][1] == 0 && M[3][0] == 0 && M[3][1] == 0;
  PointImage out{EvalPoint{ComplexBall(prec), ComplexBall(prec), ComplexBall(prec)}, ComplexBall(prec)};
  CMat2 W{{{ComplexBall(prec), ComplexBall(prec)}, {ComplexBall(prec), ComplexBall(prec)}}};
  if (c_zero) {
    // W = P adj(D) / det D with exact integers
    long d11 = M[2][2], d12 = M[2][3], d21 = M[3][2], d22 = M[3][3];
    long det = d11 * d22 - d12 * d21;
    if (det == 0) throw CertificationError("singular D block");
    long adj[2][2] = {{d22, -d12}, {-d21, d11}};
    ComplexBall t(prec);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        W[i][j].zero();
        for (int k = 0; k < 2; ++k) {
          if (adj[k][j] == 0) continue;
          mul_si(t, P[i][k], adj[k][j]);
          add(W[i][j], W[i][j], t);
        }
        div_si(W[i][j].re(), W[i][j].re(), det);
        div_si(W[i][j].im(), W[i][j].im(), det);
      }
    }
    out.det = ComplexBall::from_int(det, prec);
  } else {
    CMat2 Q = affine(M, 2, 0, Zm, prec);  // CZ + D
    ComplexBall det = Q[0][0] * Q[1][1] - Q[0][1] * Q[1][0];
    if (det.contains_zero()) throw CertificationError("cannot certify that CZ + D is invertible");
    CMat2 adj{{{Q[1][1], -Q[0][1]}, {-Q[1][0], Q[0][0]}}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) W[i][j] = (P[i][0] * adj[0][j] + P[i][1] * adj[1][j]) / det;
    }
    out.det = det;
  }
  out.w.z1 = W[0][0];
  out.w.z2 = W[1][1];
  intersect_into(out.w.z3, W[0][1], W[1][0]);
  if (!out.w.is_valid()) throw CertificationError("cannot certify that M<Z> lies in the upper half-space");
  return out;
}

}  // namespace siegel
