#include "siegel/eigenform.hpp"

#include "siegel/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace siegel {

namespace {

using nlohmann::json;

constexpr Precision kIsolationPrec = 192;

mpq_class json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return mpq_class(v.dump());
  throw EigenformError("expected a rational as a \"num/den\" string or an integer");
}

std::string rational_text(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return format_rational(q);
}

ComplexBall horner(const std::vector<mpz_class>& poly, const ComplexBall& x, Precision prec) {
  ComplexBall acc(prec), t(prec);
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    mul(t, acc, x);
    add(acc, t, ComplexBall(Ball::from_mpz(*it, prec), Ball(prec)));
  }
  return acc;
}

ComplexBall horner_derivative(const std::vector<mpz_class>& poly, const ComplexBall& x, Precision prec) {
  ComplexBall acc(prec), t(prec);
  for (std::size_t i = poly.size(); i-- > 1;) {
    mul(t, acc, x);
    mpz_class c = poly[i] * static_cast<long>(i);
    add(acc, t, ComplexBall(Ball::from_mpz(c, prec), Ball(prec)));
  }
  return acc;
}

Ball interval(const mpq_class& lo, const mpq_class& hi, Precision prec) {
  mpfr_t l, h;
  mpfr_init2(l, prec);
  mpfr_init2(h, prec);
  mpfr_set_q(l, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(h, hi.get_mpq_t(), MPFR_RNDU);
  Ball b = Ball::from_endpoints(l, h, prec);
  mpfr_clear(l);
  mpfr_clear(h);
  return b;
}

ComplexBall midpoint(const ComplexBall& x) {
  ComplexBall m = x;
  m.re().set_rad(Mag());
  m.im().set_rad(Mag());
  return m;
}

// Krawczyk operator m - Y f(m) + (1 - Y f'(B)) (B - m).
ComplexBall krawczyk(const std::vector<mpz_class>& poly, const ComplexBall& B, Precision prec) {
  ComplexBall m = midpoint(B);
  ComplexBall dm = horner_derivative(poly, m, prec);
  if (dm.contains_zero()) throw EigenformError("root isolation: derivative vanishes at the box center");
  ComplexBall Y = midpoint(ComplexBall::from_int(1, prec) / dm);
  ComplexBall one_minus = ComplexBall::from_int(1, prec) - Y * horner_derivative(poly, B, prec);
  return m - Y * horner(poly, m, prec) + one_minus * (B - m);
}

// Strict containment of a inside b, componentwise.
bool strictly_inside(const Ball& a, const Ball& b, Precision prec) {
  mpfr_t al, ah, bl, bh;
  for (auto* v : {&al, &ah, &bl, &bh}) mpfr_init2(*v, prec + 64);
  a.lower(al);
  a.upper(ah);
  b.lower(bl);
  b.upper(bh);
  bool ok = mpfr_greater_p(al, bl) && mpfr_less_p(ah, bh);
  for (auto* v : {&al, &ah, &bl, &bh}) mpfr_clear(*v);
  return ok;
}

bool strictly_inside(const ComplexBall& a, const ComplexBall& b, Precision prec) {
  return strictly_inside(a.re(), b.re(), prec) && strictly_inside(a.im(), b.im(), prec);
}

bool disjoint(const ComplexBall& a, const ComplexBall& b) { return !a.overlaps(b); }

// A box with im = [0, 0] marks a real root; it is widened symmetrically,
// which keeps uniqueness meaningful since roots come in conjugate pairs.
ComplexBall root_box(const NumberField& f, Precision prec) {
  if (f.im[0] == 0 && f.im[1] == 0) {
    mpq_class w = (f.re[1] - f.re[0]) / 2;
    return ComplexBall(interval(f.re[0], f.re[1], prec), interval(-w, w, prec));
  }
  return ComplexBall(interval(f.re[0], f.re[1], prec), interval(f.im[0], f.im[1], prec));
}

void validate_field(const NumberField& f) {
  if (f.poly.size() < 2) throw EigenformError("defining polynomial must have degree at least 1");
  if (f.poly.back() == 0) throw EigenformError("defining polynomial has a zero leading coefficient");
  if (f.re[0] >= f.re[1] || f.im[0] > f.im[1]) throw EigenformError("root box has an empty interval");
  if (f.im[0] == f.im[1] && f.im[0] != 0) throw EigenformError("root box has a degenerate imaginary interval");
}

EigenformSpec make(const std::string& name, long weight,
                   std::vector<std::pair<long, std::array<int, 4>>> terms) {
  EigenformSpec s;
  s.name = name;
  s.weight = weight;
  for (auto& [c, e] : terms) s.terms.push_back({{mpq_class(c)}, e});
  return s;
}

}  // namespace

RootCount isolate_root(const NumberField& field, Precision prec) {
  validate_field(field);
  ComplexBall B = root_box(field, prec);
  ComplexBall K(prec);
  try {
    K = krawczyk(field.poly, B, prec);
  } catch (const EigenformError&) {
    return RootCount::Unknown;
  } catch (const CertificationError&) {
    return RootCount::Unknown;
  }
  if (disjoint(K, B)) return RootCount::None;
  if (strictly_inside(K, B, prec)) return RootCount::Unique;
  return RootCount::Unknown;
}

ComplexBall refine_root(const NumberField& field, Precision prec) {
  if (isolate_root(field, kIsolationPrec) != RootCount::Unique) {
    throw EigenformError("root box does not isolate a unique root");
  }
  Precision wp = prec + 64;
  ComplexBall outer = root_box(field, wp);
  ComplexBall x = midpoint(outer);
  for (int it = 0; it < 4 * static_cast<int>(wp); ++it) {
    ComplexBall step = midpoint(horner(field.poly, x, wp) / horner_derivative(field.poly, x, wp));
    x = midpoint(x - step);
    Mag scale = x.abs_upper() + Mag::from_double(1);
    if (step.abs_upper() < Mag::pow2(-static_cast<std::int64_t>(wp) + 8) * scale) break;
  }
  Mag scale = x.abs_upper() < Mag::from_double(1) ? Mag::from_double(1) : x.abs_upper();
  Mag r = Mag::pow2(-static_cast<std::int64_t>(prec) - 1) * scale;
  for (int attempt = 0; attempt < 16; ++attempt, r = r * Mag::pow2(4)) {
    ComplexBall Bp = x;
    Bp.re().set_rad(r);
    Bp.im().set_rad(r);
    if (!outer.contains(Bp)) break;
    ComplexBall K = krawczyk(field.poly, Bp, wp);
    if (strictly_inside(K, Bp, wp)) {
      K.set_prec(prec);
      return K;
    }
  }
  throw EigenformError("interval Newton failed to contract around the root");
}

void validate(const EigenformSpec& spec) {
  if (spec.terms.empty()) throw EigenformError("eigenform has no terms");
  long maxlen = 1;
  if (spec.field) {
    validate_field(*spec.field);
    maxlen = spec.field->degree();
  }
  std::set<std::array<int, 4>> seen;
  for (const auto& t : spec.terms) {
    for (int e : t.expo) {
      if (e < 0) throw EigenformError("negative exponent in term");
    }
    if (t.weight() != spec.weight) {
      throw EigenformError("term of weight " + std::to_string(t.weight()) + " in a form of weight " +
                           std::to_string(spec.weight));
    }
    if (t.coeff.empty() || static_cast<long>(t.coeff.size()) > maxlen) {
      throw EigenformError("coefficient length does not fit the field degree");
    }
    if (!seen.insert(t.expo).second) throw EigenformError("repeated monomial");
  }
  if (spec.field) {
    RootCount c = isolate_root(*spec.field, kIsolationPrec);
    if (c == RootCount::None) throw EigenformError("root box contains no root");
    if (c == RootCount::Unknown) throw EigenformError("root box does not isolate a unique root");
  }
}

EigenformSpec parse_eigenform(const std::string& json_text) {
  EigenformSpec s;
  try {
    json doc = json::parse(json_text);
    s.name = doc.at("name").get<std::string>();
    s.weight = doc.at("weight").get<long>();
    if (doc.contains("field") && !doc["field"].is_null()) {
      const json& f = doc["field"];
      NumberField nf;
      for (const auto& c : f.at("poly")) {
        mpq_class q = json_rational(c);
        if (q.get_den() != 1) throw EigenformError("defining polynomial must have integer coefficients");
        nf.poly.push_back(q.get_num());
      }
      const json& root = f.at("root");
      for (int i = 0; i < 2; ++i) {
        nf.re[i] = json_rational(root.at("re").at(i));
        nf.im[i] = json_rational(root.at("im").at(i));
      }
      s.field = std::move(nf);
    }
    for (const auto& t : doc.at("terms")) {
      FormTerm term;
      for (const auto& c : t.at("coeff")) term.coeff.push_back(json_rational(c));
      const json& e = t.at("expo");
      if (e.size() != 4) throw EigenformError("expo must have four entries");
      for (int i = 0; i < 4; ++i) term.expo[i] = e.at(i).get<int>();
      s.terms.push_back(std::move(term));
    }
  } catch (const json::exception& e) {
    throw EigenformError(std::string("malformed eigenform document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw EigenformError(std::string("malformed eigenform document: ") + e.what());
  }
  validate(s);
  return s;
}

std::string serialize_eigenform(const EigenformSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["weight"] = spec.weight;
  if (spec.field) {
    json f;
    f["poly"] = json::array();
    for (const auto& c : spec.field->poly) f["poly"].push_back(c.get_str());
    f["root"]["re"] = {rational_text(spec.field->re[0]), rational_text(spec.field->re[1])};
    f["root"]["im"] = {rational_text(spec.field->im[0]), rational_text(spec.field->im[1])};
    doc["field"] = f;
  } else {
    doc["field"] = nullptr;
  }
  doc["terms"] = json::array();
  for (const auto& t : spec.terms) {
    json jt;
    jt["coeff"] = json::array();
    for (const auto& c : t.coeff) jt["coeff"].push_back(rational_text(c));
    jt["expo"] = t.expo;
    doc["terms"].push_back(jt);
  }
  return doc.dump(2) + "\n";
}

EigenformSpec load_eigenform(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EigenformError("cannot open eigenform file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_eigenform(ss.str());
}

std::vector<ComplexBall> embed_algebraic(const EigenformSpec& spec, Precision prec) {
  std::vector<ComplexBall> out;
  out.reserve(spec.terms.size());
  if (!spec.field) {
    for (const auto& t : spec.terms) out.push_back(ComplexBall::from_mpq(t.coeff.at(0), prec));
    return out;
  }
  ComplexBall theta = refine_root(*spec.field, prec + 16);
  for (const auto& t : spec.terms) {
    ComplexBall acc(prec + 16), tmp(prec + 16);
    for (auto it = t.coeff.rbegin(); it != t.coeff.rend(); ++it) {
      mul(tmp, acc, theta);
      add(acc, tmp, ComplexBall::from_mpq(*it, prec + 16));
    }
    acc.set_prec(prec);
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<EigenformSpec> builtin_catalog() {
  return {
      make("ups20", 20, {{-1, {2, 0, 0, 1}}, {-1, {1, 1, 1, 0}}, {1785600, {0, 0, 2, 0}}}),
      make("ups22", 22,
           {{61, {3, 0, 1, 0}}, {-30, {1, 1, 0, 1}}, {5, {0, 2, 1, 0}}, {-80870400, {0, 0, 1, 1}}}),
      make("ups24a", 24,
           {{-67, {3, 0, 0, 1}},
            {78, {2, 1, 1, 0}},
            {-274492800, {1, 0, 2, 0}},
            {25, {0, 2, 0, 1}},
            {71539200, {0, 0, 0, 2}}}),
      make("ups24b", 24,
           {{70, {3, 0, 0, 1}},
            {-69, {2, 1, 1, 0}},
            {-214341120, {1, 0, 2, 0}},
            {53, {0, 2, 0, 1}},
            {-137604096, {0, 0, 0, 2}}}),
      make("ups26a", 26,
           {{-22, {4, 0, 1, 0}},
            {-3, {2, 1, 0, 1}},
            {31, {1, 2, 1, 0}},
            {-96609024, {1, 0, 1, 1}},
            {-13806720, {0, 1, 2, 0}}}),
      make("ups26b", 26,
           {{973, {4, 0, 1, 0}},
            {390, {2, 1, 0, 1}},
            {-1255, {1, 2, 1, 0}},
            {3927813120L, {1, 0, 1, 1}},
            {-4438886400L, {0, 1, 2, 0}}}),
      make("E4", 4, {{1, {1, 0, 0, 0}}}),
      make("E6", 6, {{1, {0, 1, 0, 0}}}),
      make("chi10", 10, {{1, {0, 0, 1, 0}}}),
      make("chi12", 12, {{1, {0, 0, 0, 1}}}),
  };
}

EigenformSpec builtin_form(const std::string& name) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  for (auto& f : builtin_catalog()) {
    if (lower(f.name) == lower(name)) return f;
  }
  throw EigenformError("unknown builtin form " + name);
}

}  // namespace siegel
