#include "siegel/eigenform.hpp"
#include "siegel/engine.hpp"
#include "siegel/hecke.hpp"
#include "siegel/igusa.hpp"
#include "siegel/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

using namespace siegel;

namespace {

constexpr int kExitCertification = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string form = "ups20";
  std::string form_file;
  long prime = 2;
  std::string op = "tp";
  double digits = 3;
  long precision_bits = 0;
  std::string y11;
  long trace_bound = -1;
  std::string mode = "rigorous";
  int threads = 1;
  std::string cache_dir;
  std::string symmetry = "off";
  long trace = 0;
  std::string out;
  int bench_threads = 8;
};

std::optional<std::filesystem::path> cache_path(const Options& o) {
  if (!o.cache_dir.empty()) return std::filesystem::path(o.cache_dir);
  if (const char* env = std::getenv("SIEGEL_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

EigenformSpec load_form(const Options& o) {
  try {
    if (!o.form_file.empty()) return load_eigenform(o.form_file);
    return builtin_form(o.form);
  } catch (const EigenformError& e) {
    throw UsageError(e.what());
  }
}

EngineConfig engine_config(const Options& o, int threads) {
  EngineConfig cfg;
  cfg.threads = threads;
  cfg.mode = parse_mode(o.mode);
  cfg.symmetry = o.symmetry == "on";
  if (o.trace_bound >= 0) cfg.trace_bound = o.trace_bound;
  return cfg;
}

void check_prime(long p) {
  if (!is_prime(p)) throw UsageError("--prime must be a prime");
}

int digits_for(const ComplexBall& x) {
  double lg = static_cast<double>(x.abs_upper().exponent()) * std::log10(2.0);
  return std::max(20, static_cast<int>(lg) + 12);
}

std::string format_mag(const Mag& m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", m.to_double());
  return buf;
}

void print_result(const EigenvalueResult& r) {
  std::cout << "form: " << r.form << "\n"
            << "operator: " << op_name(r.op) << "\n"
            << "prime: " << r.prime << "\n"
            << "mode: " << mode_name(r.mode) << "\n"
            << "y11: " << r.y11 << "\n"
            << "raw: " << r.raw.to_string(20) << "\n"
            << "normalized: " << r.normalized.to_string(digits_for(r.normalized)) << "\n"
            << "snapped: " << (r.snapped ? r.snapped->get_str() : std::string("none")) << "\n"
            << "nearest: " << (r.nearest ? r.nearest->get_str() : std::string("none")) << "\n";
  if (r.truncation_change) {
    std::cout << "truncation_change: " << format_mag(*r.truncation_change) << "\n";
  }
  std::cout << timing_line(r) << "\n";
}

int cmd_eigenvalue(const Options& o) {
  check_prime(o.prime);
  EigenformSpec spec = load_form(o);
  GeneratorCache cache(cache_path(o));
  Engine engine(cache, engine_config(o, o.threads));
  std::optional<std::string> y11;
  if (!o.y11.empty()) y11 = o.y11;
  std::optional<Precision> prec;
  if (o.precision_bits > 0) prec = o.precision_bits;
  if (o.op == "tp2") {
    Tp2Result r = engine.eigenvalue_tp2(spec, o.prime, o.digits, y11, prec);
    print_result(r.tp);
    print_result(r.tp2_1);
    std::cout << "operator: tp2\n"
              << "lambda_p2: " << r.lambda.to_string(digits_for(r.lambda)) << "\n"
              << "snapped: " << (r.snapped ? r.snapped->get_str() : std::string("none")) << "\n";
    return 0;
  }
  auto op = parse_op(o.op);
  if (!op) throw UsageError("--operator must be tp, tp2_1 or tp2");
  print_result(engine.eigenvalue(spec, o.prime, *op, o.digits, y11, prec));
  return 0;
}

int cmd_expand(const Options& o) {
  if (o.trace < 0) throw UsageError("--trace must be nonnegative");
  std::optional<std::filesystem::path> dir;
  if (!o.out.empty()) {
    dir = std::filesystem::path(o.out);
  } else {
    dir = cache_path(o);
  }
  if (!dir) throw UsageError("expand-generators needs --out, --cache-dir or SIEGEL_CACHE_DIR");
  GeneratorCache cache(dir);
  int written = cache.materialize(o.trace);
  std::cout << "trace bound " << o.trace << ": " << written << " file(s) written to " << dir->string() << "\n";
  return 0;
}

int cmd_list(const Options& o) {
  check_prime(o.prime);
  auto op = parse_op(o.op);
  if (!op) throw UsageError("--operator must be tp or tp2_1");
  for (const auto& r : coset_reps(*op, o.prime)) std::cout << format_rep(r) << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  GeneratorCache cache(cache_path(o));
  bool all = true;
  for (const auto& c : run_invariant_suite(cache, o.threads)) {
    std::cout << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.ok) std::cout << ": " << c.detail;
    std::cout << "\n";
    all = all && c.ok;
  }
  return all ? 0 : kExitCertification;
}

int cmd_bench(const Options& o) {
  check_prime(o.prime);
  EigenformSpec spec = load_form(o);
  auto op = parse_op(o.op);
  if (!op) throw UsageError("bench supports --operator tp or tp2_1");
  GeneratorCache cache(cache_path(o));
  std::optional<std::string> y11;
  if (!o.y11.empty()) y11 = o.y11;
  std::optional<Precision> prec;
  if (o.precision_bits > 0) prec = o.precision_bits;
  // warm the generator cache so neither run pays for expansion
  {
    Engine warm(cache, engine_config(o, o.bench_threads));
    warm.eigenvalue(spec, o.prime, *op, o.digits, y11, prec);
  }
  Engine serial(cache, engine_config(o, 1));
  EigenvalueResult a = serial.eigenvalue(spec, o.prime, *op, o.digits, y11, prec);
  Engine parallel(cache, engine_config(o, o.bench_threads));
  EigenvalueResult b = parallel.eigenvalue(spec, o.prime, *op, o.digits, y11, prec);
  bool same = a.raw.key() == b.raw.key() && a.normalized.key() == b.normalized.key();
  std::cout << "threads=1 " << timing_line(a) << "\n"
            << "threads=" << o.bench_threads << " " << timing_line(b) << "\n"
            << "speedup=" << a.wall_ms / std::max(b.wall_ms, 1e-3) << " identical=" << (same ? "yes" : "no")
            << " snapped=" << (b.snapped ? b.snapped->get_str() : std::string("none")) << "\n";
  return same ? 0 : kExitCertification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hecke eigenvalues of degree 2 Siegel eigenforms by certified evaluation"};
  app.require_subcommand(1);
  Options o;

  auto add_form = [&](CLI::App* c) {
    c->add_option("--form", o.form, "builtin form name (ups20, ups22, ups24a, ups24b, ups26a, ups26b, E4, E6, chi10, chi12)");
    c->add_option("--form-file", o.form_file, "eigenform JSON document");
  };
  auto add_engine = [&](CLI::App* c) {
    c->add_option("--prime", o.prime, "prime p")->required();
    c->add_option("--operator,--op", o.op, "tp, tp2_1 or tp2");
    c->add_option("--digits", o.digits, "decimal digits after the point for the normalized eigenvalue");
    c->add_option("--precision-bits", o.precision_bits, "starting working precision");
    c->add_option("--y11", o.y11, "evaluation point parameter");
    c->add_option("--trace-bound", o.trace_bound, "uniform trace bound in heuristic mode");
    c->add_option("--mode", o.mode, "rigorous or heuristic")->check(CLI::IsMember({"rigorous", "heuristic"}));
    c->add_option("--symmetry", o.symmetry, "conjugate pairing of cosets")->check(CLI::IsMember({"on", "off"}));
  };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--cache-dir", o.cache_dir, "generator cache directory (default $SIEGEL_CACHE_DIR)");
  };

  auto* eig = app.add_subcommand("eigenvalue", "certified Hecke eigenvalue");
  add_form(eig);
  add_engine(eig);
  add_common(eig);

  auto* exp = app.add_subcommand("expand-generators", "write generator expansions to a cache directory");
  exp->add_option("--trace", o.trace, "trace bound")->required();
  exp->add_option("--out", o.out, "cache directory");
  add_common(exp);

  auto* lst = app.add_subcommand("list-cosets", "print coset representatives, one per line");
  lst->add_option("--operator,--op", o.op, "tp or tp2_1");
  lst->add_option("--prime", o.prime, "prime p")->required();

  auto* ver = app.add_subcommand("verify", "run the invariant suite");
  add_common(ver);

  auto* ben = app.add_subcommand("bench", "time one eigenvalue serially and in parallel");
  add_form(ben);
  add_engine(ben);
  add_common(ben);
  ben->add_option("--parallel-threads", o.bench_threads, "thread count of the parallel run")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eig) return cmd_eigenvalue(o);
    if (*exp) return cmd_expand(o);
    if (*lst) return cmd_list(o);
    if (*ver) return cmd_verify(o);
    if (*ben) return cmd_bench(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return kExitCertification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCertification;
  }
  return kExitUsage;
}
