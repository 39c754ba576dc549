#include "siegel/igusa.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numeric>
#include <sstream>

namespace siegel {

namespace fs = std::filesystem;

int generator_weight(GeneratorId id) {
  switch (id) {
    case GeneratorId::E4: return 4;
    case GeneratorId::E6: return 6;
    case GeneratorId::Chi10: return 10;
    case GeneratorId::Chi12: return 12;
  }
  return 0;
}

std::string generator_name(GeneratorId id) {
  switch (id) {
    case GeneratorId::E4: return "E4";
    case GeneratorId::E6: return "E6";
    case GeneratorId::Chi10: return "CHI10";
    case GeneratorId::Chi12: return "CHI12";
  }
  return "?";
}

std::optional<GeneratorId> parse_generator(std::string_view name) {
  for (auto id : kGenerators) {
    if (generator_name(id) == name) return id;
  }
  return std::nullopt;
}

const mpq_class& JacobiTable::at(long D) const {
  if (D < 0 || D > dmax) throw std::out_of_range("Jacobi table does not cover D = " + std::to_string(D));
  if (D % 4 == 1 || D % 4 == 2) throw std::out_of_range("inadmissible discriminant " + std::to_string(D));
  return values[D];
}

long lift_dmax(long T) {
  if (T <= 0) return 0;
  return T % 2 == 0 ? T * T : T * T - 1;
}

JacobiTable jacobi_eisenstein(int k, long dmax, HTable& h) {
  if (k != 4 && k != 6) throw std::invalid_argument("jacobi_eisenstein: weight must be 4 or 6");
  JacobiTable out{k, dmax, std::vector<mpq_class>(dmax + 1, 0)};
  auto r = static_cast<unsigned long>(k - 1);
  mpq_class h0 = h.get(r, 0);
  for (long D = 0; D <= dmax; ++D) {
    if (D % 4 == 1 || D % 4 == 2) continue;
    out.values[D] = h.get(r, D) / h0;
  }
  return out;
}

namespace {

std::vector<mpz_class> integral_values(const JacobiTable& t) {
  std::vector<mpz_class> out(t.values.size());
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (t.values[i].get_den() != 1) throw std::logic_error("non-integral Jacobi Eisenstein coefficient");
    out[i] = t.values[i].get_num();
  }
  return out;
}

}  // namespace

JacobiTable jacobi_cusp(int k, long dmax, HTable& h) {
  if (k != 10 && k != 12) throw std::invalid_argument("jacobi_cusp: weight must be 10 or 12");
  auto e4 = integral_values(jacobi_eisenstein(4, dmax, h));
  auto e6 = integral_values(jacobi_eisenstein(6, dmax, h));
  long nmax = dmax / 4;
  std::vector<mpz_class> g, gg;
  if (k == 10) {
    g = elliptic_e6(nmax);
    gg = elliptic_e4(nmax);
  } else {
    auto f = elliptic_e4(nmax);
    g = elliptic_mul(f, f, nmax);
    gg = elliptic_e6(nmax);
  }
  // k = 10: (E6 E_{4,1} - E4 E_{6,1}) / 144;  k = 12: (E4^2 E_{4,1} - E6 E_{6,1}) / 144
  JacobiTable out{k, dmax, std::vector<mpq_class>(dmax + 1, 0)};
  mpz_class acc;
  for (long D = 0; D <= dmax; ++D) {
    if (D % 4 == 1 || D % 4 == 2) continue;
    acc = 0;
    for (long m = 0; 4 * m <= D; ++m) {
      mpz_addmul(acc.get_mpz_t(), g[m].get_mpz_t(), e4[D - 4 * m].get_mpz_t());
      mpz_submul(acc.get_mpz_t(), gg[m].get_mpz_t(), e6[D - 4 * m].get_mpz_t());
    }
    out.values[D] = mpq_class(acc, 144);
    out.values[D].canonicalize();
  }
  return out;
}

namespace {

TruncatedSeries maass_lift_from(int k, const JacobiTable& jc, bool eisenstein, long T, const TruncatedSeries* prefix) {
  if (jc.dmax < lift_dmax(T)) throw std::invalid_argument("Jacobi table does not reach the needed discriminant");
  long start = 0;
  std::vector<SeriesTerm> terms;
  if (prefix != nullptr && prefix->trace_bound() < T) {
    terms = prefix->terms();
    start = prefix->trace_bound() + 1;
  }
  std::vector<FourierIndex> todo;
  for (long t = start; t <= T; ++t) {
    auto idx = enumerate_indices(t);
    todo.insert(todo.end(), idx.begin(), idx.end());
  }
  mpq_class scale = 1;
  if (eisenstein) scale = 2 / zeta_one_minus(static_cast<unsigned long>(k));
  std::vector<mpq_class> coeffs(todo.size());
  long n = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < n; ++i) {
    const auto& N = todo[i];
    if (N.a == 0 && N.b == 0 && N.c == 0) {
      coeffs[i] = eisenstein ? 1 : 0;
      continue;
    }
    long g = N.content();
    long D = N.disc();
    mpq_class sum = 0;
    mpz_class pw;
    for (long d = 1; d <= g; ++d) {
      if (g % d != 0) continue;
      mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
      sum += pw * jc.at(D / (d * d));
    }
    coeffs[i] = sum * scale;
  }
  terms.reserve(terms.size() + todo.size());
  for (std::size_t i = 0; i < todo.size(); ++i) terms.push_back({todo[i], std::move(coeffs[i])});
  return TruncatedSeries(k, T, std::move(terms));
}

}  // namespace

TruncatedSeries maass_lift(int k, const JacobiTable& jc, bool eisenstein, long T) {
  return maass_lift_from(k, jc, eisenstein, T, nullptr);
}

namespace {

TruncatedSeries build_generator(GeneratorId id, long T, HTable& h, const TruncatedSeries* prefix) {
  int k = generator_weight(id);
  long dmax = lift_dmax(T);
  bool eisenstein = id == GeneratorId::E4 || id == GeneratorId::E6;
  JacobiTable jc = eisenstein ? jacobi_eisenstein(k, dmax, h) : jacobi_cusp(k, dmax, h);
  return maass_lift_from(k, jc, eisenstein, T, prefix);
}

}  // namespace

TruncatedSeries igusa_generator(GeneratorId id, long T, HTable& h) { return build_generator(id, T, h, nullptr); }

std::uint32_t file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheCorruptionError("cannot read cache file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kHTableFile = "cohenh.txt";

std::string hex32(std::uint32_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(8) << std::setfill('0') << v;
  return ss.str();
}

void write_atomically(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

GeneratorCache::GeneratorCache(std::optional<fs::path> dir) : dir_(std::move(dir)) {
  if (dir_) {
    fs::create_directories(*dir_);
    load_manifest();
    load_htable();
  }
}

void GeneratorCache::load_manifest() {
  fs::path path = *dir_ / kManifest;
  if (!fs::exists(path)) return;
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line) || line != "SIEGELCACHE 1") throw CacheCorruptionError("bad manifest header in " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "series") {
      std::string name, crc, file;
      long T;
      if (!(ss >> name >> T >> crc >> file)) throw CacheCorruptionError("bad manifest line: " + line);
      auto id = parse_generator(name);
      if (!id) throw CacheCorruptionError("unknown generator in manifest: " + name);
      manifest_[*id].push_back({T, file, static_cast<std::uint32_t>(std::stoul(crc, nullptr, 16))});
    } else if (kind == "htable") {
      std::string crc, file;
      if (!(ss >> crc >> file)) throw CacheCorruptionError("bad manifest line: " + line);
      htable_crc_ = static_cast<std::uint32_t>(std::stoul(crc, nullptr, 16));
    } else if (kind != "hextent") {
      throw CacheCorruptionError("bad manifest line: " + line);
    }
  }
  for (auto& [id, entries] : manifest_) {
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.trace_bound < y.trace_bound; });
  }
}

void GeneratorCache::save_manifest() const {
  std::ostringstream out;
  out << "SIEGELCACHE 1\n";
  for (const auto& [id, entries] : manifest_) {
    for (const auto& e : entries) {
      out << "series " << generator_name(id) << ' ' << e.trace_bound << ' ' << hex32(e.crc) << ' ' << e.file << '\n';
    }
  }
  if (htable_.size() > 0) {
    out << "htable " << hex32(htable_crc_) << ' ' << kHTableFile << '\n';
    for (unsigned long r : {3UL, 5UL}) out << "hextent " << r << ' ' << htable_.extent(r) << '\n';
  }
  write_atomically(*dir_ / kManifest, out.str());
}

void GeneratorCache::load_htable() {
  fs::path path = *dir_ / kHTableFile;
  if (!fs::exists(path) || htable_crc_ == 0) return;
  if (file_crc32(path) != htable_crc_) throw CacheCorruptionError("checksum mismatch for " + path.string());
  std::ifstream in(path);
  try {
    htable_.read(in);
  } catch (const SeriesFormatError& e) {
    throw CacheCorruptionError(path.string() + ": " + e.what());
  }
}

void GeneratorCache::save_htable() {
  std::ostringstream out;
  htable_.write(out);
  fs::path path = *dir_ / kHTableFile;
  write_atomically(path, out.str());
  htable_crc_ = file_crc32(path);
}

std::optional<TruncatedSeries> GeneratorCache::load_from_disk(GeneratorId id, long T) {
  auto it = manifest_.find(id);
  if (it == manifest_.end()) return std::nullopt;
  for (const auto& e : it->second) {
    if (e.trace_bound < T) continue;
    fs::path path = *dir_ / e.file;
    if (file_crc32(path) != e.crc) throw CacheCorruptionError("checksum mismatch for " + path.string());
    std::ifstream in(path);
    try {
      TruncatedSeries f = read_series(in);
      if (f.weight() != generator_weight(id) || f.trace_bound() != e.trace_bound) {
        throw CacheCorruptionError(path.string() + ": header disagrees with manifest");
      }
      return f.truncated(T);
    } catch (const SeriesFormatError& err) {
      throw CacheCorruptionError(path.string() + ": " + err.what());
    }
  }
  return std::nullopt;
}

void GeneratorCache::store(GeneratorId id, const TruncatedSeries& f) {
  std::string file = generator_name(id) + "_T" + std::to_string(f.trace_bound()) + ".qexp";
  std::ostringstream out;
  write_series(out, f);
  fs::path path = *dir_ / file;
  write_atomically(path, out.str());
  auto& entries = manifest_[id];
  std::erase_if(entries, [&](const Entry& e) { return e.trace_bound == f.trace_bound(); });
  entries.push_back({f.trace_bound(), file, file_crc32(path)});
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.trace_bound < y.trace_bound; });
}

const TruncatedSeries& GeneratorCache::get(GeneratorId id, long T) {
  if (auto it = memory_.find({id, T}); it != memory_.end()) return it->second;
  for (auto& [key, f] : memory_) {
    if (key.first == id && key.second > T) return memory_.emplace(std::make_pair(id, T), f.truncated(T)).first->second;
  }
  if (dir_) {
    if (auto f = load_from_disk(id, T)) return memory_.emplace(std::make_pair(id, T), std::move(*f)).first->second;
  }
  // Extend the largest lower-bound expansion we have, if any.
  std::optional<TruncatedSeries> prefix;
  for (auto& [key, f] : memory_) {
    if (key.first == id && key.second < T && (!prefix || prefix->trace_bound() < key.second)) prefix = f;
  }
  if (!prefix && dir_ && manifest_.count(id) && !manifest_[id].empty()) {
    prefix = load_from_disk(id, manifest_[id].back().trace_bound);
  }
  std::size_t hsize = htable_.size();
  TruncatedSeries f = build_generator(id, T, htable_, prefix ? &*prefix : nullptr);
  if (dir_) {
    if (htable_.size() != hsize) save_htable();
    store(id, f);
    save_manifest();
  }
  return memory_.emplace(std::make_pair(id, T), std::move(f)).first->second;
}

int GeneratorCache::materialize(long T) {
  int written = 0;
  for (auto id : kGenerators) {
    bool present = false;
    if (dir_ && manifest_.count(id)) {
      for (const auto& e : manifest_[id]) present = present || e.trace_bound == T;
    }
    if (present) {
      // Validate the checksum even when nothing has to be written.
      load_from_disk(id, T);
      continue;
    }
    memory_.erase({id, T});
    get(id, T);
    ++written;
  }
  return written;
}

}  // namespace siegel
