#pragma once

#include "siegel/arith.hpp"
#include "siegel/qexp.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace siegel {

enum class GeneratorId { E4, E6, Chi10, Chi12 };

inline constexpr std::array<GeneratorId, 4> kGenerators = {GeneratorId::E4, GeneratorId::E6, GeneratorId::Chi10,
                                                           GeneratorId::Chi12};

int generator_weight(GeneratorId id);
/// "E4", "E6", "CHI10", "CHI12".
std::string generator_name(GeneratorId id);
std::optional<GeneratorId> parse_generator(std::string_view name);

/// Coefficients c(D) of an index-1 Jacobi form, D = 4n - r^2.
struct JacobiTable {
  int weight = 0;
  long dmax = -1;
  std::vector<mpq_class> values;  // indexed by D; D = 1, 2 mod 4 hold 0

  /// Throws std::out_of_range if D is inadmissible or above dmax.
  const mpq_class& at(long D) const;
};

/// Largest discriminant 4ac - b^2 among indices of trace at most T.
long lift_dmax(long T);

JacobiTable jacobi_eisenstein(int k, long dmax, HTable& h);
/// Weight 10 or 12 cusp form normalized by c(3) = 1.
JacobiTable jacobi_cusp(int k, long dmax, HTable& h);

TruncatedSeries maass_lift(int k, const JacobiTable& jc, bool eisenstein, long T);

/// Builds the generator expansion from scratch.
TruncatedSeries igusa_generator(GeneratorId id, long T, HTable& h);

/// Cache file contents disagree with the manifest or are malformed.
class CacheCorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directory of generator expansions, one file per generator per trace bound,
/// with a checksummed manifest. Loading a bound below a cached one truncates
/// the larger file.
class GeneratorCache {
 public:
  /// Without a directory the cache lives in memory only.
  explicit GeneratorCache(std::optional<std::filesystem::path> dir = std::nullopt);

  /// Returns the expansion to exactly trace bound T.
  const TruncatedSeries& get(GeneratorId id, long T);
  /// Makes sure all four generators exist on disk to bound T. Returns the
  /// number of files written (0 when everything was already present).
  int materialize(long T);

  HTable& htable() { return htable_; }
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

 private:
  struct Entry {
    long trace_bound;
    std::string file;
    std::uint32_t crc;
  };

  void load_manifest();
  void save_manifest() const;
  void load_htable();
  void save_htable();
  std::optional<TruncatedSeries> load_from_disk(GeneratorId id, long T);
  void store(GeneratorId id, const TruncatedSeries& f);

  std::optional<std::filesystem::path> dir_;
  HTable htable_;
  std::uint32_t htable_crc_ = 0;
  std::map<GeneratorId, std::vector<Entry>> manifest_;
  std::map<std::pair<GeneratorId, long>, TruncatedSeries> memory_;
};

/// CRC-32 of a file's bytes.
std::uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace siegel
