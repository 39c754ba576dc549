#pragma once

#include "siegel/ball.hpp"
#include "siegel/igusa.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace siegel {

class EigenformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Q(theta) with theta the unique root of poly inside a complex rectangle.
struct NumberField {
  std::vector<mpz_class> poly;  // constant term first
  std::array<mpq_class, 2> re;  // [lo, hi]
  std::array<mpq_class, 2> im;

  long degree() const { return static_cast<long>(poly.size()) - 1; }
  bool operator==(const NumberField&) const = default;
};

/// coeff(theta) * E4^i E6^j chi10^l chi12^m, coeff in the power basis of theta.
struct FormTerm {
  std::vector<mpq_class> coeff;
  std::array<int, 4> expo{};

  long weight() const { return 4L * expo[0] + 6L * expo[1] + 10L * expo[2] + 12L * expo[3]; }
  bool operator==(const FormTerm&) const = default;
};

struct EigenformSpec {
  std::string name;
  long weight = 0;
  std::optional<NumberField> field;
  std::vector<FormTerm> terms;

  bool operator==(const EigenformSpec&) const = default;
};

/// Throws EigenformError on a non-homogeneous term, an empty form, a
/// coefficient longer than the field degree, or a root box that does not
/// isolate exactly one root.
void validate(const EigenformSpec& spec);

EigenformSpec parse_eigenform(const std::string& json_text);
std::string serialize_eigenform(const EigenformSpec& spec);
EigenformSpec load_eigenform(const std::string& path);

/// Outcome of the Krawczyk test on a box.
enum class RootCount { None, Unique, Unknown };
RootCount isolate_root(const NumberField& field, Precision prec);

/// The root refined to a box of radius about 2^-prec around it.
ComplexBall refine_root(const NumberField& field, Precision prec);

/// Coefficient boxes of every term at the given precision.
std::vector<ComplexBall> embed_algebraic(const EigenformSpec& spec, Precision prec);

std::vector<EigenformSpec> builtin_catalog();
/// Case-insensitive lookup in the builtin catalog; throws EigenformError.
EigenformSpec builtin_form(const std::string& name);

}  // namespace siegel
