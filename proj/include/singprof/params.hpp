#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace singprof {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation is asked about parameters outside its range of
// validity (e.g. the cap condition below q3).
struct NotApplicable : std::logic_error {
  using std::logic_error::logic_error;
};

// A real number or +infinity. Never a sentinel float.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  double value() const;  // throws for +inf
  double as_double() const;  // +inf maps to HUGE_VAL, for arithmetic in reports

  bool operator==(const ExtendedReal& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }

  std::string to_string() const;

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

bool operator<(double x, const ExtendedReal& e);
bool operator<(const ExtendedReal& e, double x);
bool operator<=(double x, const ExtendedReal& e);
bool operator>=(double x, const ExtendedReal& e);
bool operator<(const ExtendedReal& a, const ExtendedReal& b);

struct Params {
  int dim = 2;
  double q = 2.0;
  double ell = 0.0;

  // ell omitted selects ell_{N,q}.
  static Params make(int dim, double q, std::optional<double> ell = std::nullopt);

  bool operator==(const Params&) const = default;
};

void validate(const Params& p);

struct CriticalExponents {
  double q1;
  ExtendedReal q2;
  ExtendedReal q3;
};

CriticalExponents critical_exponents(int dim);

// 2(N - q(N-2)) / (q-1)^2
double ell_coeff(int dim, double q);

// |a - b| <= 1e-12 * max(|a|, |b|, 1)
bool nearly_equal(double a, double b);

// True when p.ell coincides with ell_{N,q}.
bool ell_is_separable(const Params& p);

enum class Existence { Exists, NotExists, Unknown };
enum class Uniqueness { AtMostOne, Unknown, NotApplicable };

std::string to_string(Existence e);
std::string to_string(Uniqueness u);
Existence existence_from_string(const std::string& s);
Uniqueness uniqueness_from_string(const std::string& s);

namespace tags {
inline constexpr const char* kThm10i = "Thm 1.0(i)";
inline constexpr const char* kThm10ii = "Thm 1.0(ii)";
inline constexpr const char* kThm10iii = "Thm 1.0(iii)";
inline constexpr const char* kThm81 = "Thm 8.1";
inline constexpr const char* kThm82 = "Thm 8.2";
inline constexpr const char* kThm83 = "Thm 8.3";
inline constexpr const char* kCor71 = "Cor 7.1";
inline constexpr const char* kRemarkC = "Remark (C)";
inline constexpr const char* kOpen = "Open";
}  // namespace tags

struct RegimeReport {
  Existence existence = Existence::Unknown;
  Uniqueness uniqueness = Uniqueness::Unknown;
  std::string existence_basis;
  std::string uniqueness_basis;
  std::vector<std::string> applied_results;
  // q1, q2, q3, ell_Nq, thm8_3_ell_max, cor7_1_ell_max. Infinite values stay infinite.
  std::map<std::string, ExtendedReal> thresholds;
  std::vector<std::string> notes;

  bool operator==(const RegimeReport&) const = default;
};

RegimeReport classify(const Params& p);

// "Exists (Thm 1.0(ii)); AtMostOne (Thm 8.2)"
std::string pretty(const RegimeReport& r);

// Upper bound on ell for uniqueness when N = 3: 2(3-q)/((q+3)(q-1)).
double axial_ell_threshold(double q);
// -(N-1)/(q-1)
double cor71_ell_threshold(int dim, double q);

// Inequality (C) for a cap with weighted Poincare constant lambda_est.
// True signals nonexistence on the cap. Requires N >= 4 and q > q3.
bool cap_nonexistence(const Params& p, double lambda_est);

}  // namespace singprof
