#include "singprof/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace singprof {

double ExtendedReal::value() const {
  if (infinite_) throw std::domain_error("extended real is +inf");
  return value_;
}

double ExtendedReal::as_double() const { return infinite_ ? HUGE_VAL : value_; }

std::string ExtendedReal::to_string() const {
  if (infinite_) return "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

bool operator<(double x, const ExtendedReal& e) { return e.is_infinite() || x < e.value(); }
bool operator<(const ExtendedReal& e, double x) { return e.is_finite() && e.value() < x; }
bool operator<=(double x, const ExtendedReal& e) { return e.is_infinite() || x <= e.value(); }
bool operator>=(double x, const ExtendedReal& e) { return e.is_finite() && x >= e.value(); }
bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_infinite()) return false;
  return a.value() < b;
}

Params Params::make(int dim, double q, std::optional<double> ell) {
  Params p;
  p.dim = dim;
  p.q = q;
  validate(p);
  p.ell = ell ? *ell : ell_coeff(dim, q);
  if (!std::isfinite(p.ell)) throw InvalidArgument("ell must be finite");
  return p;
}

void validate(const Params& p) {
  if (p.dim < 2) throw InvalidArgument("dimension must be >= 2");
  if (!(p.q > 1.0) || !std::isfinite(p.q)) throw InvalidArgument("exponent q must be a finite real > 1");
  if (!std::isfinite(p.ell)) throw InvalidArgument("ell must be finite");
}

CriticalExponents critical_exponents(int dim) {
  if (dim < 2) throw InvalidArgument("dimension must be >= 2");
  const double n = dim;
  CriticalExponents c{(n + 1.0) / (n - 1.0), ExtendedReal::infinity(), ExtendedReal::infinity()};
  if (dim > 2) c.q2 = ExtendedReal::finite((n + 2.0) / (n - 2.0));
  if (dim > 3) c.q3 = ExtendedReal::finite((n + 1.0) / (n - 3.0));
  return c;
}

double ell_coeff(int dim, double q) {
  if (dim < 2) throw InvalidArgument("dimension must be >= 2");
  if (!(q > 1.0)) throw InvalidArgument("exponent q must be > 1");
  const double n = dim;
  return 2.0 * (n - q * (n - 2.0)) / ((q - 1.0) * (q - 1.0));
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
}

bool ell_is_separable(const Params& p) { return nearly_equal(p.ell, ell_coeff(p.dim, p.q)); }

std::string to_string(Existence e) {
  switch (e) {
    case Existence::Exists: return "Exists";
    case Existence::NotExists: return "NotExists";
    case Existence::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(Uniqueness u) {
  switch (u) {
    case Uniqueness::AtMostOne: return "AtMostOne";
    case Uniqueness::Unknown: return "Unknown";
    case Uniqueness::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

Existence existence_from_string(const std::string& s) {
  if (s == "Exists") return Existence::Exists;
  if (s == "NotExists") return Existence::NotExists;
  if (s == "Unknown") return Existence::Unknown;
  throw InvalidArgument("unknown existence verdict: " + s);
}

Uniqueness uniqueness_from_string(const std::string& s) {
  if (s == "AtMostOne") return Uniqueness::AtMostOne;
  if (s == "Unknown") return Uniqueness::Unknown;
  if (s == "NotApplicable") return Uniqueness::NotApplicable;
  throw InvalidArgument("unknown uniqueness verdict: " + s);
}

double axial_ell_threshold(double q) { return 2.0 * (3.0 - q) / ((q + 3.0) * (q - 1.0)); }

double cor71_ell_threshold(int dim, double q) { return -(dim - 1.0) / (q - 1.0); }

namespace {

// x <= bound, with the endpoint included up to the comparison tolerance.
bool at_most(double x, double bound) { return x < bound || nearly_equal(x, bound); }
bool at_least(double x, const ExtendedReal& bound) {
  return bound.is_finite() && (x > bound.value() || nearly_equal(x, bound.value()));
}

}  // namespace

RegimeReport classify(const Params& p) {
  validate(p);
  const int n = p.dim;
  const double q = p.q;
  const CriticalExponents ce = critical_exponents(n);
  const double ell_nq = ell_coeff(n, q);

  RegimeReport r;
  r.thresholds.emplace("q1", ExtendedReal::finite(ce.q1));
  r.thresholds.emplace("q2", ce.q2);
  r.thresholds.emplace("q3", ce.q3);
  r.thresholds.emplace("ell_Nq", ExtendedReal::finite(ell_nq));
  r.thresholds.emplace("thm8_3_ell_max", ExtendedReal::finite(axial_ell_threshold(q)));
  r.thresholds.emplace("cor7_1_ell_max", ExtendedReal::finite(cor71_ell_threshold(n, q)));

  if (ell_is_separable(p)) {
    if (at_most(q, ce.q1)) {
      r.existence = Existence::NotExists;
      r.existence_basis = tags::kThm10i;
    } else if (at_least(q, ce.q3)) {
      r.existence = Existence::NotExists;
      r.existence_basis = tags::kThm10iii;
    } else {
      r.existence = Existence::Exists;
      r.existence_basis = tags::kThm10ii;
    }
  }
  if (r.existence != Existence::NotExists && n >= 4 && at_least(q, ce.q3) &&
      at_most(p.ell, cor71_ell_threshold(n, q))) {
    r.existence = Existence::NotExists;
    r.existence_basis = tags::kCor71;
  }
  if (r.existence_basis.empty()) r.existence_basis = tags::kOpen;

  if (r.existence == Existence::NotExists) {
    r.uniqueness = Uniqueness::NotApplicable;
    r.uniqueness_basis = r.existence_basis;
  } else if (n == 2) {
    r.uniqueness = Uniqueness::AtMostOne;
    r.uniqueness_basis = tags::kThm81;
  } else if (n == 3) {
    if (at_most(q, 5.0) || at_most(p.ell, axial_ell_threshold(q))) {
      r.uniqueness = Uniqueness::AtMostOne;
      r.uniqueness_basis = tags::kThm83;
    } else {
      r.uniqueness = Uniqueness::Unknown;
      r.uniqueness_basis = tags::kOpen;
      r.notes.push_back("uniqueness undecided for N=3, q>5 above the Thm 8.3 threshold");
    }
  } else if (q < ce.q3 && !at_least(q, ce.q3)) {
    r.uniqueness = Uniqueness::AtMostOne;
    r.uniqueness_basis = tags::kThm82;
  } else {
    r.uniqueness = Uniqueness::Unknown;
    r.uniqueness_basis = tags::kOpen;
  }

  r.applied_results.push_back(r.existence_basis);
  if (r.uniqueness_basis != r.existence_basis) r.applied_results.push_back(r.uniqueness_basis);

  if (ce.q2.is_finite() && nearly_equal(q, ce.q2.value()))
    r.notes.push_back("q equals q2: profile convergence is not asserted at this exponent");
  return r;
}

std::string pretty(const RegimeReport& r) {
  return to_string(r.existence) + " (" + r.existence_basis + "); " + to_string(r.uniqueness) + " (" +
         r.uniqueness_basis + ")";
}

bool cap_nonexistence(const Params& p, double lambda_est) {
  validate(p);
  const CriticalExponents ce = critical_exponents(p.dim);
  if (p.dim < 4) throw NotApplicable("condition (C) needs N >= 4");
  if (!(ce.q3 < p.q) || nearly_equal(p.q, ce.q3.value()))
    throw NotApplicable("condition (C) needs q > q3");
  if (!(lambda_est >= 0.0)) throw InvalidArgument("lambda estimate must be >= 0");
  const double n = p.dim;
  const double lhs = p.ell * (p.q - 1.0);
  const double rhs = 1.0 - n + (p.q * (n - 3.0) - n - 1.0) / (n - 1.0) * lambda_est;
  return lhs >= rhs;
}

}  // namespace singprof
