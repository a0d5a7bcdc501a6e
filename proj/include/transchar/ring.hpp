/****************************************************************
 * Exact arithmetic in desk-scale truncated models of the rings
 *   E  = W(k)[[u_1,...,u_{n-1}]]        (coefficients mod p^a)
 *   Lt = E[u_t^{-1}]^                    (m_t-adically truncated)
 *
 * Elements are sparse Laurent polynomials in u_1..u_{n-1} with
 * integer coefficients mod p^a.  Exponent boxes:
 *   E  flavor: every exponent in [0, d]     (a genuine ring quotient)
 *   Lt flavor: u_t exponent in [-e, d], others in [0, d]
 *              (a precision window, not an ideal; any discard of a
 *               u_t power outside the window flags precision loss)
 ****************************************************************/
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace transchar {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Flavor { E, Lt };

struct RingSpec {
  int64_t p = 2;
  int n = 2;          // height; variables are u_1..u_{n-1}
  int a = 8;          // coefficients live in Z/p^a
  Flavor flavor = Flavor::E;
  int t = 0;          // Lt flavor only, 1 <= t < n
  int d = 16;         // max positive exponent per variable
  int e = 0;          // max negative exponent of u_t (Lt only)

  int nvars() const { return n - 1; }
  int ut_index() const { return t - 1; }
  // variables whose exponents count toward the m_t-weight
  // (E flavor behaves as t = n: the full maximal ideal)
  int weight_vars() const { return (flavor == Flavor::E ? n : t) - 1; }
  uint64_t modulus() const;
  void validate() const;
  bool compatible(const RingSpec& o) const;  // same p, n, a, d
  bool operator==(const RingSpec& o) const;

  static RingSpec E_flavor(int64_t p, int n, int a, int d);
  static RingSpec Lt_flavor(int64_t p, int n, int a, int d, int t, int e);
};

// exponent vector, one entry per variable u_1..u_{n-1}
using Exp = std::vector<int32_t>;

struct UnitCheck;

class RingElem {
public:
  RingElem() = default;
  explicit RingElem(RingSpec spec) : spec_(std::move(spec)) {}

  static RingElem zero(const RingSpec& s) { return RingElem(s); }
  static RingElem one(const RingSpec& s) { return constant(s, 1); }
  static RingElem constant(const RingSpec& s, int64_t c);
  static RingElem variable(const RingSpec& s, int var, int power = 1);
  static RingElem monomial(const RingSpec& s, const Exp& exp, int64_t c);

  const RingSpec& spec() const { return spec_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  size_t term_count() const { return terms_.size(); }
  const std::map<Exp, uint64_t>& terms() const { return terms_; }
  bool precision_loss() const { return precision_loss_; }
  void clear_precision_loss() { precision_loss_ = false; }

  uint64_t coeff(const Exp& e) const;
  int64_t constant_term() const;  // coefficient of the all-zero exponent

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator*(const RingElem& o) const;
  RingElem operator-() const;
  RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
  RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
  RingElem& operator*=(const RingElem& o) { return *this = *this * o; }
  bool operator==(const RingElem& o) const;
  bool operator!=(const RingElem& o) const { return !(*this == o); }

  RingElem scale(int64_t c) const;
  RingElem pow(uint64_t k) const;

  // m_t-adic order: min over terms of v_p(coeff) + sum of weight-variable
  // exponents.  nullopt for the zero element.
  std::optional<int> mt_weight() const;

  // kills every term of weight >= 1, reduces coefficients mod p (Lt flavor)
  RingElem reduce_mod_mt() const;
  // reduce coefficients mod (p, u_1..u_{h-1}): drop p-multiples and any term
  // using a variable below index h; used by the p-series congruence checks
  RingElem reduce_mod_ph(int h) const;

  UnitCheck is_unit_with_inverse() const;

  RingElem base_change_to_lt(int t, int e) const;  // E -> Lt(t), termwise

  std::string str() const;  // for diagnostics and canonical report text
  uint64_t content_hash() const;

private:
  RingSpec spec_;
  std::map<Exp, uint64_t> terms_;  // nonzero residues only, canonical order
  bool precision_loss_ = false;

  void insert_term(const Exp& e, uint64_t c);
  friend RingElem mul_impl(const RingElem& x, const RingElem& y);
};

struct UnitCheck {
  enum Kind { Unit, NotUnit, PrecisionExceeded } kind;
  std::optional<RingElem> inverse;  // set iff kind == Unit
};

// Gaussian elimination pivoting only on certified units.
struct LinearSolveResult {
  enum Status { Solved, NoSolution } status;
  std::vector<RingElem> solution;
  int stuck_column = -1;
};

using Matrix = std::vector<std::vector<RingElem>>;

// inverse of c modulo p^a; throws when p | c
uint64_t inverse_mod_pk(int64_t p, uint64_t pa, uint64_t c);

// square system per the module contract
LinearSolveResult linear_solve(const Matrix& M, const std::vector<RingElem>& b);

// general (possibly rectangular, consistent-overdetermined) version used by
// the minimal-polynomial and certificate searches
LinearSolveResult solve_linear_system(const Matrix& M,
                                      const std::vector<RingElem>& b);

}  // namespace transchar
