/****************************************************************
 * Level-k Hopf data for the p-divisible group attached to the
 * formal group law: the p^k-series, its canonical Weierstrass
 * factor f_k over E, and the exact coproduct table
 *   Delta(x) = sum_{i,j} delta_{ij} x1^i (x) x2^j   in  O (x) O,
 * O = E[x]/(f_k).  The table is assembled from the FGL terms over
 * E flavor, where powers of x gain maximal-ideal weight under
 * reduction mod f_k and die inside the box: every omitted term
 * (i, j) satisfies weight(x^i) + weight(x^j) > Wmax, so the finite
 * sum equals the box image of the true coproduct.
 *
 * Every torsion translate downstream (c-multiples, character-map
 * columns, etale norms) is a polynomial pushforward of Delta and
 * therefore exact.
 ****************************************************************/
#pragma once

#include "transchar/algebra.hpp"
#include "transchar/fgl.hpp"

namespace transchar {

struct FglCacheBackend {
  virtual std::optional<Fgl> load(const PSeriesSpec& ps, int min_DF) = 0;
  virtual void store(const Fgl& fgl) = 0;
  virtual ~FglCacheBackend() = default;
};

// hands out the FGL at whatever degree callers need, rebuilding larger as
// required; optionally file-backed
class FglStore {
public:
  explicit FglStore(PSeriesSpec ps, FglCacheBackend* backend = nullptr)
      : ps_(std::move(ps)), backend_(backend) {}

  const PSeriesSpec& pseries() const { return ps_; }
  const Fgl& at_least(int DF);
  bool last_was_rebuild() const { return last_was_rebuild_; }

private:
  PSeriesSpec ps_;
  FglCacheBackend* backend_;
  std::optional<Fgl> mem_;
  bool last_was_rebuild_ = false;
};

struct HopfLevel {
  int k = 0;
  PSeriesSpec ps;
  int rank = 0;  // p^{kn}
  int D_used = 0;
  Series pk;       // [p^k](x) over E to precision D_used
  Series f_k;      // canonical monic distinguished factor, degree p^{kn}
  Series w_k;      // unit cofactor: pk = f_k * w_k to precision D_used
  int death = 0;   // least Z with x^Z = 0 in E[x]/(f_k)
  std::vector<int> weight_profile;           // mt-weight of x^i mod f_k
  std::vector<std::vector<RingElem>> delta;  // coproduct table over E

  Algebra make_OE() const { return Algebra(ps.espec, {f_k}); }

  // self-checks run at construction: counit, cocommutativity, f_k(Delta)=0
  bool checks_passed = false;
  std::string check_detail;
};

struct HopfLevelResult {
  enum Status { Ok, PrepFailed, Unstable, BuildFailed } status;
  HopfLevel level;
  std::string detail;
};

HopfLevelResult make_hopf_level(FglStore& store, int k,
                                bool verify_coproduct = true);

// u +_F v for f_k-torsion elements of any algebra over a compatible spec
Algebra::Elem hopf_sum(const HopfLevel& H, const Algebra& A,
                       const Algebra::Elem& u, const Algebra::Elem& v);

// [c](pt) for an f_k-torsion point, by binary addition chains
Algebra::Elem hopf_cmul(const HopfLevel& H, const Algebra& A, uint64_t c,
                        const Algebra::Elem& pt);

// the coproduct table base-changed into another spec (same p, n, a, d)
std::vector<std::vector<RingElem>> delta_in(const HopfLevel& H,
                                            const RingSpec& target);

}  // namespace transchar
