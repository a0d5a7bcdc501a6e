#include "transchar/hopf.hpp"

namespace transchar {

const Fgl& FglStore::at_least(int DF) {
  last_was_rebuild_ = false;
  if (mem_.has_value() && mem_->degree_bound() >= DF) return *mem_;
  if (backend_) {
    auto loaded = backend_->load(ps_, DF);
    if (loaded.has_value() && loaded->degree_bound() >= DF) {
      mem_ = std::move(*loaded);
      return *mem_;
    }
  }
  FglBuildResult r = lubin_tate_fgl(ps_, DF);
  if (r.status != FglBuildResult::Ok)
    throw Error("FGL construction failed at degree " +
                std::to_string(r.stuck_degree));
  last_was_rebuild_ = true;
  mem_ = std::move(r.fgl);
  if (backend_) backend_->store(*mem_);
  return *mem_;
}

namespace {

RingElem base_change_elem(const RingElem& x, const RingSpec& target) {
  if (x.spec() == target) return x;
  RingElem r(target);
  for (const auto& [e, c] : x.terms())
    r += RingElem::monomial(target, e, static_cast<int64_t>(c));
  return r;
}

int elem_weight_or_dead(const RingElem& x) {
  auto w = x.mt_weight();
  return w.has_value() ? *w : INT32_MAX;
}

}  // namespace

HopfLevelResult make_hopf_level(FglStore& store, int k, bool verify_coproduct) {
  HopfLevel H;
  H.k = k;
  H.ps = store.pseries();
  const RingSpec& b = H.ps.espec;
  int64_t rank64 = 1;
  for (int i = 0; i < k * b.n; ++i) rank64 *= b.p;
  if (rank64 > 512) return {HopfLevelResult::PrepFailed, {}, "rank too large"};
  H.rank = static_cast<int>(rank64);
  int Wmax = (b.a - 1) + (b.n - 1) * b.d;

  // [p^k] to a precision where the canonical factor stabilizes
  int D = 2 * H.rank + 2;
  std::optional<Series> stable_fk;
  for (int round = 0; round < 24; ++round) {
    // the p-series evaluation needs F up to about a + D/p plus slack; the
    // stability loop below re-checks against a larger precision anyway
    int DF_need = b.a + D / static_cast<int>(b.p) + H.rank + 8;
    const Fgl& F = store.at_least(std::max(DF_need, 2 * H.rank + 4));
    Series pk = pk_series(F, k, D);
    Prepared prep = weierstrass_prepare(pk);
    if (prep.status != Prepared::Ok)
      return {HopfLevelResult::PrepFailed, {}, "preparation failed over E"};
    if (prep.w_degree != H.rank)
      return {HopfLevelResult::PrepFailed, {},
              "unexpected Weierstrass degree " + std::to_string(prep.w_degree)};
    if (stable_fk.has_value() && prep.monic == *stable_fk) {
      H.pk = pk;
      H.f_k = prep.monic;
      H.w_k = prep.unit;
      H.D_used = D;
      break;
    }
    stable_fk = prep.monic;
    D += 2 * H.rank;
  }
  if (H.f_k.is_zero())
    return {HopfLevelResult::Unstable, {}, "canonical factor did not stabilize"};

  // death exponent and weight profile of x^i mod f_k over E
  Algebra OE = H.make_OE();
  std::vector<Algebra::Elem> xpow{OE.one()};
  H.weight_profile.assign(1, 0);
  Algebra::Elem x = OE.gen(0);
  int cap = H.rank * (Wmax + 3) + 4;
  for (int i = 1; i <= cap; ++i) {
    xpow.push_back(OE.mul(xpow.back(), x));
    if (OE.is_zero(xpow.back())) {
      H.death = i;
      break;
    }
    int w = INT32_MAX;
    for (const auto& c : xpow.back()) w = std::min(w, elem_weight_or_dead(c));
    H.weight_profile.push_back(w);
  }
  if (H.death == 0)
    return {HopfLevelResult::Unstable, {}, "x failed to die below the cap"};

  // degree needed for the coproduct: every omitted pair must be weight-dead
  int D_delta = 0;
  for (int i = 0; i < H.death; ++i)
    for (int j = i; j < H.death; ++j)
      if (H.weight_profile[static_cast<size_t>(i)] +
              H.weight_profile[static_cast<size_t>(j)] <=
          Wmax)
        D_delta = std::max(D_delta, i + j);
  const Fgl& F = store.at_least(std::max(D_delta, H.D_used / 2 + b.a + 4));

  // assemble Delta = sum c_{ij} (x^i mod f_k) (x) (x^j mod f_k)
  H.delta.assign(static_cast<size_t>(H.rank),
                 std::vector<RingElem>(static_cast<size_t>(H.rank),
                                       RingElem::zero(b)));
  for (const auto& [key, c] : F.terms()) {
    int i = key.first, j = key.second;
    if (i >= H.death || j >= H.death) continue;
    const auto& Xi = xpow[static_cast<size_t>(i)];
    const auto& Xj = xpow[static_cast<size_t>(j)];
    for (int a = 0; a < H.rank; ++a) {
      if (Xi[static_cast<size_t>(a)].is_zero()) continue;
      RingElem ca = c * Xi[static_cast<size_t>(a)];
      for (int bb = 0; bb < H.rank; ++bb) {
        if (Xj[static_cast<size_t>(bb)].is_zero()) continue;
        H.delta[static_cast<size_t>(a)][static_cast<size_t>(bb)] +=
            ca * Xj[static_cast<size_t>(bb)];
      }
    }
  }

  // self-checks
  H.checks_passed = true;
  // counit: row/column at the identity slot must be exactly x
  for (int j = 0; j < H.rank; ++j) {
    bool expect_one = (j == 1);
    const RingElem& v = H.delta[0][static_cast<size_t>(j)];
    if (expect_one ? !v.is_one() : !v.is_zero()) {
      H.checks_passed = false;
      H.check_detail = "counit failure";
    }
    const RingElem& w = H.delta[static_cast<size_t>(j)][0];
    if (expect_one ? !w.is_one() : !w.is_zero()) {
      H.checks_passed = false;
      H.check_detail = "counit failure";
    }
  }
  // cocommutativity
  for (int i = 0; i < H.rank && H.checks_passed; ++i)
    for (int j = 0; j < H.rank; ++j)
      if (!(H.delta[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
            H.delta[static_cast<size_t>(j)][static_cast<size_t>(i)])) {
        H.checks_passed = false;
        H.check_detail = "cocommutativity failure";
        break;
      }
  if (verify_coproduct && H.checks_passed) {
    // f_k(Delta(x)) = 0 in O (x) O
    Algebra OO(b, {H.f_k, H.f_k});
    Algebra::Elem dx = OO.zero();
    for (int i = 0; i < H.rank; ++i)
      for (int j = 0; j < H.rank; ++j) {
        const RingElem& c = H.delta[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (!c.is_zero()) dx[static_cast<size_t>(i + H.rank * j)] = c;
      }
    Algebra::Elem fk_dx = OO.eval_poly(H.f_k, dx);
    if (!OO.is_zero(fk_dx)) {
      H.checks_passed = false;
      H.check_detail = "f_k(Delta x) != 0";
    }
  }
  if (!H.checks_passed) return {HopfLevelResult::BuildFailed, H, H.check_detail};
  return {HopfLevelResult::Ok, H, ""};
}

std::vector<std::vector<RingElem>> delta_in(const HopfLevel& H,
                                            const RingSpec& target) {
  std::vector<std::vector<RingElem>> out(
      static_cast<size_t>(H.rank),
      std::vector<RingElem>(static_cast<size_t>(H.rank),
                            RingElem::zero(target)));
  for (int i = 0; i < H.rank; ++i)
    for (int j = 0; j < H.rank; ++j)
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          base_change_elem(H.delta[static_cast<size_t>(i)][static_cast<size_t>(j)],
                           target);
  return out;
}

Algebra::Elem hopf_sum(const HopfLevel& H, const Algebra& A,
                       const Algebra::Elem& u, const Algebra::Elem& v) {
  // powers of the arguments up to the torsion rank
  std::vector<Algebra::Elem> up{A.one()}, vp{A.one()};
  for (int i = 1; i < H.rank; ++i) {
    up.push_back(A.mul(up.back(), u));
    vp.push_back(A.mul(vp.back(), v));
  }
  Algebra::Elem r = A.zero();
  for (int i = 0; i < H.rank; ++i)
    for (int j = 0; j < H.rank; ++j) {
      const RingElem& c = H.delta[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (c.is_zero()) continue;
      RingElem cc = base_change_elem(c, A.base());
      Algebra::Elem term = A.mul(up[static_cast<size_t>(i)],
                                 vp[static_cast<size_t>(j)]);
      r = A.add(r, A.scale(term, cc));
    }
  return r;
}

Algebra::Elem hopf_cmul(const HopfLevel& H, const Algebra& A, uint64_t c,
                        const Algebra::Elem& pt) {
  if (c == 0) return A.zero();
  Algebra::Elem half = hopf_cmul(H, A, c / 2, pt);
  Algebra::Elem r =
      (c / 2 == 0) ? A.zero() : hopf_sum(H, A, half, half);
  if (c % 2 == 1) r = A.is_zero(r) ? pt : hopf_sum(H, A, r, pt);
  return r;
}

}  // namespace transchar
