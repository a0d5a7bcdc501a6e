#include "transchar/algebra.hpp"

namespace transchar {

Algebra::Algebra(RingSpec base, std::vector<Series> moduli)
    : base_(std::move(base)), moduli_(std::move(moduli)) {
  rank_ = 1;
  for (const auto& m : moduli_) {
    int deg = m.degree();
    if (deg < 1 || !m.coeff(deg).is_one())
      throw Error("Algebra: moduli must be monic of degree >= 1");
    degs_.push_back(deg);
    strides_.push_back(rank_);
    rank_ *= deg;
  }
  overflow_.resize(moduli_.size());
}

Algebra::Elem Algebra::zero() const {
  return Elem(static_cast<size_t>(rank_), RingElem::zero(base_));
}

Algebra::Elem Algebra::one() const { return scalar(RingElem::one(base_)); }

Algebra::Elem Algebra::scalar(const RingElem& c) const {
  Elem e = zero();
  e[0] = c;
  return e;
}

int Algebra::exp_of(int index, int v) const {
  return (index / strides_[static_cast<size_t>(v)]) % degs_[static_cast<size_t>(v)];
}

int Algebra::index_of(const std::vector<int>& exps) const {
  int idx = 0;
  for (size_t v = 0; v < exps.size(); ++v)
    idx += exps[v] * strides_[v];
  return idx;
}

Algebra::Elem Algebra::gen(int v, int power) const {
  Elem e = zero();
  if (power < degs_[static_cast<size_t>(v)]) {
    e[static_cast<size_t>(power * strides_[static_cast<size_t>(v)])] =
        RingElem::one(base_);
    return e;
  }
  Elem x = zero();
  x[static_cast<size_t>(strides_[static_cast<size_t>(v)])] = RingElem::one(base_);
  return pow(x, static_cast<uint64_t>(power));
}

bool Algebra::is_zero(const Elem& e) const {
  for (const auto& c : e)
    if (!c.is_zero()) return false;
  return true;
}

bool Algebra::equal(const Elem& a, const Elem& b) const {
  for (int i = 0; i < rank_; ++i)
    if (!(a[static_cast<size_t>(i)] == b[static_cast<size_t>(i)])) return false;
  return true;
}

Algebra::Elem Algebra::add(const Elem& a, const Elem& b) const {
  Elem r = a;
  for (int i = 0; i < rank_; ++i) r[static_cast<size_t>(i)] += b[static_cast<size_t>(i)];
  return r;
}

Algebra::Elem Algebra::sub(const Elem& a, const Elem& b) const {
  Elem r = a;
  for (int i = 0; i < rank_; ++i) r[static_cast<size_t>(i)] -= b[static_cast<size_t>(i)];
  return r;
}

Algebra::Elem Algebra::neg(const Elem& a) const {
  Elem r = a;
  for (auto& c : r) c = -c;
  return r;
}

void Algebra::ensure_overflow(int v, int j) const {
  auto& table = overflow_[static_cast<size_t>(v)];
  int deg = degs_[static_cast<size_t>(v)];
  const Series& m = moduli_[static_cast<size_t>(v)];
  while (static_cast<int>(table.size()) <= j) {
    int jj = static_cast<int>(table.size());
    // x^{deg+jj} = x * x^{deg+jj-1} reduced
    std::vector<RingElem> prev;
    if (jj == 0) {
      // x^deg = -(lower part of m)
      prev.assign(static_cast<size_t>(deg), RingElem::zero(base_));
      for (const auto& [i, c] : m.coeffs())
        if (i < deg) prev[static_cast<size_t>(i)] = -c;
    } else {
      const std::vector<RingElem>& last = table[static_cast<size_t>(jj - 1)];
      prev.assign(static_cast<size_t>(deg), RingElem::zero(base_));
      // multiply by x: shift, then reduce the top coefficient
      RingElem top = last[static_cast<size_t>(deg - 1)];
      for (int i = deg - 1; i >= 1; --i) prev[static_cast<size_t>(i)] = last[static_cast<size_t>(i - 1)];
      prev[0] = RingElem::zero(base_);
      if (!top.is_zero()) {
        const std::vector<RingElem>& x_deg = table[0];
        for (int i = 0; i < deg; ++i)
          prev[static_cast<size_t>(i)] += top * x_deg[static_cast<size_t>(i)];
      }
    }
    table.push_back(std::move(prev));
  }
}

Algebra::Elem Algebra::mul(const Elem& a, const Elem& b) const {
  int nv = nvars();
  // convolve into an extended exponent cube (exponents < 2*deg - 1), then
  // reduce variable by variable using the monic moduli
  std::vector<int> edims(static_cast<size_t>(nv));
  int esize = 1;
  for (int v = 0; v < nv; ++v) {
    edims[static_cast<size_t>(v)] = 2 * degs_[static_cast<size_t>(v)] - 1;
    esize *= edims[static_cast<size_t>(v)];
  }
  std::vector<RingElem> ext(static_cast<size_t>(esize), RingElem::zero(base_));
  auto ext_index = [&](const std::vector<int>& exps) {
    int idx = 0;
    for (int v = nv - 1; v >= 0; --v)
      idx = idx * edims[static_cast<size_t>(v)] + exps[static_cast<size_t>(v)];
    return idx;
  };
  std::vector<int> ea(static_cast<size_t>(nv)), eb(static_cast<size_t>(nv)),
      ec(static_cast<size_t>(nv));
  for (int i = 0; i < rank_; ++i) {
    if (a[static_cast<size_t>(i)].is_zero()) continue;
    for (int v = 0; v < nv; ++v) ea[static_cast<size_t>(v)] = exp_of(i, v);
    for (int j = 0; j < rank_; ++j) {
      if (b[static_cast<size_t>(j)].is_zero()) continue;
      for (int v = 0; v < nv; ++v)
        ec[static_cast<size_t>(v)] = ea[static_cast<size_t>(v)] + exp_of(j, v);
      ext[static_cast<size_t>(ext_index(ec))] +=
          a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    }
  }
  // reduce each variable from the top down
  for (int v = 0; v < nv; ++v) {
    int deg = degs_[static_cast<size_t>(v)];
    for (int e = edims[static_cast<size_t>(v)] - 1; e >= deg; --e) {
      ensure_overflow(v, e - deg);
      const std::vector<RingElem>& red =
          overflow_[static_cast<size_t>(v)][static_cast<size_t>(e - deg)];
      // iterate over all positions with exponent e in variable v
      for (int idx = 0; idx < esize; ++idx) {
        // decode exponent of v at idx
        int rest = idx;
        for (int w = 0; w < v; ++w) rest /= edims[static_cast<size_t>(w)];
        int ev = rest % edims[static_cast<size_t>(v)];
        if (ev != e) continue;
        RingElem c = ext[static_cast<size_t>(idx)];
        if (c.is_zero()) continue;
        ext[static_cast<size_t>(idx)] = RingElem::zero(base_);
        // stride of variable v in the extended cube
        int vstride = 1;
        for (int w = 0; w < v; ++w) vstride *= edims[static_cast<size_t>(w)];
        int base_idx = idx - e * vstride;
        for (int i = 0; i < deg; ++i) {
          RingElem add = c * red[static_cast<size_t>(i)];
          if (!add.is_zero())
            ext[static_cast<size_t>(base_idx + i * vstride)] += add;
        }
      }
    }
  }
  // collect the reduced cube into the basis vector
  Elem r = zero();
  std::vector<int> ee(static_cast<size_t>(nv));
  for (int idx = 0; idx < esize; ++idx) {
    if (ext[static_cast<size_t>(idx)].is_zero()) continue;
    int rest = idx;
    bool in_range = true;
    for (int v = 0; v < nv; ++v) {
      ee[static_cast<size_t>(v)] = rest % edims[static_cast<size_t>(v)];
      rest /= edims[static_cast<size_t>(v)];
      if (ee[static_cast<size_t>(v)] >= degs_[static_cast<size_t>(v)]) in_range = false;
    }
    if (!in_range) throw Error("Algebra::mul: reduction left an overflow exponent");
    r[static_cast<size_t>(index_of(ee))] += ext[static_cast<size_t>(idx)];
  }
  return r;
}

Algebra::Elem Algebra::scale(const Elem& a, const RingElem& c) const {
  Elem r = a;
  for (auto& x : r) x = x * c;
  return r;
}

Algebra::Elem Algebra::pow(const Elem& a, uint64_t k) const {
  Elem r = one();
  Elem b = a;
  while (k) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

Algebra::Elem Algebra::eval_poly(const Series& poly, const Elem& at) const {
  Elem r = zero();
  int top = poly.degree();
  for (int i = top; i >= 0; --i) {  // Horner
    r = mul(r, at);
    RingElem c = poly.coeff(i);
    if (!c.is_zero()) r[0] += c;
  }
  return r;
}

Matrix Algebra::mult_matrix(const Elem& a) const {
  Matrix M(static_cast<size_t>(rank_),
           std::vector<RingElem>(static_cast<size_t>(rank_), RingElem::zero(base_)));
  for (int j = 0; j < rank_; ++j) {
    Elem basis = zero();
    basis[static_cast<size_t>(j)] = RingElem::one(base_);
    Elem col = mul(a, basis);
    for (int i = 0; i < rank_; ++i)
      M[static_cast<size_t>(i)][static_cast<size_t>(j)] = col[static_cast<size_t>(i)];
  }
  return M;
}

RingElem det_berkowitz(const Matrix& M, const RingSpec& base) {
  // Berkowitz division-free characteristic polynomial; the determinant is
  // (-1)^n times the constant coefficient
  int n = static_cast<int>(M.size());
  if (n == 0) return RingElem::one(base);
  std::vector<RingElem> poly{RingElem::one(base)};  // char poly coefficients
  // iterate principal minors
  for (int k = 1; k <= n; ++k) {
    // Toeplitz column from powers of the leading (k-1)x(k-1) block
    // c_0 = -1? use the classical formulation:
    // T entries: t_0 = 1, t_1 = -M[k-1][k-1], t_{j} = -(R * A^{j-2} * C)
    std::vector<RingElem> t(static_cast<size_t>(k + 1), RingElem::zero(base));
    t[0] = -RingElem::one(base);
    t[1] = M[static_cast<size_t>(k - 1)][static_cast<size_t>(k - 1)];
    if (k >= 2) {
      // R = row (M[k-1][0..k-2]), C = col (M[0..k-2][k-1]), A = leading block
      std::vector<RingElem> vec(static_cast<size_t>(k - 1));
      for (int i = 0; i < k - 1; ++i)
        vec[static_cast<size_t>(i)] = M[static_cast<size_t>(i)][static_cast<size_t>(k - 1)];
      for (int j = 2; j <= k; ++j) {
        // t_j = R * vec
        RingElem acc = RingElem::zero(base);
        for (int i = 0; i < k - 1; ++i)
          acc += M[static_cast<size_t>(k - 1)][static_cast<size_t>(i)] * vec[static_cast<size_t>(i)];
        t[static_cast<size_t>(j)] = acc;
        if (j < k) {
          // vec = A * vec
          std::vector<RingElem> nv(static_cast<size_t>(k - 1), RingElem::zero(base));
          for (int i = 0; i < k - 1; ++i)
            for (int l = 0; l < k - 1; ++l)
              nv[static_cast<size_t>(i)] +=
                  M[static_cast<size_t>(i)][static_cast<size_t>(l)] * vec[static_cast<size_t>(l)];
          vec = nv;
        }
      }
    }
    // poly = T * poly (Toeplitz multiply), sign convention: new but the
    // standard Berkowitz recursion uses t_0 = -1 and negates at the end
    std::vector<RingElem> np(static_cast<size_t>(k + 1), RingElem::zero(base));
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j < static_cast<int>(poly.size()); ++j) {
        if (i + j > k) break;
        np[static_cast<size_t>(i + j)] += t[static_cast<size_t>(i)] * poly[static_cast<size_t>(j)];
      }
    for (auto& c : np) c = -c;
    poly = np;
  }
  // poly now holds the characteristic polynomial coefficients
  // (poly[0] lambda^n + ... + poly[n]); det = (-1)^n poly[n] / poly[0]-sign
  RingElem det = poly[static_cast<size_t>(n)];
  if (n % 2 == 1) det = -det;
  // normalize against the leading coefficient sign (+-1)
  if (poly[0] == -RingElem::one(base)) det = -det;
  return det;
}

RingElem Algebra::norm(const Elem& a) const {
  return det_berkowitz(mult_matrix(a), base_);
}

Algebra::UnitCert Algebra::unit_certificate(const Elem& a) const {
  UnitCert cert;
  cert.det = norm(a);
  UnitCheck u = cert.det.is_unit_with_inverse();
  if (u.kind != UnitCheck::Unit) {
    cert.is_unit = false;
    return cert;
  }
  // invert by solving (mult by a) * x = 1
  Matrix M = mult_matrix(a);
  std::vector<RingElem> rhs(static_cast<size_t>(rank_), RingElem::zero(base_));
  rhs[0] = RingElem::one(base_);
  auto sol = linear_solve(M, rhs);
  if (sol.status != LinearSolveResult::Solved) {
    cert.is_unit = false;
    return cert;
  }
  Elem inv = from_coords(sol.solution);
  if (!equal(mul(a, inv), one())) {
    cert.is_unit = false;
    return cert;
  }
  cert.is_unit = true;
  cert.inverse = inv;
  return cert;
}

Algebra::MinPoly Algebra::minimal_polynomial(const Elem& a, int target_degree) const {
  // powers 1, a, ..., a^{target}; the target power must be the first one
  // dependent on the earlier ones
  std::vector<Elem> pows{one()};
  for (int i = 1; i <= target_degree; ++i) pows.push_back(mul(pows.back(), a));
  // dependence test for prefixes
  auto solve_prefix = [&](int deg) -> std::optional<std::vector<RingElem>> {
    Matrix M(static_cast<size_t>(rank_),
             std::vector<RingElem>(static_cast<size_t>(deg), RingElem::zero(base_)));
    std::vector<RingElem> rhs(static_cast<size_t>(rank_), RingElem::zero(base_));
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < deg; ++j)
        M[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            pows[static_cast<size_t>(j)][static_cast<size_t>(i)];
      rhs[static_cast<size_t>(i)] = -pows[static_cast<size_t>(deg)][static_cast<size_t>(i)];
    }
    auto sol = solve_linear_system(M, rhs);
    if (sol.status != LinearSolveResult::Solved) return std::nullopt;
    return sol.solution;
  };
  for (int deg = 1; deg < target_degree; ++deg) {
    if (solve_prefix(deg).has_value())
      return {MinPoly::DependenceTooEarly, {}, deg};
  }
  auto coeffs = solve_prefix(target_degree);
  if (!coeffs.has_value()) return {MinPoly::NoRelation, {}, -1};
  Series poly(base_, std::max(target_degree, 1));
  poly.set_coeff(target_degree, RingElem::one(base_));
  for (int j = 0; j < target_degree; ++j)
    poly.set_coeff(j, (*coeffs)[static_cast<size_t>(j)]);
  return {MinPoly::Ok, poly, target_degree};
}

Algebra::Elem Algebra::from_coords(const std::vector<RingElem>& c) const {
  if (static_cast<int>(c.size()) != rank_) throw Error("from_coords: size mismatch");
  return c;
}

bool Algebra::any_precision_loss(const Elem& a) const {
  for (const auto& c : a)
    if (c.precision_loss()) return true;
  return false;
}

Algebra::Elem det_berkowitz_alg(const Algebra& A,
                                const std::vector<std::vector<Algebra::Elem>>& M) {
  int n = static_cast<int>(M.size());
  if (n == 0) return A.one();
  using E = Algebra::Elem;
  std::vector<E> poly{A.one()};
  for (int k = 1; k <= n; ++k) {
    std::vector<E> t(static_cast<size_t>(k + 1), A.zero());
    t[0] = A.neg(A.one());
    t[1] = M[static_cast<size_t>(k - 1)][static_cast<size_t>(k - 1)];
    if (k >= 2) {
      std::vector<E> vec(static_cast<size_t>(k - 1));
      for (int i = 0; i < k - 1; ++i)
        vec[static_cast<size_t>(i)] = M[static_cast<size_t>(i)][static_cast<size_t>(k - 1)];
      for (int j = 2; j <= k; ++j) {
        E acc = A.zero();
        for (int i = 0; i < k - 1; ++i)
          acc = A.add(acc, A.mul(M[static_cast<size_t>(k - 1)][static_cast<size_t>(i)],
                                 vec[static_cast<size_t>(i)]));
        t[static_cast<size_t>(j)] = acc;
        if (j < k) {
          std::vector<E> nv(static_cast<size_t>(k - 1), A.zero());
          for (int i = 0; i < k - 1; ++i)
            for (int l = 0; l < k - 1; ++l)
              nv[static_cast<size_t>(i)] =
                  A.add(nv[static_cast<size_t>(i)],
                        A.mul(M[static_cast<size_t>(i)][static_cast<size_t>(l)],
                              vec[static_cast<size_t>(l)]));
          vec = nv;
        }
      }
    }
    std::vector<E> np(static_cast<size_t>(k + 1), A.zero());
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j < static_cast<int>(poly.size()); ++j) {
        if (i + j > k) break;
        np[static_cast<size_t>(i + j)] =
            A.add(np[static_cast<size_t>(i + j)],
                  A.mul(t[static_cast<size_t>(i)], poly[static_cast<size_t>(j)]));
      }
    for (auto& c : np) c = A.neg(c);
    poly = np;
  }
  E det = poly[static_cast<size_t>(n)];
  if (n % 2 == 1) det = A.neg(det);
  if (A.equal(poly[0], A.neg(A.one()))) det = A.neg(det);
  return det;
}

}  // namespace transchar
