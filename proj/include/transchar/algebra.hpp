/****************************************************************
 * Finite free quotient algebras
 *   R[x_1,...,x_r] / (m_1(x_1), ..., m_r(x_r))
 * for monic one-variable moduli m_i over a RingSpec base, with the
 * linear algebra the torsion and character modules run on:
 * multiplication matrices, division-free determinants (Berkowitz),
 * minimal polynomials by linear solve, and unit certification.
 *
 * Elements are dense coefficient vectors over the monomial basis
 * x_1^{e_1}...x_r^{e_r}, e_i < deg m_i.
 ****************************************************************/
#pragma once

#include "transchar/series.hpp"

namespace transchar {

class Algebra {
public:
  using Elem = std::vector<RingElem>;

  Algebra() = default;
  Algebra(RingSpec base, std::vector<Series> moduli);

  const RingSpec& base() const { return base_; }
  int nvars() const { return static_cast<int>(moduli_.size()); }
  const Series& modulus(int v) const { return moduli_[static_cast<size_t>(v)]; }
  int rank() const { return rank_; }

  Elem zero() const;
  Elem one() const;
  Elem scalar(const RingElem& c) const;
  Elem gen(int v, int power = 1) const;  // x_v^power reduced
  bool is_zero(const Elem& e) const;
  bool equal(const Elem& a, const Elem& b) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, const RingElem& c) const;
  Elem pow(const Elem& a, uint64_t k) const;

  // substitute the element into a one-variable polynomial
  Elem eval_poly(const Series& poly, const Elem& at) const;

  // the matrix of multiplication by a over the monomial basis
  Matrix mult_matrix(const Elem& a) const;

  // determinant of multiplication by a (the algebra norm)
  RingElem norm(const Elem& a) const;

  struct UnitCert {
    bool is_unit = false;
    RingElem det;            // norm of the element
    std::optional<Elem> inverse;  // exact inverse when certified
  };
  // certifies unit-ness via the norm and produces an exact inverse by
  // linear solve; mul(a, inverse) == 1 re-verified
  UnitCert unit_certificate(const Elem& a) const;

  struct MinPoly {
    enum Status { Ok, DependenceTooEarly, NoRelation } status;
    Series poly;  // monic
    int degree = -1;
  };
  // least monic polynomial of the given degree satisfied by a; fails with
  // DependenceTooEarly if the powers become dependent below target_degree
  MinPoly minimal_polynomial(const Elem& a, int target_degree) const;

  // coordinates of an element as a column over the base ring
  std::vector<RingElem> coords(const Elem& a) const { return a; }
  Elem from_coords(const std::vector<RingElem>& c) const;

  // monomial-basis exponent of index i for variable v
  int exp_of(int index, int v) const;
  int index_of(const std::vector<int>& exps) const;

  bool any_precision_loss(const Elem& a) const;

private:
  RingSpec base_;
  std::vector<Series> moduli_;
  std::vector<int> degs_;
  std::vector<int> strides_;
  int rank_ = 0;

  // x_v^{deg_v + j} reduced to the basis, cached per variable
  mutable std::vector<std::vector<std::vector<RingElem>>> overflow_;
  void ensure_overflow(int v, int j) const;
};

// division-free determinant (Berkowitz) over any commutative "ring view";
// instantiated for RingElem matrices and for Algebra-element matrices
RingElem det_berkowitz(const Matrix& M, const RingSpec& base);
Algebra::Elem det_berkowitz_alg(const Algebra& A,
                                const std::vector<std::vector<Algebra::Elem>>& M);

}  // namespace transchar
