#pragma once

#include <optional>
#include <string>

#include "devissage/colgroup.hpp"
#include "devissage/lmap.hpp"

namespace devissage {

/// Lattice: a finitely generated module with its own coordinates.
/// Group: a cofinitely generated group; a finite group uses its own
/// coordinates and a divisible group (Q_l/Z_l)^n uses n column coordinates.
enum class CarrierKind { Lattice, Group };

/// Galois module over a finite field with q elements.
///
/// The stored operator is the arithmetic Frobenius numerator / q^denom,
/// acting on coordinate columns of the carrier representative.  On
/// Z/l^n(1) it is multiplication by q.
class FrobObject {
public:
  FrobObject(CarrierKind kind, LModule rep, IntMatrix numerator, unsigned denom,
             Integer q, std::optional<int> weight_tag = {})
      : kind_(kind), rep_(std::move(rep)), num_(std::move(numerator)), denom_(denom),
        q_(std::move(q)), weight_(weight_tag) {
    const Integer &ell = rep_.prime();
    if (q_ < 2 || q_ % ell == 0)
      throw MismatchedBase("base cardinality " + q_.str() + " is not prime to " + ell.str());
    if (kind_ == CarrierKind::Group && !rep_.is_free() && !rep_.is_finite())
      throw UnsupportedCarrier("group carriers must be divisible or finite, got " +
                               group_str(rep_));
    LMap f(rep_, rep_, num_);
    num_ = f.matrix();
    if (!is_isomorphism(f)) throw NotWellDefined("Frobenius is not invertible");
  }

  /// Z/l^n(r) with r >= 0 or r < 0.
  static FrobObject cyclotomic(const Integer &ell, unsigned n, int r, const Integer &q) {
    return FrobObject(CarrierKind::Group, LModule::cyclic(ell, n), IntMatrix{{Integer(1)}}, 0, q)
        .twisted(r);
  }
  /// Q_l/Z_l(r).
  static FrobObject qz(const Integer &ell, int r, const Integer &q) {
    return FrobObject(CarrierKind::Group, LModule::free(ell, 1), IntMatrix{{Integer(1)}}, 0, q)
        .twisted(r);
  }
  /// Z_l(r).
  static FrobObject zl(const Integer &ell, int r, const Integer &q) {
    return FrobObject(CarrierKind::Lattice, LModule::free(ell, 1), IntMatrix{{Integer(1)}}, 0, q)
        .twisted(r);
  }
  /// Trivial action on any carrier.
  static FrobObject trivial(CarrierKind kind, const LModule &rep, const Integer &q) {
    return {kind, rep, IntMatrix::identity(rep.ngens()), 0, q};
  }

  [[nodiscard]] CarrierKind kind() const { return kind_; }
  [[nodiscard]] const LModule &rep() const { return rep_; }
  [[nodiscard]] const IntMatrix &numerator() const { return num_; }
  [[nodiscard]] unsigned denom_exponent() const { return denom_; }
  [[nodiscard]] const Integer &q() const { return q_; }
  [[nodiscard]] const Integer &prime() const { return rep_.prime(); }
  [[nodiscard]] std::optional<int> weight_tag() const { return weight_; }
  [[nodiscard]] std::size_t dim() const { return rep_.ngens(); }
  [[nodiscard]] bool is_divisible_group() const {
    return kind_ == CarrierKind::Group && rep_.is_free();
  }

  /// The carrier as a group (Group kind only).
  [[nodiscard]] CoLGroup group() const {
    if (kind_ != CarrierKind::Group) throw UnsupportedCarrier("carrier is a lattice");
    return rep_.is_free() ? CoLGroup::divisible(prime(), rep_.free_rank()) : CoLGroup(rep_);
  }

  /// numerator - q^denom: a unit multiple of (Frobenius - 1).
  [[nodiscard]] LMap cohomology_operator() const {
    return {rep_, rep_, num_ - ipow(q_, denom_) * IntMatrix::identity(dim())};
  }
  [[nodiscard]] LMap numerator_map() const { return {rep_, rep_, num_}; }

  /// The Frobenius matrix with q^{-1} evaluated modulo ell^n.
  [[nodiscard]] IntMatrix frobenius_mod(unsigned n) const {
    const Integer m = ipow(prime(), n);
    const Integer c = ipow(inverse_mod(q_, m), denom_);
    IntMatrix out = num_;
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = mod_floor(out(i, j) * c, m);
    return out;
  }

  /// Same carrier with the Frobenius multiplied by q^r.
  [[nodiscard]] FrobObject twisted(int r) const {
    FrobObject x = *this;
    if (r >= 0) {
      x.num_ = ipow(q_, static_cast<unsigned>(r)) * num_;
      x.num_ = LMap(rep_, rep_, x.num_).matrix();
    } else {
      x.denom_ += static_cast<unsigned>(-r);
    }
    if (x.weight_) *x.weight_ += 2 * r;
    return x;
  }

  /// Equality of carriers and of Frobenius as ell-adic operators.
  [[nodiscard]] bool same_as(const FrobObject &o) const {
    if (kind_ != o.kind_ || rep_ != o.rep_ || q_ != o.q_) return false;
    IntMatrix a = ipow(q_, o.denom_) * num_, b = ipow(q_, denom_) * o.num_;
    return LMap(rep_, rep_, a) == LMap(rep_, rep_, b);
  }

  [[nodiscard]] std::string carrier_str() const {
    return kind_ == CarrierKind::Lattice ? rep_.str() : group().str();
  }

private:
  CarrierKind kind_;
  LModule rep_;
  IntMatrix num_;
  unsigned denom_ = 0;
  Integer q_;
  std::optional<int> weight_;
};

inline FrobObject twist(const FrobObject &x, int r) { return x.twisted(r); }

/// Box (group carriers) or tensor (lattice carriers) with the Kronecker
/// Frobenius.
inline FrobObject box_frob(const FrobObject &x, const FrobObject &y) {
  if (x.q() != y.q()) throw MismatchedBase(x.q().str() + " vs " + y.q().str());
  require_same_prime(x.rep(), y.rep());
  if (x.kind() != y.kind()) throw UnsupportedCarrier("box of a lattice with a group");
  LMap k = tensor_map(x.numerator_map(), y.numerator_map());
  std::optional<int> w;
  if (x.weight_tag() && y.weight_tag()) w = *x.weight_tag() + *y.weight_tag();
  return {x.kind(), k.domain(), k.matrix(), x.denom_exponent() + y.denom_exponent(), x.q(), w};
}

inline FrobObject box_frob_power(const FrobObject &x, unsigned n) {
  FrobObject r = x.kind() == CarrierKind::Group ? FrobObject::qz(x.prime(), 0, x.q())
                                                  : FrobObject::zl(x.prime(), 0, x.q());
  for (unsigned i = 0; i < n; ++i) r = box_frob(r, x);
  return r;
}

} // namespace devissage
