#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relcoh/fg_group.hpp"
#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"
#include "relcoh/smith.hpp"

namespace relcoh {

/// Homomorphism between canonical groups, acting on column vectors in the
/// canonical generator coordinates (torsion generators, then free ones).
class AbHom {
 public:
  AbHom(FgAbGroup source, FgAbGroup target, ExactMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.generator_count() || matrix_.cols() != source_.generator_count())
      throw std::invalid_argument("homomorphism matrix has the wrong shape");
    auto src = source_.relation_orders();
    auto dst = target_.relation_orders();
    for (std::size_t j = 0; j < src.size(); ++j) {
      for (std::size_t i = 0; i < dst.size(); ++i) {
        Integer image = matrix_.at(i, j) * src[j];
        bool ok = dst[i].is_zero() ? image.is_zero() : (image % dst[i]).is_zero();
        if (!ok) throw std::invalid_argument("homomorphism matrix does not respect relations");
      }
    }
  }

  static AbHom identity(const FgAbGroup& g) {
    return AbHom(g, g, ExactMatrix::identity(g.generator_count()));
  }

  const FgAbGroup& source() const noexcept { return source_; }
  const FgAbGroup& target() const noexcept { return target_; }
  const ExactMatrix& matrix() const noexcept { return matrix_; }

 private:
  FgAbGroup source_;
  FgAbGroup target_;
  ExactMatrix matrix_;
};

/// Result of a direct limit lim(c, phi).
struct LimitOutcome {
  enum class Kind { finitely_generated, non_finitely_generated };
  Kind kind = Kind::finitely_generated;
  FgAbGroup group;  // meaningful when finitely generated

  // Witness for the non-finitely-generated case: a saturated sublattice of the
  // free coordinates that the map preserves, and the map restricted to it.
  std::vector<IntVector> witness_basis;
  ExactMatrix witness_action;
  // Optional level-by-level description (used by the rational eigenvalue group).
  std::vector<FgAbGroup> levels;

  bool finitely_generated() const noexcept { return kind == Kind::finitely_generated; }
};

namespace detail {

/// Diagonal relation matrix of a canonical group.
inline ExactMatrix relation_matrix(const FgAbGroup& g) {
  auto orders = g.relation_orders();
  return ExactMatrix::diagonal(orders.size(), orders.size(), orders);
}

/// Columns of a matrix as vectors.
inline std::vector<IntVector> columns(const ExactMatrix& m) {
  std::vector<IntVector> out(m.cols(), IntVector(m.rows()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    m.for_each_in_row(i, [&](std::size_t j, const Integer& x) { out[j][i] = x; });
  return out;
}

inline ExactMatrix from_columns(std::size_t nrows, const std::vector<IntVector>& cols) {
  std::vector<IntVector> rows(nrows, IntVector(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < nrows; ++i) rows[i][j] = cols[j][i];
  return ExactMatrix::from_rows(nrows, cols.size(), rows);
}

/// Structure of L / N for lattices N <= L in Z^n given by spanning vectors.
inline FgAbGroup subquotient(std::size_t n, const std::vector<IntVector>& l_gens, const std::vector<IntVector>& n_gens) {
  auto l_basis = hermite_rows(l_gens, n);
  ExactMatrix lb = from_columns(n, l_basis);
  std::vector<IntVector> coords;
  for (const auto& v : n_gens) {
    auto x = solve_integer(lb, v);
    if (!x) throw std::logic_error("subquotient: N is not contained in L");
    coords.push_back(*x);
  }
  return cokernel_structure(from_columns(l_basis.size(), coords));
}

/// Kernel of a homomorphism between presented groups
/// Z^s / im(rel_src) -> Z^t / im(rel_dst) given by phi (t x s).
inline FgAbGroup presented_kernel(const ExactMatrix& phi, const ExactMatrix& rel_src, const ExactMatrix& rel_dst) {
  std::size_t s = phi.cols(), t = phi.rows();
  // x lies in the preimage iff [phi | rel_dst] (x; y) = 0 for some y.
  std::vector<IntVector> rows(t, IntVector(s + rel_dst.cols()));
  for (std::size_t i = 0; i < t; ++i) {
    phi.for_each_in_row(i, [&](std::size_t j, const Integer& v) { rows[i][j] = v; });
    rel_dst.for_each_in_row(i, [&](std::size_t j, const Integer& v) { rows[i][s + j] = v; });
  }
  auto ker = kernel_basis(ExactMatrix::from_rows(t, s + rel_dst.cols(), rows));
  std::vector<IntVector> preimage;
  for (auto& v : ker) preimage.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(s));
  return subquotient(s, preimage, columns(rel_src));
}

/// Kronecker product with an identity: a (x) I_k.
inline ExactMatrix kron_identity(const ExactMatrix& a, std::size_t k) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    a.for_each_in_row(i, [&](std::size_t j, const Integer& x) {
      for (std::size_t l = 0; l < k; ++l) t.push_back({i * k + l, j * k + l, x});
    });
  return ExactMatrix::from_triplets(a.rows() * k, a.cols() * k, std::move(t));
}

/// Block-diagonal relation matrix of g^copies.
inline ExactMatrix power_relations(const FgAbGroup& g, std::size_t copies) {
  auto orders = g.relation_orders();
  IntVector diag;
  for (std::size_t c = 0; c < copies; ++c) diag.insert(diag.end(), orders.begin(), orders.end());
  return ExactMatrix::diagonal(diag.size(), diag.size(), diag);
}

inline void require_finite(const FgAbGroup& g, const char* what) {
  if (!g.is_finite()) throw std::domain_error(std::string(what) + ": group must be finite");
}

}  // namespace detail

inline FgAbGroup torsion_part(const FgAbGroup& g) { return FgAbGroup(g.invariant_factors()); }

/// Character group of a finite abelian group (isomorphic to it).
inline FgAbGroup dual_finite(const FgAbGroup& g) {
  detail::require_finite(g, "dual_finite");
  return FgAbGroup(g.invariant_factors());
}

/// Hom(a, b) for finite a, via the resolution 0 -> Z^k -(diag a_i)-> Z^k -> a -> 0:
/// Hom(a, b) = ker(b^k -> b^k, component i multiplied by a_i).
inline FgAbGroup hom_structure(const FgAbGroup& a, const FgAbGroup& b) {
  detail::require_finite(a, "hom_structure");
  const auto& orders = a.invariant_factors();
  std::size_t k = orders.size(), nb = b.generator_count();
  IntVector scale;
  for (const auto& ai : orders) scale.insert(scale.end(), nb, ai);
  ExactMatrix phi = ExactMatrix::diagonal(k * nb, k * nb, scale);
  ExactMatrix rel = detail::power_relations(b, k);
  return detail::presented_kernel(phi, rel, rel);
}

/// Ext(g, Z) for finite g: cokernel of the dual of the resolution map.
inline FgAbGroup ext_z(const FgAbGroup& g) {
  detail::require_finite(g, "ext_z");
  return cokernel_structure(detail::relation_matrix(g).transpose());
}

/// Tor(m, g) for finite g: kernel of (A (x) m -> B (x) m) from the resolution of g.
inline FgAbGroup tor(const FgAbGroup& m, const FgAbGroup& g) {
  detail::require_finite(g, "tor");
  const auto& orders = g.invariant_factors();
  std::size_t k = orders.size(), nm = m.generator_count();
  // A (x) m = m^k, and the resolution map i = diag(g_i) tensors to a block
  // diagonal map whose block i multiplies m by g_i.
  IntVector scale;
  for (const auto& gi : orders) scale.insert(scale.end(), nm, gi);
  ExactMatrix i_tensor = ExactMatrix::diagonal(k * nm, k * nm, scale);
  ExactMatrix rel = detail::power_relations(m, k);
  return detail::presented_kernel(i_tensor, rel, rel);
}

/// ker(j (x) id_g) for j between free groups and finite g.
inline FgAbGroup ker_tensor(const AbHom& j, const FgAbGroup& g) {
  if (!j.source().invariant_factors().empty() || !j.target().invariant_factors().empty())
    throw std::domain_error("ker_tensor: source and target must be torsion-free");
  detail::require_finite(g, "ker_tensor");
  std::size_t k = g.generator_count();
  ExactMatrix phi = detail::kron_identity(j.matrix(), k);
  return detail::presented_kernel(phi, detail::power_relations(g, j.source().free_rank()),
                                  detail::power_relations(g, j.target().free_rank()));
}

/// Cokernel of a homomorphism between canonical groups.
inline FgAbGroup hom_cokernel(const AbHom& h) {
  std::size_t t = h.target().generator_count();
  auto rel = detail::relation_matrix(h.target());
  std::vector<IntVector> rows(t, IntVector(h.source().generator_count() + t));
  std::size_t s = h.source().generator_count();
  for (std::size_t i = 0; i < t; ++i) {
    h.matrix().for_each_in_row(i, [&](std::size_t j, const Integer& v) { rows[i][j] = v; });
    rows[i][s + i] = rel.at(i, i);
  }
  return cokernel_structure(ExactMatrix::from_rows(t, s + t, rows));
}

inline FgAbGroup hom_kernel(const AbHom& h) {
  return detail::presented_kernel(h.matrix(), detail::relation_matrix(h.source()), detail::relation_matrix(h.target()));
}

/// Direct limit of c -> c -> c -> ... under phi.
///
/// Iterates images L_{k+1} = phi(L_k) + relations, compared by Hermite form.
/// Once the image is stable, phi is onto it and hence an automorphism of it
/// (a surjective endomorphism of a finitely generated abelian group is
/// injective), so the limit is that image. Iteration is capped at
/// gens * (bits of the largest invariant factor + 64) steps; beyond that the
/// limit is reported as not finitely generated, with the saturated rational
/// eventual image and phi acting on it as witness.
inline LimitOutcome direct_limit_endo(const FgAbGroup& c, const AbHom& phi) {
  if (!(phi.source() == c) || !(phi.target() == c)) throw std::invalid_argument("direct_limit_endo: phi must be an endomorphism of c");
  std::size_t n = c.generator_count();
  auto rel_cols = detail::columns(detail::relation_matrix(c));
  auto lattice_with_relations = [&](std::vector<IntVector> gens) {
    gens.insert(gens.end(), rel_cols.begin(), rel_cols.end());
    return hermite_rows(std::move(gens), n);
  };

  std::vector<IntVector> current = lattice_with_relations(detail::columns(ExactMatrix::identity(n)));
  std::size_t cap = n * (c.exponent().bit_length() + 64);
  for (std::size_t step = 0; step <= cap; ++step) {
    std::vector<IntVector> images;
    for (const auto& v : current) images.push_back(phi.matrix() * v);
    auto next = lattice_with_relations(std::move(images));
    if (next == current) {
      LimitOutcome out;
      out.group = detail::subquotient(n, current, rel_cols);
      return out;
    }
    current = std::move(next);
  }

  // Witness: saturate the image inside the free coordinates.
  LimitOutcome out;
  out.kind = LimitOutcome::Kind::non_finitely_generated;
  std::size_t t = c.invariant_factors().size();
  std::size_t r = c.free_rank();
  std::vector<IntVector> free_part;
  for (const auto& v : current) free_part.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(t), v.end());
  ExactMatrix span = ExactMatrix::from_rows(free_part.size(), r, free_part);
  auto perp = kernel_basis(span);  // rational complement of the image
  ExactMatrix perp_m = ExactMatrix::from_rows(perp.size(), r, perp);
  auto saturated = kernel_basis(perp_m);
  out.witness_basis = saturated;
  // Action of the free block of phi on the saturated basis.
  std::vector<IntVector> phi_free(r, IntVector(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) phi_free[i][j] = phi.matrix().at(t + i, t + j);
  ExactMatrix pf = ExactMatrix::from_rows(r, r, phi_free);
  ExactMatrix basis = detail::from_columns(r, saturated);
  std::vector<IntVector> action_cols;
  for (const auto& b : saturated) {
    auto x = solve_integer(basis, pf * b);
    if (!x) throw std::logic_error("direct_limit_endo: witness lattice is not invariant");
    action_cols.push_back(*x);
  }
  out.witness_action = detail::from_columns(saturated.size(), action_cols);
  return out;
}

}  // namespace relcoh
