#pragma once

#include <optional>
#include <vector>

#include "maxorder/finform.hpp"
#include "maxorder/localize.hpp"
#include "maxorder/order.hpp"

namespace maxorder {

enum class Tame { ProvedByDimension, ProvedExact, Wild };
enum class Method { AlreadyMaximal, Theorem2, Theorem3, TheoremNano, TheoremMain5iii, OracleFallback };

inline const char* to_string(Tame t) {
  switch (t) {
    case Tame::ProvedByDimension: return "ProvedByDimension";
    case Tame::ProvedExact: return "ProvedExact";
    default: return "Wild";
  }
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::AlreadyMaximal: return "AlreadyMaximal";
    case Method::Theorem2: return "Theorem2";
    case Method::Theorem3: return "Theorem3";
    case Method::TheoremNano: return "TheoremNano";
    case Method::TheoremMain5iii: return "TheoremMain5iii";
    default: return "OracleFallback";
  }
}

struct PrimeReport {
  Int p;
  Tame tame = Tame::Wild;
  std::vector<std::vector<unsigned>> exps_per_ideal;  // empty for table-only orders
  std::vector<unsigned> exps_global;
  Anisotropy anisotropy = Anisotropy::Undetermined;
  Method method = Method::OracleFallback;
  Lattice closure_p;
  Int index_p = 1;
  bool certified = false;
};

/// p-maximality for a tame order: no elementary divisor exceeds p^1
inline bool maximality_test_tame(const FiniteFormModule& B) {
  for (unsigned e : B.exps)
    if (e > 1) return false;
  return true;
}

/// the multiplier ring {x : x·ideal ⊆ ideal}
inline Lattice idealizer(const Lattice& ideal) { return colon(ideal, ideal); }

/// radical-idealizer chain A = L_0 ⊂ L_1 ⊂ … up to its fixpoint, the
/// p-maximal overorder
inline std::vector<Lattice> p_closure_chain(const TableOrder& A, const Int& p) {
  Int disc = abs(A.discriminant());
  unsigned long vp = 0;
  while (disc % p == 0) {
    disc /= p;
    ++vp;
  }
  const unsigned long bound = vp / 2 + 1;

  std::vector<Lattice> chain{unit_lattice(A)};
  for (;;) {
    const Lattice& L = chain.back();
    SubOrder S = as_suborder(A, L);
    Lattice Jloc = radical_mod_p(S.order, p);
    Lattice J = S.to_ambient(Jloc.den, Jloc.basis);
    Lattice next = idealizer(J);
    if (next == L) break;
    if (!lattice_subset(L, next) || lattice_index(L, next) == 1)
      throw Error("p_closure_chain: idealizer step not an enlargement");
    chain.push_back(next);
    if (chain.size() > bound + 1) throw IterationBound("p_closure_chain: too many enlargements");
  }
  return chain;
}

inline Lattice p_closure_oracle(const TableOrder& A, const Int& p) {
  return p_closure_chain(A, p).back();
}

/// every order in the radical-idealizer chain is tame in the exact sense
inline bool chain_is_tame(const TableOrder& A, const Int& p) {
  for (const Lattice& L : p_closure_chain(A, p))
    if (!is_tame_exact(as_suborder(A, L).order, p)) return false;
  return true;
}

struct LrEnlargement {
  Lattice lattice;       // ring generated by A and the lifted lower root
  bool ring_check;       // A + lifted lower root was already multiplicatively closed
};

/// lift lower_root(B_p) into Q(A) and adjoin it to A
inline LrEnlargement lr_enlargement(const TableOrder& A, const Int& p) {
  FormWithLifts B = form_from_quotient(A, p);
  const std::size_t r = B.M.rank(), n = A.n;
  RatMat rows(n + r, n);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = 1;
  for (std::size_t i = 0; i < r; ++i) {
    Rat scale(pow_int(B.M.p, (B.M.exps[i] + 1) / 2));
    for (std::size_t j = 0; j < n; ++j) rows(n + i, j) = scale * B.lifts(i, j);
  }
  Lattice D = lattice_from_rat_rows(A, rows);
  bool closed = lattice_subset(lattice_product(D, D), D);
  return LrEnlargement{closed ? D : ring_generated(A, D), closed};
}

/// Theorem 3 shape test on one maximal ideal: with n(i) the number of cyclic
/// factors of exponent i and d the residue degree, requires p > Σ n(i) and
/// nonzero multiplicities confined to {1, i₁, i₂} with i₁ ≢ i₂ (mod 2) and
/// n(i₁), n(i₂) ∈ {0, d}
inline bool theorem3_condition(const Int& p, const std::vector<unsigned>& comp_exps, unsigned d) {
  if (p <= static_cast<long>(comp_exps.size())) return false;
  std::vector<std::pair<unsigned, unsigned>> sup2;  // (exponent, multiplicity), exponents >= 2
  for (std::size_t k = 0; k < comp_exps.size();) {
    std::size_t k2 = k;
    while (k2 < comp_exps.size() && comp_exps[k2] == comp_exps[k]) ++k2;
    if (comp_exps[k] >= 2) sup2.emplace_back(comp_exps[k], static_cast<unsigned>(k2 - k));
    k = k2;
  }
  if (sup2.size() > 2) return false;
  if (sup2.size() == 2)
    return (sup2[0].first + sup2[1].first) % 2 == 1 && sup2[0].second == d && sup2[1].second == d;
  if (sup2.size() == 1) return sup2[0].second == d;
  return true;
}

struct CertifyOptions {
  std::uint64_t seed = 0;
  bool fast = false;  // skip the oracle cross-check for certified methods
};

inline PrimeReport certify_closure_at_p(const TableOrder& A, const Int& p,
                                        const CertifyOptions& opts = {}) {
  PrimeReport rep;
  rep.p = p;
  rep.closure_p = unit_lattice(A);

  FormWithLifts B = form_from_quotient(A, p);
  rep.exps_global = B.M.exps;

  // tameness evidence
  std::optional<SplitData> split;
  if (A.source_poly) {
    split = split_maximal_ideals(A, p, B, opts.seed);
    rep.exps_per_ideal = split->exps_per_ideal;
  }
  if (split && tame_dim_test(*split))
    rep.tame = Tame::ProvedByDimension;
  else if (is_tame_exact(A, p))
    rep.tame = Tame::ProvedExact;
  else
    rep.tame = Tame::Wild;

  const bool tame_proved = rep.tame != Tame::Wild;
  bool done = false;

  if (B.M.rank() == 0) {
    rep.method = Method::AlreadyMaximal;
    rep.certified = true;
    done = true;
  } else if (tame_proved && maximality_test_tame(B.M)) {
    rep.method = Method::AlreadyMaximal;
    rep.certified = true;
    done = true;
  }

  if (!done && tame_proved && p != 2) {
    rep.anisotropy = anisotropy_status(B.M);
    if (rep.anisotropy == Anisotropy::Anisotropic) {
      // closure = A + lifted lower root; under exact-only tameness the
      // stronger hypotheses must be verified directly
      bool ok = true;
      Method method = Method::Theorem2;
      if (rep.tame != Tame::ProvedByDimension) {
        method = Method::TheoremMain5iii;
        Submodule lr = lower_root(B.M);
        Submodule P = orthocomplement(B.M, lr);
        IntMat scaled(P.h.rows, P.h.cols);
        for (std::size_t i = 0; i < P.h.rows; ++i)
          for (std::size_t j = 0; j < P.h.cols; ++j) scaled(i, j) = p * P.h(i, j);
        ok = submodule_subset(submodule_from_rows(B.M, scaled), lr);
      }
      if (ok) {
        LrEnlargement en = lr_enlargement(A, p);
        if (rep.tame != Tame::ProvedByDimension &&
            !is_tame_exact(as_suborder(A, en.lattice).order, p))
          ok = false;
        if (ok) {
          rep.method = method;
          rep.closure_p = en.lattice;
          rep.certified = true;
          done = true;
        }
      }
    } else if (rep.anisotropy == Anisotropy::QuasiAnisotropic) {
      bool ok = rep.tame == Tame::ProvedByDimension || chain_is_tame(A, p);
      if (ok) {
        LrEnlargement en = lr_enlargement(A, p);
        rep.method = Method::TheoremNano;
        rep.closure_p = en.lattice;
        rep.certified = true;
        done = true;
      }
    }
    if (!done && split) {
      bool ok = true;
      for (std::size_t m = 0; m < split->ideal_count() && ok; ++m)
        ok = theorem3_condition(p, split->exps_per_ideal[m], split->residue_degrees[m]);
      if (ok) {
        LrEnlargement en = lr_enlargement(A, p);
        rep.method = Method::Theorem3;
        rep.closure_p = en.lattice;
        rep.certified = true;
        done = true;
      }
    }
  }

  if (!done) {
    rep.method = Method::OracleFallback;
    rep.closure_p = p_closure_oracle(A, p);
    rep.certified = false;
  } else if (!opts.fast && rep.method != Method::AlreadyMaximal) {
    if (rep.closure_p != p_closure_oracle(A, p))
      throw Error("certify_closure_at_p: certified lattice disagrees with the oracle");
  } else if (!opts.fast && rep.method == Method::AlreadyMaximal && B.M.rank() != 0) {
    if (p_closure_oracle(A, p) != unit_lattice(A))
      throw Error("certify_closure_at_p: maximality claim disagrees with the oracle");
  }

  rep.index_p = lattice_index(unit_lattice(A), rep.closure_p);
  return rep;
}

/// union of the local closures; reports must cover required_primes
inline Lattice glue_closure(const TableOrder& A, const std::vector<PrimeReport>& reports,
                            const std::vector<Int>& required_primes) {
  for (const Int& p : required_primes) {
    bool found = false;
    for (const auto& r : reports) found = found || r.p == p;
    if (!found) throw IncompleteCover("glue_closure: missing report for a square-divisor prime");
  }
  Lattice acc = unit_lattice(A);
  for (const auto& r : reports) acc = lattice_sum(acc, r.closure_p);
  return acc;
}

}  // namespace maxorder
