#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxorder/closure.hpp"
#include "maxorder/factorint.hpp"

namespace maxorder {

struct AnalyzeOptions {
  std::optional<Int> prime;  // restrict to a single prime
  std::uint64_t seed = 0;
  bool fast = false;
};

struct AnalysisReport {
  std::string input_echo;
  Int disc;
  Factorization disc_factors;
  std::vector<Int> dual_divisors;  // nontrivial elementary divisors of A†/A
  std::vector<PrimeReport> primes;
  Lattice closure;
  bool certified = false;
  bool factorization_complete = true;
};

inline AnalysisReport analyze(const TableOrder& A, const std::string& echo,
                              const AnalyzeOptions& opts = {}) {
  AnalysisReport rep;
  rep.input_echo = echo;
  rep.disc = A.discriminant();
  rep.disc_factors = factor(rep.disc);
  rep.factorization_complete = rep.disc_factors.unresolved == 1;

  for (const Int& d : quotient_presentation(unit_lattice(A), trace_dual(A)).divisors)
    if (d != 1) rep.dual_divisors.push_back(d);

  std::vector<Int> targets;
  if (opts.prime) {
    if (!is_prime(*opts.prime)) throw Error("analyze: --prime argument is not prime");
    targets.push_back(*opts.prime);
  } else {
    for (const auto& [p, e] : rep.disc_factors.factors)
      if (e >= 2) targets.push_back(p);
  }

  CertifyOptions copts;
  copts.seed = opts.seed;
  copts.fast = opts.fast;
  for (const Int& p : targets) rep.primes.push_back(certify_closure_at_p(A, p, copts));

  std::vector<Int> required = opts.prime ? std::vector<Int>{} : targets;
  rep.closure = glue_closure(A, rep.primes, required);

  rep.certified = rep.factorization_complete;
  for (const auto& r : rep.primes) rep.certified = rep.certified && r.certified;
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::string istr(const Int& n) { return n.get_str(); }

inline nlohmann::ordered_json lattice_json(const Lattice& L) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < L.basis.rows; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < L.basis.cols; ++j) row.push_back(istr(L.basis(i, j)));
    rows.push_back(std::move(row));
  }
  return nlohmann::ordered_json{{"den", istr(L.den)}, {"rows", std::move(rows)}};
}

}  // namespace detail

inline nlohmann::ordered_json report_json(const AnalysisReport& rep) {
  using json = nlohmann::ordered_json;
  json out;
  out["schema"] = 1;
  out["input"] = rep.input_echo;
  json factors = json::array();
  for (const auto& [p, e] : rep.disc_factors.factors)
    factors.push_back(json::array({detail::istr(p), e}));
  out["disc"] = json{{"value", detail::istr(rep.disc)},
                     {"factors", std::move(factors)},
                     {"unresolved", detail::istr(rep.disc_factors.unresolved)}};
  json divisors = json::array();
  for (const Int& d : rep.dual_divisors) divisors.push_back(detail::istr(d));
  out["dual_quotient_divisors"] = std::move(divisors);
  json primes = json::array();
  for (const auto& r : rep.primes) {
    json exps = json::array();
    for (const auto& comp : r.exps_per_ideal) {
      json c = json::array();
      for (unsigned e : comp) c.push_back(e);
      exps.push_back(std::move(c));
    }
    primes.push_back(json{{"p", detail::istr(r.p)},
                          {"tame", to_string(r.tame)},
                          {"exps_per_ideal", std::move(exps)},
                          {"anisotropy", to_string(r.anisotropy)},
                          {"method", to_string(r.method)},
                          {"certified", r.certified},
                          {"index", detail::istr(r.index_p)},
                          {"closure_basis", detail::lattice_json(r.closure_p)}});
  }
  out["primes"] = std::move(primes);
  out["closure"] = detail::lattice_json(rep.closure);
  out["certified"] = rep.certified;
  return out;
}

inline std::string report_text(const AnalysisReport& rep) {
  std::ostringstream os;
  os << "input: " << rep.input_echo << "\n";
  os << "disc: " << rep.disc.get_str() << " =";
  if (rep.disc < 0) os << " -1 *";
  for (std::size_t i = 0; i < rep.disc_factors.factors.size(); ++i) {
    const auto& [p, e] = rep.disc_factors.factors[i];
    os << (i ? " * " : " ") << p.get_str();
    if (e > 1) os << "^" << e;
  }
  if (rep.disc_factors.unresolved != 1)
    os << " * " << rep.disc_factors.unresolved.get_str() << " (unfactored)";
  os << "\n";
  os << "dual quotient divisors:";
  for (const Int& d : rep.dual_divisors) os << " " << d.get_str();
  os << "\n";
  for (const auto& r : rep.primes) {
    os << "p = " << r.p.get_str() << ": tame " << to_string(r.tame) << ", anisotropy "
       << to_string(r.anisotropy) << ", method " << to_string(r.method) << ", index "
       << r.index_p.get_str() << ", " << (r.certified ? "certified" : "not certified") << "\n";
    if (!r.exps_per_ideal.empty()) {
      os << "  exps per ideal:";
      for (const auto& comp : r.exps_per_ideal) {
        os << " (";
        for (std::size_t i = 0; i < comp.size(); ++i) os << (i ? "," : "") << comp[i];
        os << ")";
      }
      os << "\n";
    }
  }
  os << "closure: 1/" << rep.closure.den.get_str() << " *\n";
  for (std::size_t i = 0; i < rep.closure.basis.rows; ++i) {
    os << "  [";
    for (std::size_t j = 0; j < rep.closure.basis.cols; ++j)
      os << (j ? " " : "") << rep.closure.basis(i, j).get_str();
    os << "]\n";
  }
  os << "certified: " << (rep.certified ? "true" : "false") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

/// Parses "x^4-20x^3-20x^2+17x+2" into low-to-high coefficients.
inline Poly parse_poly(const std::string& s) {
  Poly coeffs;
  auto bump = [&](std::size_t deg, const Int& c) {
    if (coeffs.size() <= deg) coeffs.resize(deg + 1);
    coeffs[deg] += c;
  };
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  bool first = true;
  while (i < n) {
    int sign = 1;
    skip_ws();
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw Error("parse_poly: expected '+' or '-' between terms");
    }
    first = false;
    std::string digits;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
    skip_ws();
    Int coeff = digits.empty() ? Int(1) : Int(digits);
    std::size_t deg = 0;
    if (i < n && (s[i] == 'x' || s[i] == 'X')) {
      ++i;
      skip_ws();
      if (i < n && s[i] == '*') throw Error("parse_poly: unexpected '*'");
      if (i < n && s[i] == '^') {
        ++i;
        skip_ws();
        std::string expd;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) expd.push_back(s[i++]);
        if (expd.empty()) throw Error("parse_poly: missing exponent after '^'");
        deg = std::stoul(expd);
      } else {
        deg = 1;
      }
    } else if (digits.empty()) {
      throw Error("parse_poly: expected coefficient or 'x'");
    }
    bump(deg, sign * coeff);
    skip_ws();
  }
  if (coeffs.empty()) throw Error("parse_poly: empty polynomial");
  trim(coeffs);
  return coeffs;
}

inline TableOrder order_from_table_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("unit") || !j.contains("table"))
    throw Error("table file: expected fields n, unit, table");
  std::size_t n = j["n"].get<std::size_t>();
  std::vector<Int> unit;
  for (const auto& u : j["unit"]) unit.emplace_back(u.get<long>());
  if (unit.size() != n) throw Error("table file: unit length mismatch");
  std::vector<Int> tab(n * n * n);
  const auto& t = j["table"];
  if (t.size() != n) throw Error("table file: table shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i].size() != n) throw Error("table file: table shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
      if (t[i][k].size() != n) throw Error("table file: table shape mismatch");
      for (std::size_t l = 0; l < n; ++l) tab[(i * n + k) * n + l] = Int(t[i][k][l].get<long>());
    }
  }
  return TableOrder::from_table(n, std::move(tab), std::move(unit));
}

}  // namespace maxorder
